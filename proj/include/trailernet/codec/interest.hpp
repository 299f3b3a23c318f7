#ifndef TRAILERNET_CODEC_INTEREST_HPP
#define TRAILERNET_CODEC_INTEREST_HPP

#include "name.hpp"

#include <chrono>

namespace tnet {

struct Interest
{
  static constexpr std::chrono::milliseconds kDefaultLifetime{4000};

  Name name;
  std::uint32_t nonce = 0;
  std::chrono::milliseconds lifetime = kDefaultLifetime;
  bool must_be_fresh = false;

  friend bool operator==(const Interest&, const Interest&) = default;
};

/// Same request modulo nonce (and lifetime): what PIT aggregation keys on.
inline bool same_request(const Interest& a, const Interest& b)
{
  return a.name == b.name && a.must_be_fresh == b.must_be_fresh;
}

template<typename T>
struct Decoded
{
  T value;
  std::size_t consumed; ///< bytes of the input taken by this packet
};

inline Bytes encode_interest(const Interest& i)
{
  Bytes lifetime = tlv::encode_nni(static_cast<std::uint64_t>(i.lifetime.count()));
  std::size_t inner = i.name.encoded_size() + (i.must_be_fresh ? 2 : 0) + tlv::element_size(4) +
                      tlv::element_size(lifetime.size());
  Bytes out;
  out.reserve(tlv::element_size(inner));
  tlv::append_header(out, tlv::Interest, inner);
  i.name.encode_to(out);
  if (i.must_be_fresh) {
    tlv::append_header(out, tlv::MustBeFresh, 0);
  }
  const std::uint8_t nonce[4] = {
    static_cast<std::uint8_t>(i.nonce >> 24), static_cast<std::uint8_t>(i.nonce >> 16),
    static_cast<std::uint8_t>(i.nonce >> 8), static_cast<std::uint8_t>(i.nonce)};
  tlv::append_element(out, tlv::Nonce, nonce);
  tlv::append_element(out, tlv::InterestLifetime, lifetime);
  return out;
}

/** Decodes one Interest from the front of `buf`. Bytes after it are left alone. */
inline Decoded<Interest> decode_interest(ByteView buf)
{
  auto outer = tlv::open_outer(buf, tlv::Interest, "Interest");
  auto& r = outer.inner;
  Interest i;
  i.name = Name::decode(r.expect(tlv::Name, "Name"));
  if (r.peek_type() == tlv::MustBeFresh) {
    auto e = r.read();
    if (!e.value.empty()) {
      throw tlv::DecodeError("MustBeFresh must be empty", e.offset);
    }
    i.must_be_fresh = true;
  }
  auto nonce = r.expect(tlv::Nonce, "Nonce");
  if (nonce.value.size() != 4) {
    throw tlv::DecodeError("Nonce must be 4 bytes", nonce.offset);
  }
  i.nonce = (std::uint32_t{nonce.value[0]} << 24) | (std::uint32_t{nonce.value[1]} << 16) |
            (std::uint32_t{nonce.value[2]} << 8) | nonce.value[3];
  auto lifetime = r.expect(tlv::InterestLifetime, "InterestLifetime");
  auto ms = tlv::decode_nni(lifetime.value);
  if (!ms) {
    throw tlv::DecodeError("bad InterestLifetime width", lifetime.offset);
  }
  i.lifetime = std::chrono::milliseconds(static_cast<std::int64_t>(*ms));
  if (!r.empty()) {
    throw tlv::DecodeError("unexpected element in Interest", r.position());
  }
  if (!outer.complete) {
    throw tlv::DecodeError("Interest truncated", r.position());
  }
  return {std::move(i), outer.declared_size};
}

} // namespace tnet

#endif // TRAILERNET_CODEC_INTEREST_HPP
