#ifndef TRAILERNET_CODEC_DATA_HPP
#define TRAILERNET_CODEC_DATA_HPP

#include "interest.hpp"
#include "../crypto.hpp"

namespace tnet {

/// Largest Content carried in one Data packet; there is no fragmentation.
inline constexpr std::size_t kMaxContentSize = 8800;

enum class SignatureKind : std::uint8_t
{
  NoneDigest = 0x00, ///< SHA-256 of the content; no key involved
  KeyedMac = 0x04,   ///< HMAC-SHA256 over encoded Name || content
};

struct Data
{
  Name name;
  Bytes content;
  std::uint8_t signature_kind = static_cast<std::uint8_t>(SignatureKind::NoneDigest);
  Bytes signature_value;

  SignatureKind kind() const { return static_cast<SignatureKind>(signature_kind); }

  friend bool operator==(const Data&, const Data&) = default;
};

class ContentTooLarge : public tlv::EncodeError
{
public:
  explicit ContentTooLarge(std::size_t n)
    : tlv::EncodeError("content of " + std::to_string(n) + " bytes exceeds " +
                       std::to_string(kMaxContentSize))
  {}
};

inline std::size_t data_encoded_size(std::size_t name_encoded, std::size_t content, std::size_t sig)
{
  std::size_t inner = name_encoded + tlv::element_size(content) + tlv::element_size(1) +
                      tlv::element_size(sig);
  return tlv::element_size(inner);
}

inline Bytes encode_data(const Data& d)
{
  if (d.content.size() > kMaxContentSize) {
    throw ContentTooLarge(d.content.size());
  }
  std::size_t inner = d.name.encoded_size() + tlv::element_size(d.content.size()) +
                      tlv::element_size(1) + tlv::element_size(d.signature_value.size());
  Bytes out;
  out.reserve(tlv::element_size(inner));
  tlv::append_header(out, tlv::Data, inner);
  d.name.encode_to(out);
  tlv::append_element(out, tlv::Content, d.content);
  const std::uint8_t kind[1] = {d.signature_kind};
  tlv::append_element(out, tlv::SignatureInfo, kind);
  tlv::append_element(out, tlv::SignatureValue, d.signature_value);
  return out;
}

inline Decoded<Data> decode_data(ByteView buf)
{
  auto outer = tlv::open_outer(buf, tlv::Data, "Data");
  auto& r = outer.inner;
  Data d;
  d.name = Name::decode(r.expect(tlv::Name, "Name"));
  auto content = r.expect(tlv::Content, "Content");
  if (content.value.size() > kMaxContentSize) {
    throw tlv::DecodeError("Content exceeds MTU", content.offset);
  }
  d.content.assign(content.value.begin(), content.value.end());
  auto info = r.expect(tlv::SignatureInfo, "SignatureInfo");
  if (info.value.size() != 1) {
    throw tlv::DecodeError("SignatureInfo must be 1 byte", info.offset);
  }
  d.signature_kind = info.value[0];
  auto sig = r.expect(tlv::SignatureValue, "SignatureValue");
  d.signature_value.assign(sig.value.begin(), sig.value.end());
  if (!r.empty()) {
    throw tlv::DecodeError("unexpected element in Data", r.position());
  }
  if (!outer.complete) {
    throw tlv::DecodeError("Data truncated", r.position());
  }
  return {std::move(d), outer.declared_size};
}

class UnknownSignatureKind : public std::runtime_error
{
public:
  explicit UnknownSignatureKind(std::uint8_t k)
    : std::runtime_error("unknown signature kind " + std::to_string(k))
  {}
};

namespace detail {
inline Bytes signed_portion(const Data& d)
{
  Bytes buf = d.name.encode();
  buf.insert(buf.end(), d.content.begin(), d.content.end());
  return buf;
}
} // namespace detail

/// Fills a content digest; verifiable without a key.
inline Data sign_digest(Data d)
{
  d.signature_kind = static_cast<std::uint8_t>(SignatureKind::NoneDigest);
  auto dg = crypto::sha256(d.content);
  d.signature_value.assign(dg.begin(), dg.end());
  return d;
}

inline Data sign_data(Data d, ByteView key)
{
  if (key.empty()) {
    throw std::invalid_argument("keyed-mac signing needs a key");
  }
  d.signature_kind = static_cast<std::uint8_t>(SignatureKind::KeyedMac);
  auto mac = crypto::hmac_sha256(key, detail::signed_portion(d));
  d.signature_value.assign(mac.begin(), mac.end());
  return d;
}

/** True iff the signature recomputes. Unknown kinds throw rather than return false. */
inline bool verify_data(const Data& d, ByteView key = {})
{
  switch (d.kind()) {
    case SignatureKind::NoneDigest: {
      auto dg = crypto::sha256(d.content);
      return crypto::equal_constant_time(dg, d.signature_value);
    }
    case SignatureKind::KeyedMac: {
      if (key.empty()) {
        return false;
      }
      auto mac = crypto::hmac_sha256(key, detail::signed_portion(d));
      return crypto::equal_constant_time(mac, d.signature_value);
    }
  }
  throw UnknownSignatureKind(d.signature_kind);
}

/// Benchmark packets: signing disabled, fixed-size zero digest so sizes are deterministic.
inline Data make_unsigned_data(Name name, Bytes content)
{
  Data d;
  d.name = std::move(name);
  d.content = std::move(content);
  d.signature_kind = static_cast<std::uint8_t>(SignatureKind::NoneDigest);
  d.signature_value.assign(crypto::kDigestSize, 0);
  return d;
}

} // namespace tnet

#endif // TRAILERNET_CODEC_DATA_HPP
