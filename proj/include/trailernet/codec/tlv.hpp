#ifndef TRAILERNET_CODEC_TLV_HPP
#define TRAILERNET_CODEC_TLV_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tnet {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

namespace tlv {

/** TLV type numbers of the wire format. All fit in one octet. */
enum Type : std::uint8_t
{
  Interest = 0x05,
  Data = 0x06,
  Name = 0x07,
  NameComponent = 0x08,
  Nonce = 0x0A,
  InterestLifetime = 0x0C,
  MustBeFresh = 0x12,
  Content = 0x15,
  SignatureInfo = 0x16,
  SignatureValue = 0x17,
  AppAck = 0x64,
};

/// Largest length expressible: the 3-byte escape carries 16 bits.
inline constexpr std::size_t kMaxLength = 0xFFFF;
inline constexpr std::uint8_t kLengthEscape = 0xFD;

/** Malformed input. offset() is relative to the start of the decoded buffer. */
class DecodeError : public std::runtime_error
{
public:
  DecodeError(const std::string& what, std::size_t offset)
    : std::runtime_error(what + " at offset " + std::to_string(offset))
    , offset_(offset)
  {}

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

class EncodeError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

constexpr std::size_t length_field_size(std::size_t length) noexcept
{
  return length < kLengthEscape ? 1 : 3;
}

/// Total encoded size of one element with a value of `value_size` bytes.
constexpr std::size_t element_size(std::size_t value_size) noexcept
{
  return 1 + length_field_size(value_size) + value_size;
}

inline void append_header(Bytes& out, std::uint8_t type, std::size_t length)
{
  if (length > kMaxLength) {
    throw EncodeError("TLV value of " + std::to_string(length) + " bytes exceeds 16-bit length");
  }
  out.push_back(type);
  if (length < kLengthEscape) {
    out.push_back(static_cast<std::uint8_t>(length));
  }
  else {
    out.push_back(kLengthEscape);
    out.push_back(static_cast<std::uint8_t>(length >> 8));
    out.push_back(static_cast<std::uint8_t>(length & 0xFF));
  }
}

inline void append_element(Bytes& out, std::uint8_t type, ByteView value)
{
  append_header(out, type, value.size());
  out.insert(out.end(), value.begin(), value.end());
}

/// Non-negative integer in the shortest of 1, 2, 4 or 8 big-endian bytes.
inline Bytes encode_nni(std::uint64_t v)
{
  std::size_t width = v <= 0xFF ? 1 : v <= 0xFFFF ? 2 : v <= 0xFFFFFFFFull ? 4 : 8;
  Bytes out(width);
  for (std::size_t i = 0; i < width; ++i) {
    out[width - 1 - i] = static_cast<std::uint8_t>(v >> (8 * i));
  }
  return out;
}

inline std::optional<std::uint64_t> decode_nni(ByteView value)
{
  switch (value.size()) {
    case 1:
    case 2:
    case 4:
    case 8: {
      std::uint64_t v = 0;
      for (auto b : value) {
        v = (v << 8) | b;
      }
      return v;
    }
    default:
      return std::nullopt;
  }
}

/** Size of the complete element starting at `buf`, if its header is fully present.
 *  Needs at most 4 bytes (type + 3-byte length). Throws on an unsupported length form. */
inline std::optional<std::size_t> peek_element_size(ByteView buf, std::size_t base_offset = 0)
{
  if (buf.size() < 2) {
    return std::nullopt;
  }
  std::uint8_t first = buf[1];
  if (first < kLengthEscape) {
    return 2 + static_cast<std::size_t>(first);
  }
  if (first != kLengthEscape) {
    throw DecodeError("unsupported TLV length form", base_offset + 1);
  }
  if (buf.size() < 4) {
    return std::nullopt;
  }
  std::size_t length = (static_cast<std::size_t>(buf[2]) << 8) | buf[3];
  if (length < kLengthEscape) {
    throw DecodeError("non-minimal TLV length", base_offset + 1);
  }
  return 4 + length;
}

struct Element
{
  std::uint8_t type = 0;
  ByteView value;
  std::size_t offset = 0; ///< offset of the type octet
  std::size_t size = 0;   ///< header + value
};

/** Sequential reader over a byte range. Offsets are reported relative to `base`. */
class Reader
{
public:
  explicit Reader(ByteView buf, std::size_t base = 0)
    : buf_(buf)
    , base_(base)
  {}

  bool empty() const noexcept { return pos_ >= buf_.size(); }
  std::size_t position() const noexcept { return base_ + pos_; }

  Element read()
  {
    std::size_t start = pos_;
    auto rest = buf_.subspan(pos_);
    auto total = peek_element_size(rest, base_ + start);
    if (!total) {
      throw DecodeError("truncated TLV header", base_ + start);
    }
    if (*total > rest.size()) {
      throw DecodeError("TLV value overruns buffer", base_ + start);
    }
    std::size_t header = rest[1] < kLengthEscape ? 2 : 4;
    Element e;
    e.type = rest[0];
    e.value = rest.subspan(header, *total - header);
    e.offset = base_ + start;
    e.size = *total;
    pos_ += *total;
    return e;
  }

  Element expect(std::uint8_t type, const char* what)
  {
    std::size_t at = position();
    if (empty()) {
      throw DecodeError(std::string("missing ") + what, at);
    }
    Element e = read();
    if (e.type != type) {
      throw DecodeError(std::string("expected ") + what, at);
    }
    return e;
  }

  std::optional<std::uint8_t> peek_type() const
  {
    if (empty()) {
      return std::nullopt;
    }
    return buf_[pos_];
  }

private:
  ByteView buf_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

/** Outer wrapper of a packet: checks the type and returns a reader over the
 *  value restricted to the bytes actually present, plus the declared total size.
 *  A short buffer is not rejected here; inner parsing reports where it breaks. */
struct Outer
{
  Reader inner;
  std::size_t declared_size;
  bool complete;
};

inline Outer open_outer(ByteView buf, std::uint8_t type, const char* what)
{
  if (buf.empty()) {
    throw DecodeError(std::string("empty input, expected ") + what, 0);
  }
  if (buf[0] != type) {
    throw DecodeError(std::string("expected ") + what + " wrapper", 0);
  }
  auto total = peek_element_size(buf);
  if (!total) {
    throw DecodeError("truncated TLV header", 0);
  }
  std::size_t header = buf[1] < kLengthEscape ? 2 : 4;
  std::size_t end = std::min(*total, buf.size());
  return Outer{Reader(buf.subspan(header, end - header), header), *total, *total <= buf.size()};
}

} // namespace tlv
} // namespace tnet

#endif // TRAILERNET_CODEC_TLV_HPP
