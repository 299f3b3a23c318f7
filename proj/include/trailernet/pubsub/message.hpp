#ifndef TRAILERNET_PUBSUB_MESSAGE_HPP
#define TRAILERNET_PUBSUB_MESSAGE_HPP

#include "../codec/tlv.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace tnet::pubsub {

struct Topic
{
  std::string name;
  std::uint32_t id = 0;

  friend bool operator==(const Topic&, const Topic&) = default;
};

inline const Topic kLidarTopic{"Lidar", 1};
inline const Topic kCanTopic{"CAN", 2};
inline const Topic kCamTopic{"Cam", 3};

inline std::optional<Topic> topic_by_name(std::string_view name)
{
  for (const Topic* t : {&kLidarTopic, &kCanTopic, &kCamTopic}) {
    if (t->name == name) {
      return *t;
    }
  }
  return std::nullopt;
}

inline constexpr std::size_t kHeaderSize = 64;
inline constexpr std::uint32_t kMagic = 0x544E5053; // "TNPS"
inline constexpr std::uint8_t kVersion = 1;

enum Flags : std::uint8_t
{
  FlagAck = 0x01,
};

/** Fixed 64-byte header, all integers big-endian:
 *
 *    0  magic            u32
 *    4  version          u8
 *    5  flags            u8
 *    6  reserved         u16
 *    8  topic id         u32
 *   12  sequence         u64
 *   20  timestamp ns     u64   (publisher clock, informational)
 *   28  fragment index   u16
 *   30  fragment count   u16
 *   32  payload length   u32   (bytes following this header)
 *   36  sample length    u32   (whole sample, all fragments)
 *   40  fragment offset  u32
 *   44  reserved         20 bytes of zero
 */
struct Header
{
  std::uint8_t flags = 0;
  std::uint32_t topic_id = 0;
  std::uint64_t sequence = 0;
  std::uint64_t timestamp_ns = 0;
  std::uint16_t fragment_index = 0;
  std::uint16_t fragment_count = 1;
  std::uint32_t payload_length = 0;
  std::uint32_t sample_length = 0;
  std::uint32_t fragment_offset = 0;

  bool is_ack() const { return (flags & FlagAck) != 0; }

  friend bool operator==(const Header&, const Header&) = default;
};

namespace detail {
template<typename T>
void put_be(std::uint8_t* p, T v)
{
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    p[sizeof(T) - 1 - i] = static_cast<std::uint8_t>(v >> (8 * i));
  }
}

template<typename T>
T get_be(const std::uint8_t* p)
{
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v = static_cast<T>((v << 8) | p[i]);
  }
  return v;
}
} // namespace detail

inline void encode_header(const Header& h, std::uint8_t* out)
{
  std::fill(out, out + kHeaderSize, 0);
  detail::put_be<std::uint32_t>(out + 0, kMagic);
  out[4] = kVersion;
  out[5] = h.flags;
  detail::put_be(out + 8, h.topic_id);
  detail::put_be(out + 12, h.sequence);
  detail::put_be(out + 20, h.timestamp_ns);
  detail::put_be(out + 28, h.fragment_index);
  detail::put_be(out + 30, h.fragment_count);
  detail::put_be(out + 32, h.payload_length);
  detail::put_be(out + 36, h.sample_length);
  detail::put_be(out + 40, h.fragment_offset);
}

class MessageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct Message
{
  Header header;
  ByteView payload; ///< view into the datagram
};

/// Parses and validates one datagram.
inline Message decode_message(ByteView datagram)
{
  if (datagram.size() < kHeaderSize) {
    throw MessageError("datagram shorter than header");
  }
  const std::uint8_t* p = datagram.data();
  if (detail::get_be<std::uint32_t>(p) != kMagic) {
    throw MessageError("bad magic");
  }
  if (p[4] != kVersion) {
    throw MessageError("unsupported version " + std::to_string(p[4]));
  }
  Message m;
  m.header.flags = p[5];
  m.header.topic_id = detail::get_be<std::uint32_t>(p + 8);
  m.header.sequence = detail::get_be<std::uint64_t>(p + 12);
  m.header.timestamp_ns = detail::get_be<std::uint64_t>(p + 20);
  m.header.fragment_index = detail::get_be<std::uint16_t>(p + 28);
  m.header.fragment_count = detail::get_be<std::uint16_t>(p + 30);
  m.header.payload_length = detail::get_be<std::uint32_t>(p + 32);
  m.header.sample_length = detail::get_be<std::uint32_t>(p + 36);
  m.header.fragment_offset = detail::get_be<std::uint32_t>(p + 40);
  const auto& h = m.header;
  if (h.payload_length != datagram.size() - kHeaderSize) {
    throw MessageError("payload length field disagrees with datagram size");
  }
  if (h.fragment_count == 0 || h.fragment_index >= h.fragment_count) {
    throw MessageError("fragment index out of range");
  }
  if (static_cast<std::uint64_t>(h.fragment_offset) + h.payload_length > h.sample_length) {
    throw MessageError("fragment exceeds sample length");
  }
  m.payload = datagram.subspan(kHeaderSize);
  return m;
}

/// Header-only acknowledgement of a completed sample.
inline Bytes encode_ack(std::uint32_t topic_id, std::uint64_t sequence, std::uint64_t timestamp_ns = 0)
{
  Header h;
  h.flags = FlagAck;
  h.topic_id = topic_id;
  h.sequence = sequence;
  h.timestamp_ns = timestamp_ns;
  Bytes out(kHeaderSize);
  encode_header(h, out.data());
  return out;
}

} // namespace tnet::pubsub

#endif // TRAILERNET_PUBSUB_MESSAGE_HPP
