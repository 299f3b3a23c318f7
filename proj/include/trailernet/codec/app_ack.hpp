#ifndef TRAILERNET_CODEC_APP_ACK_HPP
#define TRAILERNET_CODEC_APP_ACK_HPP

#include "tlv.hpp"

namespace tnet {

/// Application-level acknowledgement sent by a TCP consumer after each Data:
/// an 8-byte TLV (type, length 6, 32-bit sequence, 2 reserved zero bytes).
inline constexpr std::size_t kAppAckSize = 8;

inline Bytes encode_app_ack(std::uint32_t seq)
{
  return Bytes{tlv::AppAck, 6,
               static_cast<std::uint8_t>(seq >> 24), static_cast<std::uint8_t>(seq >> 16),
               static_cast<std::uint8_t>(seq >> 8), static_cast<std::uint8_t>(seq), 0, 0};
}

inline std::uint32_t decode_app_ack(ByteView buf)
{
  if (buf.size() < kAppAckSize || buf[0] != tlv::AppAck || buf[1] != 6) {
    throw tlv::DecodeError("malformed application ACK", 0);
  }
  return (std::uint32_t{buf[2]} << 24) | (std::uint32_t{buf[3]} << 16) |
         (std::uint32_t{buf[4]} << 8) | buf[5];
}

} // namespace tnet

#endif // TRAILERNET_CODEC_APP_ACK_HPP
