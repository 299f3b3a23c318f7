#ifndef TRAILERNET_PUBSUB_FRAGMENTER_HPP
#define TRAILERNET_PUBSUB_FRAGMENTER_HPP

#include "message.hpp"

#include <vector>

namespace tnet::pubsub {

/// Largest UDP payload on a 1500-byte Ethernet MTU.
inline constexpr std::size_t kDefaultMtu = 1472;
inline constexpr std::size_t kMinMtu = kHeaderSize + 2;

inline std::size_t fragment_count(std::size_t payload, std::size_t mtu)
{
  std::size_t per = mtu - kHeaderSize;
  return (payload + per - 1) / per;
}

/** Splits one sample into datagrams of at most `mtu` bytes. Every fragment
 *  carries the full header and the shared sequence number. */
inline std::vector<Bytes> publish(const Topic& topic, ByteView payload, std::size_t mtu,
                                  std::uint64_t sequence, std::uint64_t timestamp_ns = 0)
{
  if (mtu < kMinMtu) {
    throw std::invalid_argument("mtu " + std::to_string(mtu) + " below minimum " + std::to_string(kMinMtu));
  }
  if (payload.empty()) {
    throw std::invalid_argument("empty payload");
  }
  const std::size_t per = mtu - kHeaderSize;
  const std::size_t count = fragment_count(payload.size(), mtu);
  if (count > 0xFFFF || payload.size() > 0xFFFFFFFFu) {
    throw std::invalid_argument("payload needs too many fragments");
  }
  std::vector<Bytes> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t off = i * per;
    std::size_t len = std::min(per, payload.size() - off);
    Header h;
    h.topic_id = topic.id;
    h.sequence = sequence;
    h.timestamp_ns = timestamp_ns;
    h.fragment_index = static_cast<std::uint16_t>(i);
    h.fragment_count = static_cast<std::uint16_t>(count);
    h.payload_length = static_cast<std::uint32_t>(len);
    h.sample_length = static_cast<std::uint32_t>(payload.size());
    h.fragment_offset = static_cast<std::uint32_t>(off);
    Bytes dgram(kHeaderSize + len);
    encode_header(h, dgram.data());
    std::copy(payload.begin() + static_cast<std::ptrdiff_t>(off),
              payload.begin() + static_cast<std::ptrdiff_t>(off + len), dgram.begin() + kHeaderSize);
    out.push_back(std::move(dgram));
  }
  return out;
}

} // namespace tnet::pubsub

#endif // TRAILERNET_PUBSUB_FRAGMENTER_HPP
