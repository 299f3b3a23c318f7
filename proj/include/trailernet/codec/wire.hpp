#ifndef TRAILERNET_CODEC_WIRE_HPP
#define TRAILERNET_CODEC_WIRE_HPP

#include <cstddef>
#include <stdexcept>
#include <string_view>

namespace tnet {

enum class Transport
{
  Udp,
  Tcp,
};

inline constexpr std::size_t kEthernetHeader = 14; // untagged
inline constexpr std::size_t kIpv4Header = 20;     // no options
inline constexpr std::size_t kUdpHeader = 8;
inline constexpr std::size_t kTcpHeader = 20; // no options

constexpr std::size_t transport_overhead(Transport t) noexcept
{
  return kEthernetHeader + kIpv4Header + (t == Transport::Udp ? kUdpHeader : kTcpHeader);
}

struct WireAccounting
{
  std::size_t payload_bytes = 0;
  std::size_t protocol_overhead_bytes = 0;
  std::size_t transport_overhead_bytes = 0;
  std::size_t total_on_wire = 0;

  friend bool operator==(const WireAccounting&, const WireAccounting&) = default;
};

/// Bytes on an Ethernet link for one packet of `packet_bytes`, of which
/// `payload_bytes` are application payload (the rest is protocol header).
constexpr WireAccounting wire_size(std::size_t packet_bytes, Transport t, std::size_t payload_bytes)
{
  if (payload_bytes > packet_bytes) {
    throw std::invalid_argument("payload larger than packet");
  }
  WireAccounting w;
  w.payload_bytes = payload_bytes;
  w.protocol_overhead_bytes = packet_bytes - payload_bytes;
  w.transport_overhead_bytes = transport_overhead(t);
  w.total_on_wire = packet_bytes + w.transport_overhead_bytes;
  return w;
}

constexpr WireAccounting wire_size(std::size_t packet_bytes, Transport t)
{
  return wire_size(packet_bytes, t, packet_bytes);
}

inline std::string_view to_string(Transport t)
{
  return t == Transport::Udp ? "udp" : "tcp";
}

} // namespace tnet

#endif // TRAILERNET_CODEC_WIRE_HPP
