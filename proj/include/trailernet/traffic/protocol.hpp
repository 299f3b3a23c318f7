#ifndef TRAILERNET_TRAFFIC_PROTOCOL_HPP
#define TRAILERNET_TRAFFIC_PROTOCOL_HPP

#include "../codec/wire.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace tnet::traffic {

enum class Protocol
{
  NdnTcp,
  NdnUdp,
  PubSub,
};

inline const char* to_string(Protocol p)
{
  switch (p) {
    case Protocol::NdnTcp: return "ndn-tcp";
    case Protocol::NdnUdp: return "ndn-udp";
    case Protocol::PubSub: return "pubsub";
  }
  return "?";
}

inline Protocol parse_protocol(std::string_view s)
{
  if (s == "ndn-tcp") return Protocol::NdnTcp;
  if (s == "ndn-udp") return Protocol::NdnUdp;
  if (s == "pubsub") return Protocol::PubSub;
  throw std::invalid_argument("unknown protocol '" + std::string(s) + "' (ndn-tcp, ndn-udp, pubsub)");
}

inline bool is_ndn(Protocol p)
{
  return p != Protocol::PubSub;
}

/// Transport between forwarders in an NDN run.
inline Transport link_transport(Protocol p)
{
  return p == Protocol::NdnTcp ? Transport::Tcp : Transport::Udp;
}

/// Where the inter-request sleep happens in NDN runs.
enum class DelayPlacement
{
  Consumer,
  Producer,
};

inline const char* to_string(DelayPlacement d)
{
  return d == DelayPlacement::Consumer ? "consumer" : "producer";
}

inline DelayPlacement parse_placement(std::string_view s)
{
  if (s == "consumer") return DelayPlacement::Consumer;
  if (s == "producer") return DelayPlacement::Producer;
  throw std::invalid_argument("unknown delay placement '" + std::string(s) + "'");
}

} // namespace tnet::traffic

#endif // TRAILERNET_TRAFFIC_PROTOCOL_HPP
