#ifndef TRAILERNET_METRICS_BYTES_HPP
#define TRAILERNET_METRICS_BYTES_HPP

#include "reference.hpp"
#include "../codec/app_ack.hpp"
#include "../codec/data.hpp"
#include "../codec/interest.hpp"
#include "../codec/wire.hpp"
#include "../pubsub/fragmenter.hpp"
#include "../traffic/profile.hpp"

#include <vector>

namespace tnet::metrics {

/// Per-sample on-wire cost of one stream under both protocols, UDP transport.
struct StreamBytes
{
  std::string stream;
  std::size_t payload = 0;
  std::size_t ndn_packets = 0;
  std::size_t ndn_total = 0;    ///< Data packet incl. Ethernet/IP/UDP
  std::size_t ndn_overhead = 0; ///< NDN TLV bytes only
  std::size_t pubsub_packets = 0;
  std::size_t pubsub_total = 0;
  std::size_t pubsub_overhead = 0; ///< pub/sub headers only
  std::size_t reference_ndn_total = 0;
  std::size_t reference_pubsub_total = 0;

  bool ndn_leaner() const { return ndn_overhead < pubsub_overhead; }
};

inline StreamBytes stream_bytes(const traffic::StreamProfile& p, std::size_t mtu = pubsub::kDefaultMtu)
{
  StreamBytes b;
  b.stream = traffic::to_string(p.label);
  b.payload = p.payload_bytes;
  Bytes payload(p.payload_bytes, 0);

  auto data = encode_data(make_unsigned_data(p.ndn_name, payload));
  auto w = wire_size(data.size(), Transport::Udp, payload.size());
  b.ndn_packets = 1;
  b.ndn_total = w.total_on_wire;
  b.ndn_overhead = w.protocol_overhead_bytes;

  for (const auto& frag : pubsub::publish(p.topic, payload, mtu, 0)) {
    auto fw = wire_size(frag.size(), Transport::Udp);
    ++b.pubsub_packets;
    b.pubsub_total += fw.total_on_wire;
  }
  b.pubsub_overhead = b.pubsub_total - b.payload - b.pubsub_packets * transport_overhead(Transport::Udp);

  for (const auto& r : reference::kBytesOnWire) {
    if (r.stream == b.stream) {
      b.reference_ndn_total = r.ndn_total;
      b.reference_pubsub_total = r.pubsub_total;
    }
  }
  return b;
}

inline std::vector<StreamBytes> bytes_table(std::size_t mtu = pubsub::kDefaultMtu)
{
  std::vector<StreamBytes> out;
  for (auto label : {traffic::StreamLabel::Can, traffic::StreamLabel::Lidar, traffic::StreamLabel::Cam}) {
    out.push_back(stream_bytes(traffic::default_profile(label), mtu));
  }
  return out;
}

/// On-wire size of the consumer's Interest for `name` over UDP.
inline std::size_t interest_on_wire(const Name& name)
{
  Interest i;
  i.name = name;
  i.must_be_fresh = true;
  return wire_size(encode_interest(i).size(), Transport::Udp).total_on_wire;
}

inline std::size_t pubsub_ack_on_wire()
{
  return wire_size(pubsub::encode_ack(pubsub::kCanTopic.id, 0).size(), Transport::Udp).total_on_wire;
}

inline std::size_t app_ack_on_wire()
{
  return wire_size(kAppAckSize, Transport::Tcp).total_on_wire;
}

} // namespace tnet::metrics

#endif // TRAILERNET_METRICS_BYTES_HPP
