#ifndef TRAILERNET_HARNESS_CODEC_DUMP_HPP
#define TRAILERNET_HARNESS_CODEC_DUMP_HPP

// Canonical example packets for each stream, rendered as hex. The golden
// corpus under tests/golden is produced from (and checked against) this.

#include "../codec/app_ack.hpp"
#include "../codec/data.hpp"
#include "../codec/hexdump.hpp"
#include "../codec/interest.hpp"
#include "../codec/wire.hpp"
#include "../pubsub/fragmenter.hpp"
#include "../traffic/profile.hpp"

namespace tnet::harness {

inline constexpr std::array<std::string_view, 5> kDumpKinds = {"interest", "data", "app-ack", "pubsub", "pubsub-ack"};

struct DumpOptions
{
  std::uint32_t nonce = 0x01020304;
  std::uint64_t sequence = 1;
  std::size_t mtu = pubsub::kDefaultMtu;
};

/// Deterministic payload: byte i is i & 0xff.
inline Bytes ramp_payload(std::size_t n)
{
  Bytes b(n);
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = static_cast<std::uint8_t>(i & 0xFF);
  }
  return b;
}

/// The packets of one kind for one stream; pubsub gives one per fragment.
inline std::vector<Bytes> dump_packets(std::string_view kind, const traffic::StreamProfile& p, const DumpOptions& o)
{
  if (kind == "interest") {
    Interest i;
    i.name = p.ndn_name;
    i.nonce = o.nonce;
    i.must_be_fresh = true;
    return {encode_interest(i)};
  }
  if (kind == "data") {
    return {encode_data(make_unsigned_data(p.ndn_name, ramp_payload(p.payload_bytes)))};
  }
  if (kind == "app-ack") {
    return {encode_app_ack(static_cast<std::uint32_t>(o.sequence))};
  }
  if (kind == "pubsub") {
    return pubsub::publish(p.topic, ramp_payload(p.payload_bytes), o.mtu, o.sequence);
  }
  if (kind == "pubsub-ack") {
    return {pubsub::encode_ack(p.topic.id, o.sequence)};
  }
  throw std::invalid_argument("unknown packet kind '" + std::string(kind) + "'");
}

inline Transport dump_transport(std::string_view kind)
{
  return kind == "app-ack" ? Transport::Tcp : Transport::Udp;
}

/** "# <kind> <stream> packet k/n: B bytes, W on the wire (transport)"
 *  followed by the hex lines of each packet. */
inline std::string codec_dump(std::string_view kind, const traffic::StreamProfile& p, const DumpOptions& o = {})
{
  auto packets = dump_packets(kind, p, o);
  auto t = dump_transport(kind);
  std::string out;
  for (std::size_t k = 0; k < packets.size(); ++k) {
    out += "# " + std::string(kind) + " " + std::string(traffic::to_string(p.label)) + " packet " +
           std::to_string(k + 1) + "/" + std::to_string(packets.size()) + ": " + std::to_string(packets[k].size()) +
           " bytes, " + std::to_string(wire_size(packets[k].size(), t).total_on_wire) + " on the wire (" +
           std::string(to_string(t)) + ")\n";
    out += hexdump(packets[k]);
  }
  return out;
}

} // namespace tnet::harness

#endif // TRAILERNET_HARNESS_CODEC_DUMP_HPP
