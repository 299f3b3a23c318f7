#ifndef TRAILERNET_TRAFFIC_CONSUMER_HPP
#define TRAILERNET_TRAFFIC_CONSUMER_HPP

#include "producer.hpp"
#include "../metrics/stats.hpp"

namespace tnet::traffic {

struct ConsumerStats
{
  std::string stream;
  std::uint64_t interests_sent = 0; ///< ndn only
  std::uint64_t timeouts = 0;       ///< ndn only
  std::uint64_t samples = 0;
  std::uint64_t length_mismatches = 0;
  std::uint64_t acks_sent = 0;
  std::uint64_t packets_min = 0; ///< network packets per completed sample
  std::uint64_t packets_max = 0;
  std::uint64_t received_wire_bytes = 0;
  net::SendCounters sent;
  std::string payload_digest;
  bool upstream_closed = false;

  void note_sample(std::uint64_t packets)
  {
    packets_min = samples == 0 ? packets : std::min(packets_min, packets);
    packets_max = std::max(packets_max, packets);
    ++samples;
  }
};

struct ConsumerResult
{
  ConsumerStats stats;
  std::vector<std::int64_t> receipts_ns; ///< one per completed sample, in order
};

struct NdnConsumerConfig
{
  StreamProfile profile;
  Protocol protocol = Protocol::NdnTcp;
  net::Endpoint forwarder;
  Transport face = Transport::Tcp; ///< transport to the attached forwarder
  DelayPlacement delay = DelayPlacement::Consumer;
  PacingMode pacing = PacingMode::Anchored;
  std::chrono::milliseconds timeout{1000};
  std::uint64_t max_samples = 0;
};

/** Interest/Data loop: send, await Data, acknowledge (ndn-tcp), sleep one
 *  period measured from receipt. The stop flag is read only at the top of
 *  the loop, so samples == interests_sent - timeouts always holds. */
inline ConsumerResult run_ndn_consumer(const NdnConsumerConfig& cfg, const std::atomic<bool>& stop)
{
  ConsumerResult out;
  auto& stats = out.stats;
  stats.stream = to_string(cfg.profile.label);
  crypto::Sha256Stream digest;
  auto channel = net::PacketChannel::connect(cfg.face, cfg.forwarder);
  Pacer pacer(cfg.profile.period, cfg.pacing);

  while (!stop.load(std::memory_order_relaxed) && (cfg.max_samples == 0 || stats.samples < cfg.max_samples)) {
    Interest interest;
    interest.name = cfg.profile.ndn_name;
    interest.must_be_fresh = true; // every request wants a new sample
    interest.nonce = crypto::random_u32();
    channel.send(encode_interest(interest));
    ++stats.interests_sent;

    std::optional<Data> data;
    auto deadline = Clock::now() + cfg.timeout;
    while (!data) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
      if (left < 0) {
        break;
      }
      auto pkt = channel.receive(static_cast<int>(left));
      if (!pkt) {
        break;
      }
      if (pkt->empty() || (*pkt)[0] != tlv::Data) {
        continue;
      }
      try {
        auto d = decode_data(*pkt).value;
        if (d.name == interest.name) {
          stats.received_wire_bytes += wire_size(pkt->size(), cfg.face).total_on_wire;
          data = std::move(d);
        }
      }
      catch (const tlv::DecodeError&) {
      }
    }
    if (!data) {
      ++stats.timeouts;
      if (channel.closed()) {
        stats.upstream_closed = true;
        break;
      }
      continue;
    }
    auto receipt = Clock::now();
    out.receipts_ns.push_back(to_ns(receipt));
    if (data->content.size() != cfg.profile.payload_bytes) {
      ++stats.length_mismatches;
    }
    digest.update(data->content);
    stats.note_sample(1);
    if (cfg.protocol == Protocol::NdnTcp) {
      channel.send(encode_app_ack(static_cast<std::uint32_t>(stats.samples - 1)));
      ++stats.acks_sent;
    }
    if (cfg.delay == DelayPlacement::Consumer) {
      pacer.wait(receipt);
    }
  }
  stats.sent = channel.sent();
  stats.payload_digest = crypto::to_hex(digest.peek());
  return out;
}

struct PubSubConsumerConfig
{
  StreamProfile profile;
  net::Endpoint bind;
  std::uint64_t max_samples = 0;
};

/// Passive subscriber; every completed sample is timestamped on arrival.
inline ConsumerResult run_pubsub_consumer(const PubSubConsumerConfig& cfg, const std::atomic<bool>& stop,
                                          std::function<void()> on_ready = {})
{
  ConsumerResult out;
  auto& stats = out.stats;
  stats.stream = to_string(cfg.profile.label);
  crypto::Sha256Stream digest;
  std::optional<pubsub::Subscriber> sub;
  try {
    sub.emplace(cfg.profile.topic, cfg.bind);
  }
  catch (const std::exception& e) {
    throw StartupError(std::string("subscriber bind failed: ") + e.what());
  }
  if (on_ready) {
    on_ready();
  }
  while (!stop.load(std::memory_order_relaxed) && (cfg.max_samples == 0 || stats.samples < cfg.max_samples)) {
    auto s = sub->receive(100);
    if (!s) {
      continue;
    }
    out.receipts_ns.push_back(s->receipt_ns);
    if (s->payload.size() != cfg.profile.payload_bytes) {
      ++stats.length_mismatches;
    }
    digest.update(s->payload);
    stats.note_sample(s->fragments);
  }
  stats.acks_sent = sub->acks_sent().packets;
  stats.sent = sub->acks_sent();
  stats.payload_digest = crypto::to_hex(digest.peek());
  return out;
}

/// Turns a consumer's receipt instants into metric samples.
inline std::vector<metrics::LatencySample> latency_samples(const ConsumerResult& r)
{
  return metrics::make_samples(r.stats.stream, r.receipts_ns);
}

} // namespace tnet::traffic

#endif // TRAILERNET_TRAFFIC_CONSUMER_HPP
