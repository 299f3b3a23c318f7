#ifndef TRAILERNET_TRAFFIC_PRODUCER_HPP
#define TRAILERNET_TRAFFIC_PRODUCER_HPP

#include "pacing.hpp"
#include "payload.hpp"
#include "protocol.hpp"
#include "../codec/app_ack.hpp"
#include "../codec/data.hpp"
#include "../codec/interest.hpp"
#include "../crypto.hpp"
#include "../forwarder/daemon.hpp"
#include "../pubsub/endpoint.hpp"

#include <atomic>

namespace tnet::traffic {

struct ProducerStats
{
  std::string stream;
  std::uint64_t samples = 0;            ///< payloads sent
  std::uint64_t interests_received = 0; ///< ndn only
  std::uint64_t acks_received = 0;
  std::uint64_t fragments_min = 0;      ///< network packets per sample
  std::uint64_t fragments_max = 0;
  net::SendCounters sent;
  std::string payload_digest; ///< SHA-256 over all payloads in send order

  void note_sample(std::uint64_t fragments)
  {
    fragments_min = samples == 0 ? fragments : std::min(fragments_min, fragments);
    fragments_max = std::max(fragments_max, fragments);
    ++samples;
  }
};

class StartupError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct NdnProducerConfig
{
  StreamProfile profile;
  net::Endpoint forwarder;
  std::uint64_t seed = 1;
  DelayPlacement delay = DelayPlacement::Consumer;
  PacingMode pacing = PacingMode::Anchored;
};

/// Registers `prefix` with the forwarder behind `channel` and waits for the reply.
inline void register_prefix(net::PacketChannel& channel, const Name& prefix, int timeout_ms = 2000)
{
  auto request = fwd::make_registration(prefix, crypto::random_u32());
  channel.send(encode_interest(request));
  auto deadline = Clock::now() + std::chrono::milliseconds(timeout_ms);
  while (Clock::now() < deadline) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    auto pkt = channel.receive(static_cast<int>(left));
    if (!pkt) {
      break;
    }
    if (!pkt->empty() && (*pkt)[0] == tlv::Data && decode_data(*pkt).value.name == request.name) {
      return;
    }
  }
  throw StartupError("prefix registration for " + prefix.to_uri() + " not confirmed");
}

/** Answers every Interest under profile.ndn_name with a fresh payload. Runs
 *  until `stop` is set or the forwarder closes the face. */
inline ProducerStats run_ndn_producer(const NdnProducerConfig& cfg, const std::atomic<bool>& stop,
                                      std::function<void()> on_ready = {})
{
  ProducerStats stats;
  stats.stream = to_string(cfg.profile.label);
  PayloadSource source(cfg.seed, cfg.profile.label, cfg.profile.payload_bytes);
  crypto::Sha256Stream digest;

  net::PacketChannel channel = [&] {
    try {
      return net::PacketChannel::connect(Transport::Tcp, cfg.forwarder);
    }
    catch (const std::exception& e) {
      throw StartupError(std::string("producer cannot reach forwarder: ") + e.what());
    }
  }();
  register_prefix(channel, cfg.profile.ndn_name);
  if (on_ready) {
    on_ready();
  }

  Pacer pacer(cfg.profile.period, cfg.pacing);
  std::optional<TimePoint> last_send;
  while (!stop.load(std::memory_order_relaxed)) {
    auto pkt = channel.receive(100);
    if (!pkt) {
      if (channel.closed()) {
        break;
      }
      continue;
    }
    if (pkt->empty()) {
      continue;
    }
    if ((*pkt)[0] == tlv::AppAck) {
      ++stats.acks_received;
      continue;
    }
    if ((*pkt)[0] != tlv::Interest) {
      continue;
    }
    Interest interest;
    try {
      interest = decode_interest(*pkt).value;
    }
    catch (const tlv::DecodeError&) {
      continue;
    }
    if (!cfg.profile.ndn_name.is_prefix_of(interest.name)) {
      continue;
    }
    ++stats.interests_received;
    if (cfg.delay == DelayPlacement::Producer && last_send) {
      pacer.wait(*last_send);
    }
    Bytes payload = source.next();
    digest.update(payload);
    channel.send(encode_data(make_unsigned_data(interest.name, std::move(payload))));
    last_send = Clock::now();
    stats.note_sample(1);
  }
  stats.sent = channel.sent();
  stats.payload_digest = crypto::to_hex(digest.peek());
  return stats;
}

struct PubSubProducerConfig
{
  StreamProfile profile;
  net::Endpoint subscriber;
  std::size_t mtu = pubsub::kDefaultMtu;
  std::uint64_t seed = 1;
  PacingMode pacing = PacingMode::Anchored;
  std::uint64_t max_samples = 0; ///< 0 = until stopped
};

/// Publishes one fresh payload per period until stopped or max_samples reached.
inline ProducerStats run_pubsub_producer(const PubSubProducerConfig& cfg, const std::atomic<bool>& stop)
{
  ProducerStats stats;
  stats.stream = to_string(cfg.profile.label);
  PayloadSource source(cfg.seed, cfg.profile.label, cfg.profile.payload_bytes);
  crypto::Sha256Stream digest;
  std::optional<pubsub::Publisher> publisher;
  try {
    publisher.emplace(cfg.profile.topic, cfg.subscriber, cfg.mtu);
  }
  catch (const std::exception& e) {
    throw StartupError(std::string("publisher setup failed: ") + e.what());
  }

  Pacer pacer(cfg.profile.period, cfg.pacing);
  while (!stop.load(std::memory_order_relaxed) && (cfg.max_samples == 0 || stats.samples < cfg.max_samples)) {
    Bytes payload = source.next();
    digest.update(payload);
    auto sent_at = Clock::now();
    auto fragments = publisher->publish(payload, static_cast<std::uint64_t>(to_ns(sent_at)));
    stats.note_sample(fragments);
    pacer.wait(sent_at);
  }
  // late acknowledgements
  auto until = Clock::now() + std::chrono::milliseconds(50);
  while (Clock::now() < until && publisher->acks_received() < stats.samples) {
    net::wait_readable(publisher->fd(), 10);
    publisher->poll_acks();
  }
  stats.acks_received = publisher->acks_received();
  stats.sent = publisher->sent();
  stats.payload_digest = crypto::to_hex(digest.peek());
  return stats;
}

} // namespace tnet::traffic

#endif // TRAILERNET_TRAFFIC_PRODUCER_HPP
