#ifndef TRAILERNET_PUBSUB_ENDPOINT_HPP
#define TRAILERNET_PUBSUB_ENDPOINT_HPP

#include "fragmenter.hpp"
#include "reassembler.hpp"
#include "../net/channel.hpp"

namespace tnet::pubsub {

/// UDP publisher for one topic. Not thread-safe; one per thread.
class Publisher
{
public:
  Publisher(Topic topic, net::Endpoint destination, std::size_t mtu = kDefaultMtu,
            net::Endpoint local = {"0.0.0.0", 0})
    : topic_(std::move(topic))
    , destination_(destination.to_sockaddr())
    , mtu_(mtu)
    , fd_(net::udp_bind(local))
  {
    if (mtu_ < kMinMtu) {
      throw std::invalid_argument("mtu too small");
    }
    net::set_nonblocking(fd_.get());
  }

  const Topic& topic() const { return topic_; }
  std::uint64_t next_sequence() const { return sequence_; }
  const net::SendCounters& sent() const { return sent_; }
  std::uint64_t acks_received() const { return acks_; }
  std::uint64_t ack_wire_bytes() const { return ack_wire_bytes_; }
  std::uint64_t send_failures() const { return send_failures_; }
  int fd() const { return fd_.get(); }

  /// Sends one sample; returns the number of datagrams it took.
  std::size_t publish(ByteView payload, std::uint64_t timestamp_ns = 0)
  {
    auto datagrams = pubsub::publish(topic_, payload, mtu_, sequence_++, timestamp_ns);
    for (const auto& d : datagrams) {
      ssize_t n = -1;
      for (int attempt = 0; attempt < 50; ++attempt) {
        n = ::sendto(fd_.get(), d.data(), d.size(), 0, reinterpret_cast<const sockaddr*>(&destination_),
                     sizeof destination_);
        if (n >= 0 || (errno != EAGAIN && errno != ENOBUFS && errno != ECONNREFUSED)) {
          break;
        }
        if (errno != ECONNREFUSED) {
          net::wait_writable(fd_.get());
        }
      }
      if (n > 0) {
        sent_.add(d.size(), Transport::Udp, static_cast<std::size_t>(n));
      }
      else {
        ++send_failures_;
      }
    }
    poll_acks();
    return datagrams.size();
  }

  /// Drains acknowledgements without blocking.
  std::size_t poll_acks()
  {
    std::size_t n = 0;
    std::uint8_t buf[2048];
    for (;;) {
      ssize_t r = ::recv(fd_.get(), buf, sizeof buf, 0);
      if (r < 0) {
        break;
      }
      try {
        auto m = decode_message(ByteView(buf, static_cast<std::size_t>(r)));
        if (m.header.is_ack() && m.header.topic_id == topic_.id) {
          ++acks_;
          ack_wire_bytes_ += wire_size(static_cast<std::size_t>(r), Transport::Udp).total_on_wire;
          ++n;
        }
      }
      catch (const MessageError&) {
      }
    }
    return n;
  }

private:
  Topic topic_;
  sockaddr_in destination_;
  std::size_t mtu_;
  net::Fd fd_;
  std::uint64_t sequence_ = 0;
  net::SendCounters sent_;
  std::uint64_t acks_ = 0;
  std::uint64_t ack_wire_bytes_ = 0;
  std::uint64_t send_failures_ = 0;
};

struct ReceivedSample
{
  std::uint64_t sequence = 0;
  Bytes payload;
  std::int64_t receipt_ns = 0;
  std::uint16_t fragments = 0;
};

/** UDP subscriber for one topic. Each completed sample is delivered once
 *  and acknowledged to its sender with a header-only message. */
class Subscriber
{
public:
  Subscriber(Topic topic, net::Endpoint local,
             std::chrono::milliseconds fragment_timeout = std::chrono::milliseconds(100))
    : topic_(std::move(topic))
    , fd_(net::udp_bind(local))
    , reassembler_(fragment_timeout)
  {
    net::set_nonblocking(fd_.get());
  }

  const Topic& topic() const { return topic_; }
  net::Endpoint endpoint() const { return net::local_endpoint(fd_.get()); }
  const ReassemblyCounters& reassembly() const { return reassembler_.counters(); }
  const net::SendCounters& acks_sent() const { return acks_sent_; }
  std::uint64_t foreign_topic() const { return foreign_; }
  std::uint64_t malformed() const { return malformed_; }
  std::uint64_t datagrams() const { return datagrams_; }

  /// Waits up to `timeout_ms` for the next completed sample.
  std::optional<ReceivedSample> receive(int timeout_ms)
  {
    auto deadline = Clock::now() + std::chrono::milliseconds(timeout_ms);
    std::uint8_t buf[65536];
    for (;;) {
      sockaddr_in from{};
      socklen_t len = sizeof from;
      ssize_t r = ::recvfrom(fd_.get(), buf, sizeof buf, 0, reinterpret_cast<sockaddr*>(&from), &len);
      auto now = Clock::now();
      reassembler_.expire(now);
      if (r < 0) {
        int left = static_cast<int>(std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count());
        if (left < 0 || (errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR)) {
          return std::nullopt;
        }
        net::wait_readable(fd_.get(), std::min(left, 20));
        continue;
      }
      ++datagrams_;
      std::int64_t receipt = to_ns(now);
      Message m;
      try {
        m = decode_message(ByteView(buf, static_cast<std::size_t>(r)));
      }
      catch (const MessageError&) {
        ++malformed_;
        continue;
      }
      if (m.header.is_ack()) {
        continue;
      }
      if (m.header.topic_id != topic_.id) {
        ++foreign_;
        continue;
      }
      auto result = reassembler_.push(m, now);
      if (result.status != PushStatus::Complete) {
        continue;
      }
      auto ack = encode_ack(topic_.id, result.sample->sequence);
      ssize_t n = ::sendto(fd_.get(), ack.data(), ack.size(), 0, reinterpret_cast<sockaddr*>(&from), len);
      if (n > 0) {
        acks_sent_.add(ack.size(), Transport::Udp, static_cast<std::size_t>(n));
      }
      return ReceivedSample{result.sample->sequence, std::move(result.sample->payload), receipt,
                            result.sample->fragments};
    }
  }

private:
  Topic topic_;
  net::Fd fd_;
  Reassembler reassembler_;
  net::SendCounters acks_sent_;
  std::uint64_t foreign_ = 0;
  std::uint64_t malformed_ = 0;
  std::uint64_t datagrams_ = 0;
};

} // namespace tnet::pubsub

#endif // TRAILERNET_PUBSUB_ENDPOINT_HPP
