#ifndef TRAILERNET_NET_CHANNEL_HPP
#define TRAILERNET_NET_CHANNEL_HPP

#include "socket.hpp"
#include "stream_framer.hpp"
#include "../clock.hpp"
#include "../codec/wire.hpp"

#include <optional>

namespace tnet::net {

/// What an application endpoint put on the wire.
struct SendCounters
{
  std::uint64_t packets = 0;
  std::uint64_t socket_bytes = 0; ///< bytes accepted by send()/sendto()
  std::uint64_t wire_bytes = 0;   ///< sum of wire_size() over packets

  void add(std::size_t packet_bytes, Transport t, std::size_t accepted)
  {
    ++packets;
    socket_bytes += accepted;
    wire_bytes += wire_size(packet_bytes, t).total_on_wire;
  }
};

/** Packet-oriented connection from an application to a forwarder: either a
 *  TCP stream of TLV elements or a connected UDP socket carrying one element
 *  per datagram. */
class PacketChannel
{
public:
  static PacketChannel connect(Transport t, const Endpoint& remote)
  {
    PacketChannel c;
    c.transport_ = t;
    if (t == Transport::Tcp) {
      c.fd_ = tcp_connect_retry(remote);
    }
    else {
      c.fd_ = udp_bind(Endpoint{"0.0.0.0", 0});
      auto sa = remote.to_sockaddr();
      if (::connect(c.fd_.get(), reinterpret_cast<sockaddr*>(&sa), sizeof sa) != 0) {
        throw sys_error("connect udp " + remote.to_string());
      }
    }
    return c;
  }

  Transport transport() const { return transport_; }
  int fd() const { return fd_.get(); }
  const SendCounters& sent() const { return sent_; }
  bool closed() const { return closed_; }

  void send(ByteView packet)
  {
    if (transport_ == Transport::Tcp) {
      send_all(fd_.get(), packet);
      sent_.add(packet.size(), transport_, packet.size());
      return;
    }
    ssize_t n = ::send(fd_.get(), packet.data(), packet.size(), 0);
    if (n < 0 && errno == ECONNREFUSED) {
      // error left over from an earlier datagram to an absent peer
      n = ::send(fd_.get(), packet.data(), packet.size(), 0);
    }
    if (n < 0) {
      if (errno == ECONNREFUSED) {
        return;
      }
      throw sys_error("send udp");
    }
    sent_.add(packet.size(), transport_, static_cast<std::size_t>(n));
  }

  /// Next whole packet, waiting at most `timeout_ms`. nullopt on timeout or
  /// when the peer closed a TCP stream (then closed() is true).
  std::optional<Bytes> receive(int timeout_ms)
  {
    if (transport_ == Transport::Tcp) {
      if (auto p = framer_.next()) {
        return p;
      }
      auto deadline = Clock::now() + std::chrono::milliseconds(timeout_ms);
      for (;;) {
        int left = static_cast<int>(std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count());
        if (timeout_ms >= 0 && left < 0) {
          return std::nullopt;
        }
        if (!wait_readable(fd_.get(), timeout_ms < 0 ? -1 : left)) {
          continue;
        }
        std::uint8_t buf[65536];
        ssize_t n = ::recv(fd_.get(), buf, sizeof buf, 0);
        if (n == 0) {
          closed_ = true;
          return std::nullopt;
        }
        if (n < 0) {
          if (errno == EINTR || errno == EAGAIN) {
            continue;
          }
          throw sys_error("recv tcp");
        }
        framer_.feed(ByteView(buf, static_cast<std::size_t>(n)));
        if (auto p = framer_.next()) {
          return p;
        }
      }
    }
    auto deadline = Clock::now() + std::chrono::milliseconds(timeout_ms);
    for (;;) {
      int left = static_cast<int>(std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count());
      if (timeout_ms >= 0 && left < 0) {
        return std::nullopt;
      }
      if (!wait_readable(fd_.get(), timeout_ms < 0 ? -1 : left)) {
        continue;
      }
      Bytes buf(65536);
      ssize_t n = ::recv(fd_.get(), buf.data(), buf.size(), 0);
      if (n < 0) {
        // ECONNREFUSED: ICMP port unreachable from an absent peer; keep waiting
        if (errno == EINTR || errno == EAGAIN || errno == ECONNREFUSED) {
          if (errno == ECONNREFUSED) {
            ::usleep(1000);
          }
          continue;
        }
        throw sys_error("recv udp");
      }
      buf.resize(static_cast<std::size_t>(n));
      return buf;
    }
  }

private:
  PacketChannel() = default;

  Transport transport_ = Transport::Tcp;
  Fd fd_;
  StreamFramer framer_;
  SendCounters sent_;
  bool closed_ = false;
};

} // namespace tnet::net

#endif // TRAILERNET_NET_CHANNEL_HPP
