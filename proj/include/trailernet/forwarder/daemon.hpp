#ifndef TRAILERNET_FORWARDER_DAEMON_HPP
#define TRAILERNET_FORWARDER_DAEMON_HPP

#include "forwarder.hpp"
#include "../codec/app_ack.hpp"
#include "../codec/wire.hpp"
#include "../net/channel.hpp"

#include <json.hpp>

#include <atomic>
#include <fstream>
#include <memory>

namespace tnet::fwd {

/// Static route to another forwarder, e.g. "/trailer/can=udp://127.0.0.1:6363".
struct RouteSpec
{
  Name prefix;
  Transport transport = Transport::Udp;
  net::Endpoint remote;

  static RouteSpec parse(const std::string& s)
  {
    auto eq = s.find('=');
    auto scheme = s.find("://");
    if (eq == std::string::npos || scheme == std::string::npos || scheme < eq) {
      throw std::invalid_argument("route must look like /prefix=udp://host:port, got '" + s + "'");
    }
    RouteSpec r;
    r.prefix = Name::parse(s.substr(0, eq));
    auto proto = s.substr(eq + 1, scheme - eq - 1);
    if (proto == "udp") {
      r.transport = Transport::Udp;
    }
    else if (proto == "tcp") {
      r.transport = Transport::Tcp;
    }
    else {
      throw std::invalid_argument("unknown route transport '" + proto + "'");
    }
    r.remote = net::Endpoint::parse(s.substr(scheme + 3));
    return r;
  }
};

struct DaemonOptions
{
  net::Endpoint tcp_listen{"127.0.0.1", 6363};
  net::Endpoint udp_listen{"127.0.0.1", 6363};
  std::vector<RouteSpec> routes;
  ForwarderOptions forwarder;
};

/// Names under this prefix are registration requests handled by the daemon.
inline const Name& registration_prefix()
{
  static const Name n = Name::parse("/localhost/register");
  return n;
}

inline Interest make_registration(const Name& prefix, std::uint32_t nonce)
{
  Interest i;
  i.name = registration_prefix();
  for (const auto& c : prefix.components()) {
    i.name = i.name.append(c);
  }
  i.nonce = nonce;
  return i;
}

struct FaceStats
{
  std::uint64_t packets_in = 0;
  std::uint64_t packets_out = 0;
  net::SendCounters sent;
};

/** Socket front end of a Forwarder: one TCP listener, one UDP socket, and
 *  outbound faces for static routes. A single poll() loop feeds every
 *  packet and timer through the Forwarder in arrival order. */
class Daemon
{
public:
  explicit Daemon(DaemonOptions options)
    : options_(std::move(options))
    , forwarder_(options_.forwarder)
  {
    listener_ = net::tcp_listen(options_.tcp_listen);
    net::set_nonblocking(listener_.get());
    udp_ = net::udp_bind(options_.udp_listen);
    net::set_nonblocking(udp_.get());
  }

  Forwarder& forwarder() { return forwarder_; }
  net::Endpoint tcp_endpoint() const { return net::local_endpoint(listener_.get()); }
  net::Endpoint udp_endpoint() const { return net::local_endpoint(udp_.get()); }

  /// Creates faces for the configured routes. TCP routes wait for their peer.
  void connect_routes()
  {
    for (const auto& r : options_.routes) {
      FaceId id = 0;
      if (r.transport == Transport::Tcp) {
        net::Fd fd = net::tcp_connect_retry(r.remote, 200, 50);
        net::set_nonblocking(fd.get());
        id = add_tcp_face(std::move(fd));
      }
      else {
        id = udp_face_for(r.remote);
      }
      forwarder_.register_prefix(r.prefix, id);
    }
  }

  void run(const std::atomic<bool>& stop)
  {
    auto last_expire = Clock::now();
    std::vector<pollfd> fds;
    std::vector<FaceId> owners;
    while (!stop.load(std::memory_order_relaxed)) {
      fds.clear();
      owners.clear();
      fds.push_back({listener_.get(), POLLIN, 0});
      owners.push_back(0);
      fds.push_back({udp_.get(), POLLIN, 0});
      owners.push_back(0);
      for (auto& [id, io] : tcp_) {
        short ev = POLLIN;
        if (!io.out.empty()) {
          ev |= POLLOUT;
        }
        fds.push_back({io.fd.get(), ev, 0});
        owners.push_back(id);
      }
      int rc = ::poll(fds.data(), fds.size(), 50);
      if (rc < 0 && errno != EINTR) {
        throw net::sys_error("poll");
      }
      if (rc > 0) {
        if (fds[0].revents & POLLIN) {
          accept_all();
        }
        if (fds[1].revents & POLLIN) {
          drain_udp();
        }
        for (std::size_t k = 2; k < fds.size(); ++k) {
          if (fds[k].revents == 0) {
            continue;
          }
          auto it = tcp_.find(owners[k]);
          if (it == tcp_.end()) {
            continue;
          }
          if (fds[k].revents & POLLOUT) {
            flush(owners[k]);
          }
          if (fds[k].revents & (POLLIN | POLLHUP | POLLERR)) {
            read_tcp(owners[k]);
          }
        }
      }
      auto now = Clock::now();
      if (now - last_expire >= std::chrono::milliseconds(100)) {
        forwarder_.expire_pit(now);
        last_expire = now;
      }
    }
  }

  nlohmann::json stats() const
  {
    const auto& c = forwarder_.counters();
    nlohmann::json j;
    j["counters"] = {{"interests_in", c.interests_in}, {"data_in", c.data_in},
                     {"interests_out", c.interests_out}, {"data_out", c.data_out},
                     {"no_route", c.no_route}, {"unsolicited", c.unsolicited},
                     {"duplicate_nonce", c.duplicate_nonce}, {"aggregated", c.aggregated},
                     {"cs_hits", c.cs_hits}, {"app_acks", c.app_acks},
                     {"pit_size", forwarder_.pit().size()}, {"dropped_backlog", dropped_backlog_},
                     {"malformed", malformed_}};
    auto faces = nlohmann::json::array();
    for (const auto& [id, st] : face_stats_) {
      nlohmann::json f{{"id", id},
                       {"transport", face_uris_.count(id) && face_uris_.at(id).first.rfind("tcp", 0) == 0 ? "tcp" : "udp"},
                       {"packets_in", st.packets_in},
                       {"packets_out", st.packets_out},
                       {"packets_sent", st.sent.packets},
                       {"socket_bytes", st.sent.socket_bytes},
                       {"wire_bytes", st.sent.wire_bytes}};
      if (auto it = face_uris_.find(id); it != face_uris_.end()) {
        f["local_uri"] = it->second.first;
        f["remote_uri"] = it->second.second;
      }
      faces.push_back(f);
    }
    j["faces"] = faces;
    return j;
  }

private:
  struct TcpIo
  {
    net::Fd fd;
    net::StreamFramer framer;
    Bytes out;
  };

  static constexpr std::size_t kMaxBacklog = 16u << 20;

  FaceId add_tcp_face(net::Fd fd)
  {
    auto local = "tcp4://" + net::local_endpoint(fd.get()).to_string();
    auto remote = "tcp4://" + net::peer_endpoint(fd.get()).to_string();
    FaceId id = forwarder_.add_face(local, remote, FaceTransport::Tcp);
    face_uris_[id] = {local, remote};
    net::set_nodelay(fd.get());
    tcp_.emplace(id, TcpIo{std::move(fd), {}, {}});
    return id;
  }

  FaceId udp_face_for(const net::Endpoint& remote)
  {
    if (auto it = udp_faces_.find(remote); it != udp_faces_.end()) {
      return it->second;
    }
    auto local = "udp4://" + udp_endpoint().to_string();
    auto uri = "udp4://" + remote.to_string();
    FaceId id = forwarder_.add_face(local, uri, FaceTransport::Udp);
    face_uris_[id] = {local, uri};
    udp_faces_.emplace(remote, id);
    udp_remotes_.emplace(id, remote);
    return id;
  }

  void accept_all()
  {
    for (;;) {
      int fd = ::accept(listener_.get(), nullptr, nullptr);
      if (fd < 0) {
        return;
      }
      net::set_nonblocking(fd);
      add_tcp_face(net::Fd(fd));
    }
  }

  void drain_udp()
  {
    std::uint8_t buf[65536];
    for (;;) {
      sockaddr_in sa{};
      socklen_t len = sizeof sa;
      ssize_t n = ::recvfrom(udp_.get(), buf, sizeof buf, 0, reinterpret_cast<sockaddr*>(&sa), &len);
      if (n < 0) {
        return; // EAGAIN, or ICMP error from a vanished peer
      }
      FaceId face = udp_face_for(net::Endpoint::from_sockaddr(sa));
      handle_packet(face, ByteView(buf, static_cast<std::size_t>(n)));
    }
  }

  void read_tcp(FaceId id)
  {
    std::uint8_t buf[65536];
    for (;;) {
      auto it = tcp_.find(id);
      if (it == tcp_.end()) {
        return;
      }
      ssize_t n = ::recv(it->second.fd.get(), buf, sizeof buf, 0);
      if (n == 0 || (n < 0 && errno != EAGAIN && errno != EINTR)) {
        close_face(id);
        return;
      }
      if (n < 0) {
        return;
      }
      it->second.framer.feed(ByteView(buf, static_cast<std::size_t>(n)));
      try {
        while (auto pkt = tcp_.at(id).framer.next()) {
          handle_packet(id, *pkt);
          if (tcp_.count(id) == 0) {
            return;
          }
        }
      }
      catch (const tlv::DecodeError&) {
        ++malformed_;
        close_face(id);
        return;
      }
    }
  }

  void close_face(FaceId id)
  {
    tcp_.erase(id);
    forwarder_.remove_face(id);
  }

  void handle_packet(FaceId face, ByteView pkt)
  {
    ++face_stats_[face].packets_in;
    auto now = Clock::now();
    try {
      switch (pkt.empty() ? 0 : pkt[0]) {
        case tlv::Interest: {
          auto interest = decode_interest(pkt).value;
          if (registration_prefix().is_prefix_of(interest.name) &&
              interest.name.size() > registration_prefix().size()) {
            register_from(face, interest);
            return;
          }
          auto r = forwarder_.on_interest(face, interest, now);
          for (FaceId up : r.upstream) {
            send(up, pkt);
          }
          if (r.cached) {
            send(face, encode_data(*r.cached));
          }
          break;
        }
        case tlv::Data: {
          auto data = decode_data(pkt).value;
          auto r = forwarder_.on_data(face, data, now);
          for (FaceId down : r.downstream) {
            send(down, pkt);
          }
          break;
        }
        case tlv::AppAck: {
          if (auto up = forwarder_.on_app_ack(face)) {
            send(*up, pkt);
          }
          break;
        }
        default:
          ++malformed_;
      }
    }
    catch (const tlv::DecodeError&) {
      ++malformed_;
    }
  }

  void register_from(FaceId face, const Interest& request)
  {
    Name prefix(std::vector<Name::Component>(request.name.components().begin() +
                                               static_cast<std::ptrdiff_t>(registration_prefix().size()),
                                             request.name.components().end()));
    forwarder_.register_prefix(prefix, face);
    send(face, encode_data(make_unsigned_data(request.name, {})));
  }

  void send(FaceId face, ByteView pkt)
  {
    auto& st = face_stats_[face];
    ++st.packets_out;
    if (auto it = tcp_.find(face); it != tcp_.end()) {
      auto& io = it->second;
      if (io.out.size() + pkt.size() > kMaxBacklog) {
        ++dropped_backlog_;
        return;
      }
      io.out.insert(io.out.end(), pkt.begin(), pkt.end());
      st.sent.add(pkt.size(), Transport::Tcp, 0);
      flush(face);
      return;
    }
    if (auto it = udp_remotes_.find(face); it != udp_remotes_.end()) {
      auto sa = it->second.to_sockaddr();
      ssize_t n = ::sendto(udp_.get(), pkt.data(), pkt.size(), 0, reinterpret_cast<sockaddr*>(&sa), sizeof sa);
      if (n > 0) {
        st.sent.add(pkt.size(), Transport::Udp, static_cast<std::size_t>(n));
      }
    }
  }

  void flush(FaceId face)
  {
    auto& io = tcp_.at(face);
    auto& st = face_stats_[face];
    while (!io.out.empty()) {
      ssize_t n = ::send(io.fd.get(), io.out.data(), io.out.size(), MSG_NOSIGNAL);
      if (n <= 0) {
        return;
      }
      io.out.erase(io.out.begin(), io.out.begin() + n);
      st.sent.socket_bytes += static_cast<std::uint64_t>(n);
    }
  }

  DaemonOptions options_;
  Forwarder forwarder_;
  net::Fd listener_;
  net::Fd udp_;
  std::map<FaceId, TcpIo> tcp_;
  std::map<net::Endpoint, FaceId> udp_faces_;
  std::map<FaceId, net::Endpoint> udp_remotes_;
  std::map<FaceId, FaceStats> face_stats_;
  std::map<FaceId, std::pair<std::string, std::string>> face_uris_;
  std::uint64_t dropped_backlog_ = 0;
  std::uint64_t malformed_ = 0;
};

} // namespace tnet::fwd

#endif // TRAILERNET_FORWARDER_DAEMON_HPP
