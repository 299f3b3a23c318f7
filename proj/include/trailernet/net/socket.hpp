#ifndef TRAILERNET_NET_SOCKET_HPP
#define TRAILERNET_NET_SOCKET_HPP

#include "../codec/tlv.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <string>
#include <system_error>
#include <utility>

namespace tnet::net {

inline std::system_error sys_error(const std::string& what)
{
  return std::system_error(errno, std::generic_category(), what);
}

/// Owning file descriptor.
class Fd
{
public:
  Fd() = default;
  explicit Fd(int fd)
    : fd_(fd)
  {}
  ~Fd() { reset(); }
  Fd(Fd&& o) noexcept
    : fd_(std::exchange(o.fd_, -1))
  {}
  Fd& operator=(Fd&& o) noexcept
  {
    if (this != &o) {
      reset();
      fd_ = std::exchange(o.fd_, -1);
    }
    return *this;
  }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;

  int get() const noexcept { return fd_; }
  bool valid() const noexcept { return fd_ >= 0; }
  explicit operator bool() const noexcept { return valid(); }

  void reset()
  {
    if (fd_ >= 0) {
      ::close(fd_);
      fd_ = -1;
    }
  }

private:
  int fd_ = -1;
};

/// IPv4 endpoint.
struct Endpoint
{
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;

  sockaddr_in to_sockaddr() const
  {
    sockaddr_in sa{};
    sa.sin_family = AF_INET;
    sa.sin_port = htons(port);
    if (inet_pton(AF_INET, host.c_str(), &sa.sin_addr) != 1) {
      throw std::invalid_argument("not an IPv4 address: " + host);
    }
    return sa;
  }

  static Endpoint from_sockaddr(const sockaddr_in& sa)
  {
    char buf[INET_ADDRSTRLEN] = {};
    inet_ntop(AF_INET, &sa.sin_addr, buf, sizeof buf);
    return Endpoint{buf, ntohs(sa.sin_port)};
  }

  /// "host:port"
  static Endpoint parse(const std::string& s)
  {
    auto colon = s.rfind(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("expected host:port, got '" + s + "'");
    }
    int port = std::stoi(s.substr(colon + 1));
    if (port < 0 || port > 65535) {
      throw std::invalid_argument("port out of range in '" + s + "'");
    }
    return Endpoint{s.substr(0, colon), static_cast<std::uint16_t>(port)};
  }

  std::string to_string() const { return host + ":" + std::to_string(port); }

  friend bool operator==(const Endpoint&, const Endpoint&) = default;
  friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

inline void set_nonblocking(int fd, bool on = true)
{
  int flags = fcntl(fd, F_GETFL, 0);
  fcntl(fd, F_SETFL, on ? (flags | O_NONBLOCK) : (flags & ~O_NONBLOCK));
}

inline void set_buffer_sizes(int fd, int bytes)
{
  setsockopt(fd, SOL_SOCKET, SO_RCVBUF, &bytes, sizeof bytes);
  setsockopt(fd, SOL_SOCKET, SO_SNDBUF, &bytes, sizeof bytes);
}

inline Fd udp_bind(const Endpoint& local)
{
  Fd fd(::socket(AF_INET, SOCK_DGRAM, 0));
  if (!fd) {
    throw sys_error("socket(udp)");
  }
  auto sa = local.to_sockaddr();
  if (::bind(fd.get(), reinterpret_cast<sockaddr*>(&sa), sizeof sa) != 0) {
    throw sys_error("bind udp " + local.to_string());
  }
  set_buffer_sizes(fd.get(), 4 << 20);
  return fd;
}

inline Fd tcp_listen(const Endpoint& local, int backlog = 16)
{
  Fd fd(::socket(AF_INET, SOCK_STREAM, 0));
  if (!fd) {
    throw sys_error("socket(tcp)");
  }
  int one = 1;
  setsockopt(fd.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  auto sa = local.to_sockaddr();
  if (::bind(fd.get(), reinterpret_cast<sockaddr*>(&sa), sizeof sa) != 0) {
    throw sys_error("bind tcp " + local.to_string());
  }
  if (::listen(fd.get(), backlog) != 0) {
    throw sys_error("listen " + local.to_string());
  }
  return fd;
}

inline void set_nodelay(int fd)
{
  int one = 1;
  setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

inline Fd tcp_connect(const Endpoint& remote)
{
  Fd fd(::socket(AF_INET, SOCK_STREAM, 0));
  if (!fd) {
    throw sys_error("socket(tcp)");
  }
  auto sa = remote.to_sockaddr();
  if (::connect(fd.get(), reinterpret_cast<sockaddr*>(&sa), sizeof sa) != 0) {
    throw sys_error("connect " + remote.to_string());
  }
  set_nodelay(fd.get());
  return fd;
}

/// Retries until the peer accepts or `attempts` run out (peers start in any order).
inline Fd tcp_connect_retry(const Endpoint& remote, int attempts = 100, int delay_ms = 50)
{
  for (int k = 1;; ++k) {
    try {
      return tcp_connect(remote);
    }
    catch (const std::system_error&) {
      if (k >= attempts) {
        throw;
      }
      ::usleep(static_cast<useconds_t>(delay_ms) * 1000);
    }
  }
}

inline Endpoint local_endpoint(int fd)
{
  sockaddr_in sa{};
  socklen_t len = sizeof sa;
  getsockname(fd, reinterpret_cast<sockaddr*>(&sa), &len);
  return Endpoint::from_sockaddr(sa);
}

inline Endpoint peer_endpoint(int fd)
{
  sockaddr_in sa{};
  socklen_t len = sizeof sa;
  getpeername(fd, reinterpret_cast<sockaddr*>(&sa), &len);
  return Endpoint::from_sockaddr(sa);
}

/// True if something is readable within `timeout_ms` (-1 = forever).
inline bool wait_readable(int fd, int timeout_ms)
{
  pollfd p{fd, POLLIN, 0};
  int rc = ::poll(&p, 1, timeout_ms);
  return rc > 0 && (p.revents & (POLLIN | POLLHUP | POLLERR)) != 0;
}

inline void wait_writable(int fd)
{
  pollfd p{fd, POLLOUT, 0};
  ::poll(&p, 1, 100);
}

/// Blocking send of the whole buffer.
inline void send_all(int fd, ByteView data)
{
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) {
        continue;
      }
      if (errno == EAGAIN || errno == EWOULDBLOCK) {
        wait_writable(fd);
        continue;
      }
      throw sys_error("send");
    }
    off += static_cast<std::size_t>(n);
  }
}

/// Tests whether `port` can be bound for both UDP and TCP on `host`.
inline bool port_free(const std::string& host, std::uint16_t port)
{
  try {
    Fd t = tcp_listen(Endpoint{host, port});
    Fd u = udp_bind(Endpoint{host, port});
    return true;
  }
  catch (const std::system_error&) {
    return false;
  }
}

} // namespace tnet::net

#endif // TRAILERNET_NET_SOCKET_HPP
