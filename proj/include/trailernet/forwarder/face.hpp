#ifndef TRAILERNET_FORWARDER_FACE_HPP
#define TRAILERNET_FORWARDER_FACE_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace tnet::fwd {

using FaceId = std::uint32_t;

enum class FaceTransport
{
  Tcp,
  Udp,
  Internal,
};

inline const char* to_string(FaceTransport t)
{
  switch (t) {
    case FaceTransport::Tcp: return "tcp";
    case FaceTransport::Udp: return "udp";
    case FaceTransport::Internal: return "internal";
  }
  return "?";
}

struct Face
{
  FaceId id = 0;
  std::string local_uri;
  std::string remote_uri;
  FaceTransport transport = FaceTransport::Internal;
};

class UnknownFace : public std::invalid_argument
{
public:
  explicit UnknownFace(FaceId id)
    : std::invalid_argument("unknown face " + std::to_string(id))
  {}
};

/// Ids are never reused within one table.
class FaceTable
{
public:
  FaceId add(std::string local_uri, std::string remote_uri, FaceTransport transport)
  {
    FaceId id = next_++;
    faces_.emplace(id, Face{id, std::move(local_uri), std::move(remote_uri), transport});
    return id;
  }

  void remove(FaceId id) { faces_.erase(id); }
  bool contains(FaceId id) const { return faces_.count(id) != 0; }

  const Face& at(FaceId id) const
  {
    auto it = faces_.find(id);
    if (it == faces_.end()) {
      throw UnknownFace(id);
    }
    return it->second;
  }

  std::size_t size() const { return faces_.size(); }
  auto begin() const { return faces_.begin(); }
  auto end() const { return faces_.end(); }

private:
  std::map<FaceId, Face> faces_;
  FaceId next_ = 1;
};

} // namespace tnet::fwd

#endif // TRAILERNET_FORWARDER_FACE_HPP
