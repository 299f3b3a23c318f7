#ifndef TRAILERNET_TRAFFIC_PROFILE_HPP
#define TRAILERNET_TRAFFIC_PROFILE_HPP

#include "../codec/name.hpp"
#include "../pubsub/message.hpp"

#include <array>
#include <chrono>

namespace tnet::traffic {

enum class StreamLabel
{
  Lidar,
  Can,
  Cam,
};

inline const char* to_string(StreamLabel l)
{
  switch (l) {
    case StreamLabel::Lidar: return "lidar";
    case StreamLabel::Can: return "can";
    case StreamLabel::Cam: return "cam";
  }
  return "?";
}

inline StreamLabel parse_label(std::string_view s)
{
  if (s == "lidar") return StreamLabel::Lidar;
  if (s == "can") return StreamLabel::Can;
  if (s == "cam") return StreamLabel::Cam;
  throw std::invalid_argument("unknown stream '" + std::string(s) + "'");
}

inline constexpr std::array<StreamLabel, 3> kAllStreams = {StreamLabel::Lidar, StreamLabel::Can, StreamLabel::Cam};

struct StreamProfile
{
  StreamLabel label = StreamLabel::Can;
  Name ndn_name;
  pubsub::Topic topic;
  std::size_t payload_bytes = 0;
  std::chrono::microseconds period{0};
  std::string consumer_id;

  double period_ms() const { return static_cast<double>(period.count()) / 1000.0; }
};

/// The three sensor/CAN streams: 2496 B every 1 ms, 160 B every 8 ms, 8000 B every 20 ms.
inline StreamProfile default_profile(StreamLabel label)
{
  using std::chrono::milliseconds;
  switch (label) {
    case StreamLabel::Lidar:
      return {label, Name::parse("/trailer/lidar"), pubsub::kLidarTopic, 2496, milliseconds(1), "rpi1"};
    case StreamLabel::Can:
      return {label, Name::parse("/trailer/can"), pubsub::kCanTopic, 160, milliseconds(8), "rpi2"};
    case StreamLabel::Cam:
      return {label, Name::parse("/trailer/cam"), pubsub::kCamTopic, 8000, milliseconds(20), "rpi3"};
  }
  throw std::invalid_argument("bad label");
}

inline std::array<StreamProfile, 3> default_profiles()
{
  return {default_profile(StreamLabel::Lidar), default_profile(StreamLabel::Can), default_profile(StreamLabel::Cam)};
}

} // namespace tnet::traffic

#endif // TRAILERNET_TRAFFIC_PROFILE_HPP
