#ifndef TRAILERNET_METRICS_REFERENCE_HPP
#define TRAILERNET_METRICS_REFERENCE_HPP

// Reference hardware-testbed measurements (PC transmitter, three Raspberry Pi
// receivers, 10-minute runs). Reports print these next to local results;
// nothing asserts equality with them except the interest and ACK sizes.

#include <array>
#include <cstddef>
#include <string_view>

namespace tnet::reference {

struct LatencyRow
{
  std::string_view stream;
  std::string_view protocol;
  std::size_t count;
  double mean_ms;
  double min_ms;
  double max_ms;
};

inline constexpr std::array<LatencyRow, 9> kLatency = {{
  {"lidar", "ndn-tcp", 238767, 2.51, 2.15, 8.11},
  {"lidar", "ndn-udp", 152530, 3.93, 2.22, 7.67},
  {"lidar", "pubsub", 250949, 2.37, 0.084, 9.64},
  {"can", "ndn-tcp", 72020, 8.32, 4.14, 12.97},
  {"can", "ndn-udp", 65838, 9.11, 4.81, 13.24},
  {"can", "pubsub", 71447, 8.34, 4.29, 12.36},
  {"cam", "ndn-tcp", 29471, 20.35, 16.61, 24.45},
  {"cam", "ndn-udp", 28302, 21.19, 18.48, 24.59},
  {"cam", "pubsub", 24631, 24.21, 18.42, 41.18},
}};

/// Transmitter CPU percent of one core, per sending process.
struct CpuRow
{
  std::string_view process;
  double pubsub;
  double ndn_udp;
  double ndn_tcp;
};

inline constexpr std::array<CpuRow, 4> kTransmitterCpu = {{
  {"lidar", 53.62, 23.56, 7.66},
  {"can", 3.72, 9.72, 2.36},
  {"cam", 16.84, 4.49, 1.06},
  {"forwarder", -1.0, 7.97, 2.65}, // no forwarder in the pub/sub setup
}};

/// Total bytes on Ethernet for one packet, UDP transport.
struct BytesRow
{
  std::string_view stream;
  std::size_t payload;
  std::size_t pubsub_total;
  std::size_t ndn_total;
};

inline constexpr std::array<BytesRow, 3> kBytesOnWire = {{
  {"can", 160, 298, 244},
  {"lidar", 2496, 2608, 2542},
  {"cam", 8000, 8108, 8044},
}};

inline constexpr std::size_t kAckOnWire = 106;
inline constexpr std::size_t kInterestOnWire = 72;

} // namespace tnet::reference

#endif // TRAILERNET_METRICS_REFERENCE_HPP
