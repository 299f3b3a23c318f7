#ifndef TRAILERNET_TRAFFIC_CAN_HPP
#define TRAILERNET_TRAFFIC_CAN_HPP

#include "../codec/tlv.hpp"

#include <vector>

namespace tnet::traffic {

inline constexpr std::uint32_t kMaxCanId = 0x1FFFFFFF; // 29-bit extended id
inline constexpr std::size_t kClassicLength = 8;
inline constexpr std::size_t kFdLength = 64;
inline constexpr std::size_t kFrameHeader = 6; // id:4 flags:1 len:1

struct CanFrame
{
  std::uint32_t id = 0;
  bool fd = false;
  Bytes data;

  friend bool operator==(const CanFrame&, const CanFrame&) = default;
};

class CanFrameError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

inline void check_frame(const CanFrame& f)
{
  if (f.id > kMaxCanId) {
    throw CanFrameError("CAN id exceeds 29 bits");
  }
  std::size_t want = f.fd ? kFdLength : kClassicLength;
  if (f.data.size() != want) {
    throw CanFrameError("CAN" + std::string(f.fd ? " FD" : "") + " frame needs " + std::to_string(want) +
                        " data bytes, got " + std::to_string(f.data.size()));
  }
}

/// Frames back to back as [id:4 BE][flags:1][len:1][data:len]; flags bit 0 = FD.
inline Bytes encapsulate_can(const std::vector<CanFrame>& frames)
{
  if (frames.empty()) {
    throw CanFrameError("no frames to encapsulate");
  }
  Bytes out;
  for (const auto& f : frames) {
    check_frame(f);
    out.push_back(static_cast<std::uint8_t>(f.id >> 24));
    out.push_back(static_cast<std::uint8_t>(f.id >> 16));
    out.push_back(static_cast<std::uint8_t>(f.id >> 8));
    out.push_back(static_cast<std::uint8_t>(f.id));
    out.push_back(f.fd ? 0x01 : 0x00);
    out.push_back(static_cast<std::uint8_t>(f.data.size()));
    out.insert(out.end(), f.data.begin(), f.data.end());
  }
  return out;
}

inline std::vector<CanFrame> decapsulate_can(ByteView buf)
{
  std::vector<CanFrame> frames;
  std::size_t pos = 0;
  while (pos < buf.size()) {
    if (buf.size() - pos < kFrameHeader) {
      throw CanFrameError("truncated CAN frame header at " + std::to_string(pos));
    }
    CanFrame f;
    f.id = (std::uint32_t{buf[pos]} << 24) | (std::uint32_t{buf[pos + 1]} << 16) |
           (std::uint32_t{buf[pos + 2]} << 8) | buf[pos + 3];
    if ((buf[pos + 4] & ~0x01) != 0) {
      throw CanFrameError("unknown CAN flags at " + std::to_string(pos));
    }
    f.fd = (buf[pos + 4] & 0x01) != 0;
    std::size_t len = buf[pos + 5];
    pos += kFrameHeader;
    if (buf.size() - pos < len) {
      throw CanFrameError("truncated CAN frame data at " + std::to_string(pos));
    }
    f.data.assign(buf.begin() + static_cast<std::ptrdiff_t>(pos), buf.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
    check_frame(f);
    frames.push_back(std::move(f));
  }
  return frames;
}

/// Sum of data bytes, excluding per-frame headers.
inline std::size_t signal_bytes(const std::vector<CanFrame>& frames)
{
  std::size_t n = 0;
  for (const auto& f : frames) {
    n += f.data.size();
  }
  return n;
}

} // namespace tnet::traffic

#endif // TRAILERNET_TRAFFIC_CAN_HPP
