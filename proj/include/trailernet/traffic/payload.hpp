#ifndef TRAILERNET_TRAFFIC_PAYLOAD_HPP
#define TRAILERNET_TRAFFIC_PAYLOAD_HPP

#include "can.hpp"
#include "profile.hpp"

#include <random>

namespace tnet::traffic {

/** Reproducible pseudo-random payloads: the n-th payload of a stream depends
 *  only on (seed, stream label, n). mt19937_64's output sequence is fixed by
 *  the C++ standard, so runs agree across platforms. */
class PayloadSource
{
public:
  PayloadSource(std::uint64_t seed, StreamLabel label, std::size_t size)
    : engine_(mix(seed, label))
    , size_(size)
  {}

  Bytes next()
  {
    Bytes out(size_);
    std::size_t i = 0;
    while (i < size_) {
      std::uint64_t v = engine_();
      for (int k = 0; k < 8 && i < size_; ++k, ++i) {
        out[i] = static_cast<std::uint8_t>(v >> (8 * k));
      }
    }
    ++produced_;
    return out;
  }

  std::uint64_t produced() const { return produced_; }

private:
  static std::uint64_t mix(std::uint64_t seed, StreamLabel label)
  {
    // splitmix64 finalizer over seed and label
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(label) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
  std::size_t size_;
  std::uint64_t produced_ = 0;
};

/// 4 classic + 2 FD frames with pseudo-random ids and data: 160 signal bytes.
inline std::vector<CanFrame> gateway_frames(std::mt19937_64& rng)
{
  std::vector<CanFrame> frames;
  for (int k = 0; k < 6; ++k) {
    CanFrame f;
    f.fd = k >= 4;
    f.id = static_cast<std::uint32_t>(rng() & kMaxCanId);
    f.data.resize(f.fd ? kFdLength : kClassicLength);
    for (auto& b : f.data) {
      b = static_cast<std::uint8_t>(rng());
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

} // namespace tnet::traffic

#endif // TRAILERNET_TRAFFIC_PAYLOAD_HPP
