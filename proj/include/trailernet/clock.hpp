#ifndef TRAILERNET_CLOCK_HPP
#define TRAILERNET_CLOCK_HPP

#include <chrono>
#include <cstdint>
#include <ctime>

namespace tnet {

using Clock = std::chrono::steady_clock;
using TimePoint = Clock::time_point;

inline std::int64_t monotonic_ns()
{
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now().time_since_epoch()).count();
}

inline std::int64_t to_ns(TimePoint t)
{
  return std::chrono::duration_cast<std::chrono::nanoseconds>(t.time_since_epoch()).count();
}

/// Sleeps until an absolute steady-clock instant (CLOCK_MONOTONIC on Linux).
inline void sleep_until(TimePoint deadline)
{
  std::int64_t ns = to_ns(deadline);
  timespec ts{};
  ts.tv_sec = static_cast<time_t>(ns / 1'000'000'000);
  ts.tv_nsec = static_cast<long>(ns % 1'000'000'000);
  while (clock_nanosleep(CLOCK_MONOTONIC, TIMER_ABSTIME, &ts, nullptr) != 0) {
    // EINTR: keep sleeping until the deadline
  }
}

} // namespace tnet

#endif // TRAILERNET_CLOCK_HPP
