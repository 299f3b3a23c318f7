#ifndef TRAILERNET_TRAFFIC_PACING_HPP
#define TRAILERNET_TRAFFIC_PACING_HPP

#include "../clock.hpp"

#include <string_view>

namespace tnet::traffic {

enum class PacingMode
{
  Anchored, ///< next deadline = previous event + period
  Grid,     ///< next deadline = start + n * period
};

inline PacingMode parse_pacing(std::string_view s)
{
  if (s == "anchored") return PacingMode::Anchored;
  if (s == "grid") return PacingMode::Grid;
  throw std::invalid_argument("unknown pacing '" + std::string(s) + "'");
}

inline const char* to_string(PacingMode m)
{
  return m == PacingMode::Anchored ? "anchored" : "grid";
}

/** Absolute-deadline sleeper. Anchored mode never lets two events come
 *  closer than one period; grid mode holds the long-run rate exactly. */
class Pacer
{
public:
  Pacer(std::chrono::microseconds period, PacingMode mode, TimePoint start = Clock::now())
    : period_(period)
    , mode_(mode)
    , start_(start)
  {}

  /// Sleeps until the next deadline; `last_event` is the instant the
  /// previous send (or receipt) happened.
  TimePoint wait(TimePoint last_event)
  {
    ++n_;
    TimePoint deadline = mode_ == PacingMode::Anchored ? last_event + period_ : start_ + n_ * period_;
    tnet::sleep_until(deadline);
    return deadline;
  }

private:
  std::chrono::microseconds period_;
  PacingMode mode_;
  TimePoint start_;
  std::int64_t n_ = 0;
};

} // namespace tnet::traffic

#endif // TRAILERNET_TRAFFIC_PACING_HPP
