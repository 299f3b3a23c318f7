#ifndef TRAILERNET_METRICS_STATS_HPP
#define TRAILERNET_METRICS_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tnet::metrics {

class InsufficientData : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// One received sample. inter_arrival_ms is absent on the first sample of a stream.
struct LatencySample
{
  std::string stream;
  std::uint64_t seq = 0;
  std::int64_t receipt_ns = 0;
  std::optional<double> inter_arrival_ms;

  friend bool operator==(const LatencySample&, const LatencySample&) = default;
};

inline double delta_ms(std::int64_t from_ns, std::int64_t to_ns)
{
  return static_cast<double>(to_ns - from_ns) / 1e6;
}

/// Builds a stream's samples from receipt instants, numbering from 0.
inline std::vector<LatencySample> make_samples(const std::string& stream, std::span<const std::int64_t> receipts)
{
  std::vector<LatencySample> out;
  out.reserve(receipts.size());
  for (std::size_t i = 0; i < receipts.size(); ++i) {
    LatencySample s{stream, i, receipts[i], std::nullopt};
    if (i > 0) {
      s.inter_arrival_ms = delta_ms(receipts[i - 1], receipts[i]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

struct StreamSummary
{
  std::string stream;
  std::string protocol;
  std::uint64_t packets_count = 0;
  double mean_ms = 0;
  double min_ms = 0;
  double max_ms = 0;

  bool ordered() const { return min_ms <= mean_ms && mean_ms <= max_ms; }
};

/// Mean/min/max over inter-arrival deltas; packets_count = deltas + 1.
inline StreamSummary summarize_deltas(std::span<const double> deltas)
{
  if (deltas.empty()) {
    throw InsufficientData("need at least 2 samples to summarize");
  }
  // Neumaier compensated sum
  double sum = 0.0;
  double c = 0.0;
  double lo = deltas[0];
  double hi = deltas[0];
  for (double d : deltas) {
    double t = sum + d;
    c += std::abs(sum) >= std::abs(d) ? (sum - t) + d : (d - t) + sum;
    sum = t;
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  StreamSummary s;
  s.packets_count = deltas.size() + 1;
  s.min_ms = lo;
  s.max_ms = hi;
  // rounding can push the quotient one ulp outside [lo, hi]
  s.mean_ms = std::clamp((sum + c) / static_cast<double>(deltas.size()), lo, hi);
  return s;
}

inline StreamSummary summarize(std::span<const LatencySample> samples)
{
  if (samples.size() < 2) {
    throw InsufficientData("need at least 2 samples to summarize, got " + std::to_string(samples.size()));
  }
  std::vector<double> deltas;
  deltas.reserve(samples.size() - 1);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    deltas.push_back(samples[i].inter_arrival_ms ? *samples[i].inter_arrival_ms
                                                 : delta_ms(samples[i - 1].receipt_ns, samples[i].receipt_ns));
  }
  auto s = summarize_deltas(deltas);
  s.stream = samples.front().stream;
  return s;
}

} // namespace tnet::metrics

#endif // TRAILERNET_METRICS_STATS_HPP
