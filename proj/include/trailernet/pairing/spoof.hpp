#ifndef TRAILERNET_PAIRING_SPOOF_HPP
#define TRAILERNET_PAIRING_SPOOF_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tnet::pairing {

struct GpsFix
{
  double x = 0;
  double y = 0;
  long t = 0; ///< sample index; tractor and trailer fixes are compared at equal t
};

struct SpoofParams
{
  SpoofParams() = default;
  SpoofParams(double d_, double e_t_, double e_r_, std::optional<std::pair<double, double>> axis = std::nullopt)
    : d(d_)
    , e_t(e_t_)
    , e_r(e_r_)
    , axis_offset(axis)
  {}

  double d = 0;   ///< fixed tractor-trailer antenna separation
  double e_t = 0; ///< tractor receiver max error
  double e_r = 0; ///< trailer receiver max error
  /// Per-axis separation. When unset, `d` is added to both axes as in the
  /// standard criterion.
  std::optional<std::pair<double, double>> axis_offset;

  void validate() const
  {
    if (!(d >= 0) || !(e_t >= 0) || !(e_r >= 0)) {
      throw std::invalid_argument("d, e_T and e_R must be non-negative numbers");
    }
  }
};

enum class Verdict
{
  Consistent,
  SpoofOrMalfunction,
};

inline const char* to_string(Verdict v)
{
  return v == Verdict::Consistent ? "consistent" : "spoof-or-malfunction";
}

class SeriesMismatch : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// One index: both axis residuals within e_T + e_R (boundary inclusive).
inline Verdict check_fix(const GpsFix& tractor, const GpsFix& trailer, const SpoofParams& p)
{
  double dx = p.axis_offset ? p.axis_offset->first : p.d;
  double dy = p.axis_offset ? p.axis_offset->second : p.d;
  double budget = p.e_t + p.e_r;
  bool ok = std::abs(tractor.x - (trailer.x + dx)) <= budget && std::abs(tractor.y - (trailer.y + dy)) <= budget;
  return ok ? Verdict::Consistent : Verdict::SpoofOrMalfunction;
}

inline std::vector<Verdict> spoof_check(const std::vector<GpsFix>& tractor, const std::vector<GpsFix>& trailer,
                                        const SpoofParams& p)
{
  p.validate();
  if (tractor.size() != trailer.size()) {
    throw SeriesMismatch("series lengths differ: tractor " + std::to_string(tractor.size()) + ", trailer " +
                         std::to_string(trailer.size()));
  }
  std::vector<Verdict> out;
  out.reserve(tractor.size());
  for (std::size_t i = 0; i < tractor.size(); ++i) {
    if (tractor[i].t != trailer[i].t) {
      throw SeriesMismatch("series not time-aligned at index " + std::to_string(i));
    }
    out.push_back(check_fix(tractor[i], trailer[i], p));
  }
  return out;
}

} // namespace tnet::pairing

#endif // TRAILERNET_PAIRING_SPOOF_HPP
