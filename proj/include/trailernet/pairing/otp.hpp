#ifndef TRAILERNET_PAIRING_OTP_HPP
#define TRAILERNET_PAIRING_OTP_HPP

#include "../crypto.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <string>

namespace tnet::pairing {

using WallClock = std::function<std::chrono::steady_clock::time_point()>;

enum class OtpResult
{
  Ok,
  Wrong,
  Expired,
  NotIssued, ///< never issued, or already consumed
};

inline const char* to_string(OtpResult r)
{
  switch (r) {
    case OtpResult::Ok: return "ok";
    case OtpResult::Wrong: return "wrong";
    case OtpResult::Expired: return "expired";
    case OtpResult::NotIssued: return "not-issued";
  }
  return "?";
}

/** Six-digit single-use passcodes, one outstanding per entity. Any
 *  verification attempt consumes the code. Valid while age <= validity. */
class OtpIssuer
{
public:
  explicit OtpIssuer(std::chrono::seconds validity = std::chrono::seconds(60),
                     WallClock clock = [] { return std::chrono::steady_clock::now(); })
    : validity_(validity)
    , clock_(std::move(clock))
  {}

  std::string issue(const std::string& entity)
  {
    // rejection sampling keeps the 6 digits uniform
    std::uint32_t v = 0;
    do {
      v = crypto::random_u32();
    } while (v >= 4'294'000'000u);
    char buf[8];
    std::snprintf(buf, sizeof buf, "%06u", v % 1'000'000u);
    outstanding_[entity] = {buf, clock_()};
    return buf;
  }

  OtpResult verify(const std::string& entity, const std::string& code)
  {
    auto it = outstanding_.find(entity);
    if (it == outstanding_.end()) {
      return OtpResult::NotIssued;
    }
    auto [expected, issued] = it->second;
    outstanding_.erase(it);
    if (clock_() - issued > validity_) {
      return OtpResult::Expired;
    }
    std::span<const std::uint8_t> a(reinterpret_cast<const std::uint8_t*>(expected.data()), expected.size());
    std::span<const std::uint8_t> b(reinterpret_cast<const std::uint8_t*>(code.data()), code.size());
    return crypto::equal_constant_time(a, b) ? OtpResult::Ok : OtpResult::Wrong;
  }

private:
  std::chrono::seconds validity_;
  WallClock clock_;
  std::map<std::string, std::pair<std::string, std::chrono::steady_clock::time_point>> outstanding_;
};

} // namespace tnet::pairing

#endif // TRAILERNET_PAIRING_OTP_HPP
