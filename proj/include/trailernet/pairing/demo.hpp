#ifndef TRAILERNET_PAIRING_DEMO_HPP
#define TRAILERNET_PAIRING_DEMO_HPP

#include "fms.hpp"

#include <deque>
#include <memory>
#include <random>

namespace tnet::pairing {

struct DemoOptions
{
  FactorKind factor = FactorKind::Both;
  bool fail_auth = false;   ///< trailer presents a tampered credential
  bool wrong_otp = false;   ///< trailer echoes a wrong passcode
  bool spoofed_gps = false; ///< trailer fix offset by 10x the error budget
  int otp_delay_s = 0;      ///< simulated delay before the echoes arrive
  SpoofParams gps{1.0, 2.5, 2.5, std::nullopt};
  std::uint64_t seed = 1;
  std::string session_id = "demo-1";
};

struct DemoResult
{
  SessionState final_state;
  std::string factor_reason;
  std::uint64_t acl_size = 0;
  bool client_connected = false;
};

inline int exit_code_for(const SessionState& s)
{
  if (s.state == State::Paired) return 0;
  if (s.state == State::Failed && s.reason == FailReason::Auth) return 10;
  if (s.state == State::Failed && s.reason == FailReason::Factor) return 11;
  return 12;
}

/// Message queue standing in for one communication path (primary or side channel).
class Mailbox
{
public:
  void send(std::string to, std::string body) { q_.emplace_back(std::move(to), std::move(body)); }
  std::optional<std::string> take(const std::string& to)
  {
    for (auto it = q_.begin(); it != q_.end(); ++it) {
      if (it->first == to) {
        auto body = std::move(it->second);
        q_.erase(it);
        return body;
      }
    }
    return std::nullopt;
  }

private:
  std::deque<std::pair<std::string, std::string>> q_;
};

/** Simulated tractor, trailer and FMS running one pairing session. The
 *  transition trace is written to `trace` as JSON lines. */
inline DemoResult run_pairing_demo(const DemoOptions& opt, std::ostream& trace)
{
  const std::string tractor = "tractor-ecu";
  const std::string trailer = "trailer-abs-ecu";
  auto t0 = std::chrono::steady_clock::now();
  auto offset = std::make_shared<std::chrono::seconds>(0);
  OtpIssuer issuer(std::chrono::seconds(60), [t0, offset] { return t0 + *offset; });
  Fms fms(std::move(issuer));
  auto tractor_secret = crypto::random_bytes(32);
  auto trailer_secret = crypto::random_bytes(32);
  fms.provision(tractor, tractor_secret);
  fms.provision(trailer, trailer_secret);

  WifiServer server;
  WifiClient client;
  PairingSession session(opt.session_id, tractor, trailer, server, client, &trace);
  DemoResult result;
  auto done = [&] {
    result.final_state = session.state();
    result.acl_size = server.size();
    result.client_connected = client.connect(server);
    return result;
  };

  // 1. both ECUs ask the FMS to pair
  Mailbox primary;
  Mailbox side;
  primary.send("fms", tractor);
  primary.send("fms", trailer);
  session.apply(Event::RequestsReceived);

  // 2. entity authentication
  auto c_tractor = make_entity_credential(tractor, tractor_secret);
  auto c_trailer = make_entity_credential(trailer, trailer_secret);
  if (opt.fail_auth) {
    c_trailer.mac[0] ^= 0x01;
  }
  bool authenticated = fms.authenticate(c_tractor) && fms.authenticate(c_trailer);
  if (session.apply(authenticated ? Event::AuthOk : Event::AuthFail).state == State::Failed) {
    return done();
  }

  // 3. second factor
  FactorOutcome factor{true, ""};
  if (opt.factor != FactorKind::Otp) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> pos(0, 1000);
    std::uniform_real_distribution<double> noise(-1.0, 1.0);
    double dx = opt.gps.axis_offset ? opt.gps.axis_offset->first : opt.gps.d;
    double dy = opt.gps.axis_offset ? opt.gps.axis_offset->second : opt.gps.d;
    std::vector<GpsFix> t_fixes;
    std::vector<GpsFix> r_fixes;
    for (long n = 0; n < 5; ++n) {
      double x = pos(rng);
      double y = pos(rng);
      t_fixes.push_back({x, y, n});
      r_fixes.push_back({x - dx + noise(rng), y - dy + noise(rng), n});
    }
    if (opt.spoofed_gps) {
      r_fixes.back().x += 10 * (opt.gps.e_t + opt.gps.e_r);
    }
    factor = Fms::verify_geo(t_fixes, r_fixes, opt.gps);
  }
  if (factor.ok && opt.factor != FactorKind::Geo) {
    // codes go out over the side channel, echoes come back over the primary one
    side.send(tractor, fms.otp().issue(tractor));
    side.send(trailer, fms.otp().issue(trailer));
    *offset = std::chrono::seconds(opt.otp_delay_s);
    auto tractor_code = side.take(tractor).value_or("");
    auto trailer_code = side.take(trailer).value_or("");
    if (opt.wrong_otp) {
      trailer_code[0] = trailer_code[0] == '9' ? '0' : static_cast<char>(trailer_code[0] + 1);
    }
    primary.send("fms:" + tractor, tractor_code);
    primary.send("fms:" + trailer, trailer_code);
    factor = fms.verify_otp(tractor, primary.take("fms:" + tractor).value_or(""), trailer,
                            primary.take("fms:" + trailer).value_or(""));
  }
  result.factor_reason = factor.reason;
  if (session.apply(factor.ok ? Event::FactorOk : Event::FactorFail).state == State::Failed) {
    return done();
  }

  // 4. credentials: server ACL first, then the trailer's Wi-Fi client
  session.issue_credentials();
  session.apply(Event::ServerUpdated);
  session.apply(Event::ClientProvisioned);
  if (client.connect(server)) {
    session.apply(Event::Confirm);
  }
  return done();
}

} // namespace tnet::pairing

#endif // TRAILERNET_PAIRING_DEMO_HPP
