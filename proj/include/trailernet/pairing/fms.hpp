#ifndef TRAILERNET_PAIRING_FMS_HPP
#define TRAILERNET_PAIRING_FMS_HPP

#include "credentials.hpp"
#include "fsm.hpp"
#include "otp.hpp"
#include "spoof.hpp"
#include "../clock.hpp"

#include <json.hpp>

#include <ostream>

namespace tnet::pairing {

/// What an ECU presents to the FMS: a fresh nonce MACed with its provisioned secret.
struct EntityCredential
{
  std::string entity_id;
  std::vector<std::uint8_t> nonce;
  crypto::Digest mac{};
};

inline crypto::Digest entity_mac(std::span<const std::uint8_t> secret, const std::string& id,
                                 std::span<const std::uint8_t> nonce)
{
  std::vector<std::uint8_t> msg(id.begin(), id.end());
  msg.insert(msg.end(), nonce.begin(), nonce.end());
  return crypto::hmac_sha256(secret, msg);
}

inline EntityCredential make_entity_credential(const std::string& id, std::span<const std::uint8_t> secret)
{
  EntityCredential c{id, crypto::random_bytes(16), {}};
  c.mac = entity_mac(secret, id, c.nonce);
  return c;
}

enum class FactorKind
{
  Geo,
  Otp,
  Both,
};

inline FactorKind parse_factor(std::string_view s)
{
  if (s == "geo") return FactorKind::Geo;
  if (s == "otp") return FactorKind::Otp;
  if (s == "both") return FactorKind::Both;
  throw std::invalid_argument("unknown second factor '" + std::string(s) + "' (geo, otp, both)");
}

inline const char* to_string(FactorKind k)
{
  return k == FactorKind::Geo ? "geo" : k == FactorKind::Otp ? "otp" : "both";
}

struct FactorOutcome
{
  bool ok = false;
  std::string reason;
};

/// Fleet management system: authenticator, second-factor verifier, OTP issuer.
class Fms
{
public:
  explicit Fms(OtpIssuer otp = OtpIssuer())
    : otp_(std::move(otp))
  {}

  void provision(const std::string& entity, std::vector<std::uint8_t> secret) { secrets_[entity] = std::move(secret); }

  /// True iff the MAC verifies against the stored secret. Unknown ids are counted, not thrown.
  bool authenticate(const EntityCredential& c)
  {
    auto it = secrets_.find(c.entity_id);
    if (it == secrets_.end()) {
      ++unknown_entities_;
      return false;
    }
    auto expected = entity_mac(it->second, c.entity_id, c.nonce);
    return crypto::equal_constant_time(expected, c.mac);
  }

  std::uint64_t unknown_entities() const { return unknown_entities_; }
  OtpIssuer& otp() { return otp_; }

  /// Latest time-aligned fixes must pass the spoof check.
  static FactorOutcome verify_geo(const std::vector<GpsFix>& tractor, const std::vector<GpsFix>& trailer,
                                  const SpoofParams& p)
  {
    if (tractor.empty() || trailer.empty()) {
      return {false, "no gps fixes"};
    }
    if (tractor.back().t != trailer.back().t) {
      return {false, "latest fixes not time-aligned"};
    }
    auto v = check_fix(tractor.back(), trailer.back(), p);
    return v == Verdict::Consistent ? FactorOutcome{true, "gps consistent"} : FactorOutcome{false, "gps spoof-or-malfunction"};
  }

  /// Both ECUs must echo their own code within the validity window.
  FactorOutcome verify_otp(const std::string& tractor, const std::string& tractor_echo, const std::string& trailer,
                           const std::string& trailer_echo)
  {
    auto a = otp_.verify(tractor, tractor_echo);
    auto b = otp_.verify(trailer, trailer_echo);
    if (a == OtpResult::Ok && b == OtpResult::Ok) {
      return {true, "otp echoes match"};
    }
    auto bad = a != OtpResult::Ok ? a : b;
    return {false, std::string("otp ") + to_string(bad)};
  }

private:
  std::map<std::string, std::vector<std::uint8_t>> secrets_;
  std::uint64_t unknown_entities_ = 0;
  OtpIssuer otp_;
};

class CredentialRefused : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

/** One pairing attempt owned by the FMS coordinator. Every step goes through
 *  advance(); side effects (mint, ACL add, client provisioning) happen only
 *  for accepted transitions, and each step is logged as a JSON line. */
class PairingSession
{
public:
  PairingSession(std::string id, std::string tractor, std::string trailer, WifiServer& server, WifiClient& client,
                 std::ostream* trace = nullptr)
    : id_(std::move(id))
    , tractor_(std::move(tractor))
    , trailer_(std::move(trailer))
    , server_(server)
    , client_(client)
    , trace_(trace)
  {}

  const SessionState& state() const { return state_; }
  const std::string& id() const { return id_; }
  const std::optional<Credential>& credential() const { return credential_; }
  const std::vector<nlohmann::json>& log() const { return log_; }

  SessionState apply(Event e)
  {
    auto before = state_;
    state_ = advance(state_, e);
    auto fx = effects_of(before, state_);
    if (fx.issue_token) {
      credential_ = mint_credential(AccessLevel::Pairing);
    }
    if (fx.acl_add) {
      server_.add(*credential_);
    }
    if (fx.provision_client) {
      client_.provision(*credential_);
    }
    nlohmann::json line = {{"session", id_},          {"event", to_string(e)},
                           {"from", before.describe()}, {"to", state_.describe()},
                           {"t_ns", monotonic_ns()}};
    log_.push_back(line);
    if (trace_) {
      *trace_ << line.dump() << '\n';
    }
    return state_;
  }

  /// Mints the pairing credential; refused unless the second factor was verified.
  const Credential& issue_credentials()
  {
    if (state_.state != State::FactorVerified) {
      throw CredentialRefused("credentials can only be issued in FactorVerified, session is " + state_.describe());
    }
    apply(Event::CredentialsIssued);
    return *credential_;
  }

private:
  std::string id_;
  std::string tractor_;
  std::string trailer_;
  WifiServer& server_;
  WifiClient& client_;
  std::ostream* trace_;
  SessionState state_;
  std::optional<Credential> credential_;
  std::vector<nlohmann::json> log_;
};

} // namespace tnet::pairing

#endif // TRAILERNET_PAIRING_FMS_HPP
