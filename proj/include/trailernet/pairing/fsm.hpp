#ifndef TRAILERNET_PAIRING_FSM_HPP
#define TRAILERNET_PAIRING_FSM_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tnet::pairing {

enum class State : std::uint8_t
{
  Idle,
  RequestsReceived,
  EntitiesAuthenticated,
  FactorVerified,
  CredentialsIssued,
  ServerUpdated,
  ClientProvisioned,
  Paired,
  Failed,
};

enum class FailReason : std::uint8_t
{
  None,
  Auth,
  Factor,
  ProtocolViolation,
};

enum class Event : std::uint8_t
{
  RequestsReceived,
  AuthOk,
  AuthFail,
  FactorOk,
  FactorFail,
  CredentialsIssued,
  ServerUpdated,
  ClientProvisioned,
  Confirm,
};

inline constexpr std::size_t kEventCount = 9;

inline constexpr std::array<Event, kEventCount> kAllEvents = {
  Event::RequestsReceived, Event::AuthOk,        Event::AuthFail,          Event::FactorOk, Event::FactorFail,
  Event::CredentialsIssued, Event::ServerUpdated, Event::ClientProvisioned, Event::Confirm};

/// The only event order that pairs.
inline constexpr std::array<Event, 7> kHappyPath = {Event::RequestsReceived,  Event::AuthOk,
                                                    Event::FactorOk,          Event::CredentialsIssued,
                                                    Event::ServerUpdated,     Event::ClientProvisioned,
                                                    Event::Confirm};

inline const char* to_string(State s)
{
  static constexpr const char* names[] = {"Idle",           "RequestsReceived", "EntitiesAuthenticated",
                                          "FactorVerified", "CredentialsIssued", "ServerUpdated",
                                          "ClientProvisioned", "Paired",        "Failed"};
  return names[static_cast<int>(s)];
}

inline const char* to_string(FailReason r)
{
  static constexpr const char* names[] = {"none", "auth", "factor", "protocol-violation"};
  return names[static_cast<int>(r)];
}

inline const char* to_string(Event e)
{
  static constexpr const char* names[] = {"requests-received",  "auth-ok",        "auth-fail",
                                          "factor-ok",          "factor-fail",    "credentials-issued",
                                          "server-updated",     "client-provisioned", "confirm"};
  return names[static_cast<int>(e)];
}

inline Event parse_event(std::string_view s)
{
  for (auto e : kAllEvents) {
    if (s == to_string(e)) {
      return e;
    }
  }
  throw std::invalid_argument("unknown pairing event '" + std::string(s) + "'");
}

struct SessionState
{
  State state = State::Idle;
  FailReason reason = FailReason::None;

  friend constexpr bool operator==(const SessionState&, const SessionState&) = default;
  std::string describe() const
  {
    return state == State::Failed ? std::string("Failed(") + to_string(reason) + ")" : to_string(state);
  }
};

/** One deterministic step. Failed is absorbing; anything not on the nominal
 *  path (including any event after Paired) is a protocol violation. */
constexpr SessionState advance(SessionState s, Event e)
{
  using S = State;
  using E = Event;
  if (s.state == S::Failed) {
    return s;
  }
  auto to = [](S next) { return SessionState{next, FailReason::None}; };
  auto fail = [](FailReason r) { return SessionState{S::Failed, r}; };
  switch (s.state) {
    case S::Idle:
      if (e == E::RequestsReceived) return to(S::RequestsReceived);
      break;
    case S::RequestsReceived:
      if (e == E::AuthOk) return to(S::EntitiesAuthenticated);
      if (e == E::AuthFail) return fail(FailReason::Auth);
      break;
    case S::EntitiesAuthenticated:
      if (e == E::FactorOk) return to(S::FactorVerified);
      if (e == E::FactorFail) return fail(FailReason::Factor);
      break;
    case S::FactorVerified:
      if (e == E::CredentialsIssued) return to(S::CredentialsIssued);
      break;
    case S::CredentialsIssued:
      if (e == E::ServerUpdated) return to(S::ServerUpdated);
      break;
    case S::ServerUpdated:
      if (e == E::ClientProvisioned) return to(S::ClientProvisioned);
      break;
    case S::ClientProvisioned:
      if (e == E::Confirm) return to(S::Paired);
      break;
    case S::Paired:
    case S::Failed:
      break;
  }
  return fail(FailReason::ProtocolViolation);
}

/// Side effects the coordinator performs when a step is accepted.
struct Effects
{
  bool issue_token = false;     ///< FMS mints the credential
  bool acl_add = false;         ///< server ACL gains the entry
  bool provision_client = false; ///< token handed to the Wi-Fi client
};

constexpr Effects effects_of(SessionState before, SessionState after)
{
  Effects fx;
  if (before.state == after.state) {
    return fx;
  }
  fx.issue_token = after.state == State::CredentialsIssued;
  fx.acl_add = after.state == State::ServerUpdated;
  fx.provision_client = after.state == State::ClientProvisioned;
  return fx;
}

} // namespace tnet::pairing

#endif // TRAILERNET_PAIRING_FSM_HPP
