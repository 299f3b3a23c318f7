#ifndef TRAILERNET_PAIRING_CREDENTIALS_HPP
#define TRAILERNET_PAIRING_CREDENTIALS_HPP

#include "../crypto.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tnet::pairing {

enum class AccessLevel
{
  Pairing,
  Diagnostics,
};

inline const char* to_string(AccessLevel l)
{
  return l == AccessLevel::Pairing ? "pairing" : "diagnostics";
}

/// Privileges granted per access level: data types plus operations.
inline std::set<std::string> privileges_for(AccessLevel l)
{
  if (l == AccessLevel::Pairing) {
    return {"data:lidar", "data:can", "data:cam", "op:pair"};
  }
  return {"data:can", "op:read-diagnostics"};
}

/// Opaque Wi-Fi credential: random 32-byte token plus its access level.
struct Credential
{
  std::string id;
  std::vector<std::uint8_t> token;
  AccessLevel level = AccessLevel::Pairing;
};

inline Credential mint_credential(AccessLevel level)
{
  Credential c;
  c.token = crypto::random_bytes(32);
  c.id = "cred-" + crypto::to_hex(crypto::sha256(c.token)).substr(0, 16);
  c.level = level;
  return c;
}

struct AclEntry
{
  std::string credential_id;
  AccessLevel level = AccessLevel::Pairing;
  std::set<std::string> privileges;
  crypto::Digest token_hash{}; ///< the server keeps a hash, not the token
};

/// Wi-Fi server side: one ACL entry per live credential.
class WifiServer
{
public:
  void add(const Credential& c)
  {
    if (acl_.count(c.id)) {
      throw std::logic_error("credential " + c.id + " already in ACL");
    }
    acl_[c.id] = AclEntry{c.id, c.level, privileges_for(c.level), crypto::sha256(c.token)};
  }

  bool revoke(const std::string& id) { return acl_.erase(id) > 0; }
  bool contains(const std::string& id) const { return acl_.count(id) > 0; }
  std::size_t size() const { return acl_.size(); }

  /// Connection attempt: the matching entry when the token is live.
  std::optional<AclEntry> admit(std::span<const std::uint8_t> token) const
  {
    auto h = crypto::sha256(token);
    for (const auto& [id, e] : acl_) {
      if (crypto::equal_constant_time(e.token_hash, h)) {
        return e;
      }
    }
    return std::nullopt;
  }

private:
  std::map<std::string, AclEntry> acl_;
};

/// Wi-Fi client side (the trailer's ECU).
class WifiClient
{
public:
  void provision(Credential c) { credential_ = std::move(c); }
  const std::optional<Credential>& credential() const { return credential_; }

  bool connect(const WifiServer& server) const
  {
    return credential_ && server.admit(credential_->token).has_value();
  }

private:
  std::optional<Credential> credential_;
};

} // namespace tnet::pairing

#endif // TRAILERNET_PAIRING_CREDENTIALS_HPP
