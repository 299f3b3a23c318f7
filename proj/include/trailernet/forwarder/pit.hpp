#ifndef TRAILERNET_FORWARDER_PIT_HPP
#define TRAILERNET_FORWARDER_PIT_HPP

#include "face.hpp"
#include "../clock.hpp"
#include "../codec/name.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

namespace tnet::fwd {

struct InRecord
{
  std::uint32_t nonce = 0;
  TimePoint expiry;
};

/** Pending interest for one name. Lives from the first interest until data
 *  satisfies it or its last in-record lapses. */
struct PitEntry
{
  Name name;
  std::map<FaceId, InRecord> downstream;
  std::set<std::uint32_t> nonces;

  TimePoint expiry() const
  {
    TimePoint t{};
    for (const auto& [face, rec] : downstream) {
      t = std::max(t, rec.expiry);
    }
    return t;
  }

  bool expired(TimePoint now) const { return expiry() <= now; }
};

class Pit
{
public:
  PitEntry* find(const Name& name)
  {
    auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : &it->second;
  }

  PitEntry& insert(const Name& name)
  {
    auto& e = entries_[name];
    e.name = name;
    return e;
  }

  void erase(const Name& name) { entries_.erase(name); }

  /// Removes every entry whose expiry <= now. Idempotent at a fixed `now`.
  std::size_t expire(TimePoint now)
  {
    std::size_t n = 0;
    for (auto it = entries_.begin(); it != entries_.end();) {
      if (it->second.expired(now)) {
        it = entries_.erase(it);
        ++n;
      }
      else {
        ++it;
      }
    }
    return n;
  }

  void erase_face(FaceId face)
  {
    for (auto it = entries_.begin(); it != entries_.end();) {
      it->second.downstream.erase(face);
      it = it->second.downstream.empty() ? entries_.erase(it) : std::next(it);
    }
  }

  std::size_t size() const { return entries_.size(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

private:
  std::map<Name, PitEntry> entries_;
};

} // namespace tnet::fwd

#endif // TRAILERNET_FORWARDER_PIT_HPP
