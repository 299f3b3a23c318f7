#ifndef TRAILERNET_FORWARDER_FIB_HPP
#define TRAILERNET_FORWARDER_FIB_HPP

#include "face.hpp"
#include "../codec/name.hpp"

#include <algorithm>
#include <vector>

namespace tnet::fwd {

struct FibEntry
{
  Name prefix;
  std::vector<FaceId> next_hops; ///< ordered, unique, never empty
};

/** Name-prefix to next-hop table. Lookup walks the name from its full length
 *  down to one component, so cost is O(components) map probes. */
class Fib
{
public:
  void insert(const Name& prefix, FaceId face)
  {
    auto& e = entries_[prefix];
    e.prefix = prefix;
    if (std::find(e.next_hops.begin(), e.next_hops.end(), face) == e.next_hops.end()) {
      e.next_hops.push_back(face);
    }
  }

  /// Drops `face` from `prefix`; the entry goes away with its last next hop.
  void erase(const Name& prefix, FaceId face)
  {
    auto it = entries_.find(prefix);
    if (it == entries_.end()) {
      return;
    }
    auto& hops = it->second.next_hops;
    hops.erase(std::remove(hops.begin(), hops.end(), face), hops.end());
    if (hops.empty()) {
      entries_.erase(it);
    }
  }

  /// Removes `face` from every entry (face closed).
  void erase_face(FaceId face)
  {
    for (auto it = entries_.begin(); it != entries_.end();) {
      auto& hops = it->second.next_hops;
      hops.erase(std::remove(hops.begin(), hops.end(), face), hops.end());
      it = hops.empty() ? entries_.erase(it) : std::next(it);
    }
  }

  const FibEntry* longest_prefix_match(const Name& name) const
  {
    for (std::size_t n = name.size(); n > 0; --n) {
      auto it = entries_.find(n == name.size() ? name : name.prefix(n));
      if (it != entries_.end()) {
        return &it->second;
      }
    }
    return nullptr;
  }

  std::size_t size() const { return entries_.size(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

private:
  std::map<Name, FibEntry> entries_;
};

} // namespace tnet::fwd

#endif // TRAILERNET_FORWARDER_FIB_HPP
