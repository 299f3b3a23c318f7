#ifndef TRAILERNET_FORWARDER_FORWARDER_HPP
#define TRAILERNET_FORWARDER_FORWARDER_HPP

#include "content_store.hpp"
#include "fib.hpp"
#include "pit.hpp"
#include "../codec/data.hpp"

#include <optional>

namespace tnet::fwd {

struct ForwarderCounters
{
  std::uint64_t interests_in = 0;
  std::uint64_t data_in = 0;
  std::uint64_t interests_out = 0;
  std::uint64_t data_out = 0;
  std::uint64_t no_route = 0;
  std::uint64_t unsolicited = 0;
  std::uint64_t duplicate_nonce = 0;
  std::uint64_t aggregated = 0;
  std::uint64_t cs_hits = 0;
  std::uint64_t app_acks = 0;
};

enum class InterestDecision
{
  Forwarded,
  Aggregated,
  SatisfiedFromCache,
  NoRoute,
  DuplicateNonce,
};

struct InterestResult
{
  InterestDecision decision = InterestDecision::NoRoute;
  std::vector<FaceId> upstream;     ///< faces to send the interest on
  std::optional<Data> cached;       ///< reply for the arrival face on a cache hit
};

enum class DataDecision
{
  Delivered,
  Unsolicited,
};

struct DataResult
{
  DataDecision decision = DataDecision::Unsolicited;
  std::vector<FaceId> downstream;
};

struct ForwarderOptions
{
  std::size_t cs_capacity = 0;
  std::chrono::milliseconds cs_freshness{1000};
};

/** Forwarding logic of one node: PIT/FIB/CS over abstract faces.
 *
 *  Single-threaded; the caller serializes every packet and timer through it.
 *  Results name the faces to transmit on; the caller owns the wire bytes.
 *
 *  Interest handling, in order:
 *   - nonce already seen on a live PIT entry: drop (loop)
 *   - content-store hit: answer the arrival face, no PIT state
 *   - live PIT entry, arrival face new to it: aggregate, do not forward
 *   - live PIT entry, arrival face already pending (retransmission) or no
 *     entry: forward to all next hops of the longest matching prefix except
 *     the arrival face; none left -> no-route drop
 */
class Forwarder
{
public:
  explicit Forwarder(ForwarderOptions options = {})
    : cs_(options.cs_capacity, options.cs_freshness)
  {}

  FaceTable& faces() { return faces_; }
  const FaceTable& faces() const { return faces_; }
  const Fib& fib() const { return fib_; }
  const Pit& pit() const { return pit_; }
  const ForwarderCounters& counters() const { return counters_; }

  FaceId add_face(std::string local_uri, std::string remote_uri, FaceTransport t)
  {
    return faces_.add(std::move(local_uri), std::move(remote_uri), t);
  }

  void remove_face(FaceId face)
  {
    fib_.erase_face(face);
    pit_.erase_face(face);
    last_data_upstream_.erase(face);
    faces_.remove(face);
  }

  void register_prefix(const Name& prefix, FaceId face)
  {
    if (!faces_.contains(face)) {
      throw UnknownFace(face);
    }
    fib_.insert(prefix, face);
  }

  void unregister_prefix(const Name& prefix, FaceId face) { fib_.erase(prefix, face); }

  InterestResult on_interest(FaceId face, const Interest& interest, TimePoint now)
  {
    require_face(face);
    ++counters_.interests_in;
    InterestResult result;

    PitEntry* entry = pit_.find(interest.name);
    if (entry != nullptr && entry->expired(now)) {
      pit_.erase(interest.name);
      entry = nullptr;
    }

    if (entry != nullptr && entry->nonces.count(interest.nonce) != 0) {
      ++counters_.duplicate_nonce;
      result.decision = InterestDecision::DuplicateNonce;
      return result;
    }

    if (cs_.enabled()) {
      if (const Data* hit = cs_.find(interest.name, interest.must_be_fresh, now)) {
        ++counters_.cs_hits;
        ++counters_.data_out;
        result.decision = InterestDecision::SatisfiedFromCache;
        result.cached = *hit;
        return result;
      }
    }

    const TimePoint expiry = now + interest.lifetime;
    if (entry != nullptr && entry->downstream.count(face) == 0) {
      entry->downstream[face] = InRecord{interest.nonce, expiry};
      entry->nonces.insert(interest.nonce);
      ++counters_.aggregated;
      result.decision = InterestDecision::Aggregated;
      return result;
    }

    const FibEntry* route = fib_.longest_prefix_match(interest.name);
    if (route != nullptr) {
      for (FaceId hop : route->next_hops) {
        if (hop != face) {
          result.upstream.push_back(hop);
        }
      }
    }
    if (result.upstream.empty()) {
      ++counters_.no_route;
      result.decision = InterestDecision::NoRoute;
      return result;
    }

    PitEntry& e = entry != nullptr ? *entry : pit_.insert(interest.name);
    e.downstream[face] = InRecord{interest.nonce, expiry};
    e.nonces.insert(interest.nonce);
    counters_.interests_out += result.upstream.size();
    result.decision = InterestDecision::Forwarded;
    return result;
  }

  DataResult on_data(FaceId face, const Data& data, TimePoint now)
  {
    require_face(face);
    ++counters_.data_in;
    DataResult result;
    PitEntry* entry = pit_.find(data.name);
    if (entry == nullptr || entry->expired(now)) {
      if (entry != nullptr) {
        pit_.erase(data.name);
      }
      ++counters_.unsolicited;
      return result;
    }
    for (const auto& [down, rec] : entry->downstream) {
      if (rec.expiry > now && down != face) {
        result.downstream.push_back(down);
        last_data_upstream_[down] = face;
      }
    }
    pit_.erase(data.name);
    cs_.insert(data, now);
    counters_.data_out += result.downstream.size();
    result.decision = DataDecision::Delivered;
    return result;
  }

  /// Application ACK from `face`: relayed toward whoever supplied the last
  /// Data delivered to that face, if anyone did.
  std::optional<FaceId> on_app_ack(FaceId face)
  {
    ++counters_.app_acks;
    auto it = last_data_upstream_.find(face);
    if (it == last_data_upstream_.end() || !faces_.contains(it->second)) {
      return std::nullopt;
    }
    return it->second;
  }

  std::size_t expire_pit(TimePoint now) { return pit_.expire(now); }

private:
  void require_face(FaceId face) const
  {
    if (!faces_.contains(face)) {
      throw UnknownFace(face);
    }
  }

  FaceTable faces_;
  Fib fib_;
  Pit pit_;
  ContentStore cs_;
  ForwarderCounters counters_;
  std::map<FaceId, FaceId> last_data_upstream_;
};

} // namespace tnet::fwd

#endif // TRAILERNET_FORWARDER_FORWARDER_HPP
