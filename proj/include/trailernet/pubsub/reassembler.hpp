#ifndef TRAILERNET_PUBSUB_REASSEMBLER_HPP
#define TRAILERNET_PUBSUB_REASSEMBLER_HPP

#include "message.hpp"
#include "../clock.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace tnet::pubsub {

struct Sample
{
  std::uint32_t topic_id = 0;
  std::uint64_t sequence = 0;
  Bytes payload;
  std::uint16_t fragments = 0;
};

enum class PushStatus
{
  Pending,
  Complete,
  Duplicate,
  Corrupt,
};

struct PushResult
{
  PushStatus status = PushStatus::Pending;
  std::optional<Sample> sample;
};

struct ReassemblyCounters
{
  std::uint64_t completed = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t corrupt = 0;
  std::uint64_t lost = 0; ///< samples dropped incomplete after timeout
};

/** Collects fragments per (topic, sequence) until all indices are present.
 *  Order-insensitive; repeated fragments with identical bytes are ignored,
 *  conflicting ones poison the sample. */
class Reassembler
{
public:
  static constexpr std::size_t kDefaultMaxSample = 16 * 1024 * 1024;

  /// Headers announcing a sample above `max_sample_bytes` are treated as corrupt
  /// rather than allocated for.
  explicit Reassembler(std::chrono::milliseconds timeout = std::chrono::milliseconds(100),
                       std::size_t max_sample_bytes = kDefaultMaxSample)
    : timeout_(timeout)
    , max_sample_bytes_(max_sample_bytes)
  {}

  PushResult push(const Message& m, TimePoint now)
  {
    const Key key{m.header.topic_id, m.header.sequence};
    if (recently_done_.count(key) != 0) {
      ++counters_.duplicates;
      return {PushStatus::Duplicate, std::nullopt};
    }
    auto [it, fresh] = partial_.try_emplace(key);
    Partial& p = it->second;
    if (fresh) {
      if (m.header.sample_length > max_sample_bytes_) {
        return corrupt(it);
      }
      p.first_seen = now;
      p.count = m.header.fragment_count;
      p.sample_length = m.header.sample_length;
      p.buffer.resize(p.sample_length);
    }
    const std::size_t off = m.header.fragment_offset;
    const std::size_t len = m.payload.size();
    if (p.count != m.header.fragment_count || p.sample_length != m.header.sample_length ||
        off + len > p.sample_length) {
      return corrupt(it);
    }
    auto at = p.buffer.begin() + static_cast<std::ptrdiff_t>(off);
    auto existing = p.spans.find(m.header.fragment_index);
    if (existing != p.spans.end()) {
      if (existing->second != Span{off, len} || !std::equal(m.payload.begin(), m.payload.end(), at)) {
        return corrupt(it);
      }
      ++counters_.duplicates;
      return {PushStatus::Duplicate, std::nullopt};
    }
    p.spans.emplace(m.header.fragment_index, Span{off, len});
    std::copy(m.payload.begin(), m.payload.end(), at);
    if (p.spans.size() < p.count) {
      return {PushStatus::Pending, std::nullopt};
    }

    // every byte written exactly once: spans sorted by offset must tile the sample
    std::vector<Span> spans;
    spans.reserve(p.spans.size());
    for (const auto& [idx, span] : p.spans) {
      spans.push_back(span);
    }
    std::sort(spans.begin(), spans.end());
    std::size_t next = 0;
    for (const auto& sp : spans) {
      if (sp.offset != next) {
        return corrupt(it);
      }
      next += sp.length;
    }
    if (next != p.sample_length) {
      return corrupt(it);
    }
    Sample s;
    s.topic_id = key.topic;
    s.sequence = key.sequence;
    s.fragments = p.count;
    s.payload = std::move(p.buffer);
    partial_.erase(it);
    remember(key);
    ++counters_.completed;
    return {PushStatus::Complete, std::move(s)};
  }

  /// Drops samples still incomplete `timeout` after their first fragment.
  std::size_t expire(TimePoint now)
  {
    std::size_t n = 0;
    for (auto it = partial_.begin(); it != partial_.end();) {
      if (now - it->second.first_seen >= timeout_) {
        it = partial_.erase(it);
        ++n;
      }
      else {
        ++it;
      }
    }
    counters_.lost += n;
    return n;
  }

  std::size_t pending() const { return partial_.size(); }
  const ReassemblyCounters& counters() const { return counters_; }

private:
  struct Key
  {
    std::uint32_t topic;
    std::uint64_t sequence;
    friend auto operator<=>(const Key&, const Key&) = default;
  };

  struct Span
  {
    std::size_t offset;
    std::size_t length;
    friend auto operator<=>(const Span&, const Span&) = default;
  };

  struct Partial
  {
    TimePoint first_seen;
    std::uint16_t count = 0;
    std::uint32_t sample_length = 0;
    Bytes buffer;
    std::map<std::uint16_t, Span> spans;
  };

  PushResult corrupt(std::map<Key, Partial>::iterator it)
  {
    remember(it->first);
    partial_.erase(it);
    ++counters_.corrupt;
    return {PushStatus::Corrupt, std::nullopt};
  }

  void remember(const Key& k)
  {
    recently_done_.insert(k);
    done_order_.push_back(k);
    if (done_order_.size() > kRemembered) {
      recently_done_.erase(done_order_.front());
      done_order_.pop_front();
    }
  }

  static constexpr std::size_t kRemembered = 4096;

  std::chrono::milliseconds timeout_;
  std::size_t max_sample_bytes_;
  std::map<Key, Partial> partial_;
  std::set<Key> recently_done_;
  std::deque<Key> done_order_;
  ReassemblyCounters counters_;
};

} // namespace tnet::pubsub

#endif // TRAILERNET_PUBSUB_REASSEMBLER_HPP
