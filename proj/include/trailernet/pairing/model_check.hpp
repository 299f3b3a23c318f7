#ifndef TRAILERNET_PAIRING_MODEL_CHECK_HPP
#define TRAILERNET_PAIRING_MODEL_CHECK_HPP

#include "fsm.hpp"

#include <vector>
#include <stdexcept>

namespace tnet::pairing {

struct ModelCheckResult
{
  std::uint64_t sequences = 0;         ///< every sequence of length 0..max_len
  std::uint64_t paired = 0;            ///< sequences ending in Paired
  std::uint64_t paired_without_path = 0;
  std::uint64_t client_before_acl = 0; ///< prefixes where the client held a token the ACL lacked
  std::uint64_t token_before_issue = 0;
  std::vector<Event> counterexample;   ///< first violating sequence, if any

  bool safe() const { return paired_without_path == 0 && client_before_acl == 0 && token_before_issue == 0; }
};

namespace detail {

/// Everything the properties depend on after a prefix of events.
struct Node
{
  SessionState s;
  std::uint8_t progress = 0; ///< longest prefix of the happy path matched greedily as a subsequence
  bool issued = false;
  bool acl = false;
  bool client = false;
};

using StepFn = SessionState (*)(SessionState, Event);

inline Node step(const Node& n, Event e, StepFn fsm = advance)
{
  Node next = n;
  next.s = fsm(n.s, e);
  auto fx = effects_of(n.s, next.s);
  next.issued |= fx.issue_token;
  next.acl |= fx.acl_add;
  next.client |= fx.provision_client;
  if (n.progress < kHappyPath.size() && kHappyPath[n.progress] == e) {
    ++next.progress;
  }
  return next;
}

// 4 bits state, 2 bits reason, 3 bits progress, 3 flag bits
inline std::uint16_t encode(const Node& n)
{
  return static_cast<std::uint16_t>(static_cast<unsigned>(n.s.state) | static_cast<unsigned>(n.s.reason) << 4 |
                                    unsigned{n.progress} << 6 | unsigned{n.issued} << 9 | unsigned{n.acl} << 10 |
                                    unsigned{n.client} << 11);
}

inline Node decode(std::uint16_t c)
{
  Node n;
  n.s.state = static_cast<State>(c & 0xF);
  n.s.reason = static_cast<FailReason>((c >> 4) & 0x3);
  n.progress = static_cast<std::uint8_t>((c >> 6) & 0x7);
  n.issued = (c >> 9) & 1;
  n.acl = (c >> 10) & 1;
  n.client = (c >> 11) & 1;
  return n;
}

inline constexpr std::size_t kCodes = 1 << 12;

enum : std::uint8_t
{
  kPaired = 1,
  kPairedWithoutPath = 2,
  kClientBeforeAcl = 4,
  kTokenBeforeIssue = 8,
};

struct Tables
{
  std::vector<std::array<std::uint16_t, kEventCount>> next = std::vector<std::array<std::uint16_t, kEventCount>>(kCodes);
  std::vector<std::uint8_t> flags = std::vector<std::uint8_t>(kCodes, 0);
};

/// Transition and property tables for every node code reachable from Idle.
inline Tables build_tables(StepFn fsm)
{
  Tables t;
  std::vector<bool> seen(kCodes, false);
  std::vector<std::uint16_t> work = {encode(Node{})};
  seen[work[0]] = true;
  while (!work.empty()) {
    auto c = work.back();
    work.pop_back();
    Node n = decode(c);
    std::uint8_t f = 0;
    if (n.s.state == State::Paired) {
      f |= kPaired;
      if (n.progress != kHappyPath.size()) f |= kPairedWithoutPath;
    }
    if (n.client && !n.acl) f |= kClientBeforeAcl;
    if ((n.acl || n.client) && !n.issued) f |= kTokenBeforeIssue;
    t.flags[c] = f;
    for (std::size_t e = 0; e < kEventCount; ++e) {
      auto nc = encode(step(n, kAllEvents[e], fsm));
      t.next[c][e] = nc;
      if (!seen[nc]) {
        seen[nc] = true;
        work.push_back(nc);
      }
    }
  }
  return t;
}

} // namespace detail

/** Enumerates every event sequence of length <= max_len (9^0 + ... + 9^max_len
 *  of them), checking at every prefix: Paired only with the ordered 7-event
 *  happy path as a subsequence, and a token never at the client before the
 *  server ACL holds it. Each step is a lookup in a table built from advance()
 *  and effects_of(); no sequence is skipped. Greedy matching is exact for
 *  subsequence containment, so progress == 7 iff the path is contained.
 *  `fsm` is replaceable so tests can confirm that faulty machines are caught. */
inline ModelCheckResult model_check(int max_len, detail::StepFn fsm = advance)
{
  if (max_len < 0 || max_len > 15) {
    throw std::invalid_argument("max_len must be within 0..15");
  }
  const auto tables = detail::build_tables(fsm);
  const auto* next = tables.next.data();
  const auto* flags = tables.flags.data();
  ModelCheckResult r;
  std::array<std::uint64_t, 16> flag_hits{};

  std::array<std::uint16_t, 17> code{};
  std::array<std::uint8_t, 17> event{};
  code[0] = detail::encode(detail::Node{});
  auto tally = [&](std::uint16_t c, int depth) {
    std::uint8_t f = flags[c];
    ++flag_hits[f];
    if ((f & ~detail::kPaired) && r.counterexample.empty()) {
      for (int i = 0; i < depth; ++i) r.counterexample.push_back(kAllEvents[event[static_cast<std::size_t>(i)]]);
    }
  };
  tally(code[0], 0);
  // iterative DFS; the last level is unrolled since leaves dominate
  int depth = 0;
  event[0] = 0;
  if (max_len == 0) {
    depth = -1;
  }
  while (depth >= 0) {
    auto d = static_cast<std::size_t>(depth);
    if (event[d] == kEventCount) {
      --depth;
      if (depth >= 0) ++event[static_cast<std::size_t>(depth)];
      continue;
    }
    std::uint16_t c = next[code[d]][event[d]];
    if (depth + 1 == max_len) {
      const auto& row = next[code[d]];
      for (std::size_t e = 0; e < kEventCount; ++e) {
        event[d] = static_cast<std::uint8_t>(e);
        tally(row[e], depth + 1);
      }
      event[d] = kEventCount;
      continue;
    }
    tally(c, depth + 1);
    code[d + 1] = c;
    event[d + 1] = 0;
    ++depth;
  }
  for (std::size_t f = 0; f < flag_hits.size(); ++f) {
    r.sequences += flag_hits[f];
    if (f & detail::kPaired) r.paired += flag_hits[f];
    if (f & detail::kPairedWithoutPath) r.paired_without_path += flag_hits[f];
    if (f & detail::kClientBeforeAcl) r.client_before_acl += flag_hits[f];
    if (f & detail::kTokenBeforeIssue) r.token_before_issue += flag_hits[f];
  }
  return r;
}

/// Number of sequences of length <= n over k symbols.
constexpr std::uint64_t sequence_count(std::uint64_t k, int n)
{
  std::uint64_t total = 0;
  std::uint64_t p = 1;
  for (int i = 0; i <= n; ++i) {
    total += p;
    p *= k;
  }
  return total;
}

} // namespace tnet::pairing

#endif // TRAILERNET_PAIRING_MODEL_CHECK_HPP
