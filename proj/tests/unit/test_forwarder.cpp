#include "forwarder_oracle.hpp"
#include "random_packets.hpp"

#include <gtest/gtest.h>

using namespace tnet;
using namespace tnet::fwd;
using namespace std::chrono_literals;

namespace {

Interest interest_for(std::string_view uri, std::uint32_t nonce, std::chrono::milliseconds life = 4000ms)
{
  Interest i;
  i.name = Name::parse(uri);
  i.nonce = nonce;
  i.lifetime = life;
  i.must_be_fresh = true;
  return i;
}

class ForwarderTest : public ::testing::Test
{
protected:
  void SetUp() override
  {
    consumer1 = f.add_face("tcp4://127.0.0.1:6363", "tcp4://127.0.0.1:50001", FaceTransport::Tcp);
    consumer2 = f.add_face("tcp4://127.0.0.1:6363", "tcp4://127.0.0.1:50002", FaceTransport::Tcp);
    producer = f.add_face("internal://", "internal://producer", FaceTransport::Internal);
    other = f.add_face("udp4://127.0.0.1:6363", "udp4://127.0.0.1:6364", FaceTransport::Udp);
  }

  Forwarder f;
  FaceId consumer1{}, consumer2{}, producer{}, other{};
  TimePoint t0{};
};

} // namespace

TEST_F(ForwarderTest, FaceIdsAreUnique)
{
  std::set<FaceId> ids;
  for (const auto& [id, face] : f.faces()) {
    EXPECT_EQ(id, face.id);
    ids.insert(id);
  }
  EXPECT_EQ(ids.size(), 4u);
  f.remove_face(other);
  EXPECT_GT(f.add_face("", "", FaceTransport::Internal), other);
}

TEST_F(ForwarderTest, RegisterUnknownFaceFails)
{
  EXPECT_THROW(f.register_prefix(Name::parse("/trailer"), 99), UnknownFace);
  EXPECT_THROW(f.on_interest(99, interest_for("/trailer/can", 1), t0), UnknownFace);
}

TEST_F(ForwarderTest, PrefixContainment)
{
  f.register_prefix(Name::parse("/trailer"), producer);
  const auto* e = f.fib().longest_prefix_match(Name::parse("/trailer/can"));
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->next_hops, std::vector<FaceId>{producer});
}

TEST_F(ForwarderTest, LongestPrefixWins)
{
  f.register_prefix(Name::parse("/trailer"), producer);
  f.register_prefix(Name::parse("/trailer/can"), other);
  EXPECT_EQ(f.fib().longest_prefix_match(Name::parse("/trailer/can"))->next_hops, std::vector<FaceId>{other});
  EXPECT_EQ(f.fib().longest_prefix_match(Name::parse("/trailer/can/7"))->next_hops, std::vector<FaceId>{other});
  EXPECT_EQ(f.fib().longest_prefix_match(Name::parse("/trailer/cam"))->next_hops, std::vector<FaceId>{producer});
}

TEST_F(ForwarderTest, NoRoute)
{
  f.register_prefix(Name::parse("/trailer"), producer);
  EXPECT_EQ(f.fib().longest_prefix_match(Name::parse("/other/x")), nullptr);
  auto r = f.on_interest(consumer1, interest_for("/other/x", 1), t0);
  EXPECT_EQ(r.decision, InterestDecision::NoRoute);
  EXPECT_EQ(f.counters().no_route, 1u);
  EXPECT_EQ(f.pit().size(), 0u);
}

TEST_F(ForwarderTest, ArrivalFaceIsExcludedFromNextHops)
{
  f.register_prefix(Name::parse("/trailer"), producer);
  auto r = f.on_interest(producer, interest_for("/trailer/can", 1), t0);
  EXPECT_EQ(r.decision, InterestDecision::NoRoute);
}

TEST_F(ForwarderTest, InterestForwardedToProducer)
{
  f.register_prefix(Name::parse("/trailer/can"), producer);
  auto r = f.on_interest(consumer1, interest_for("/trailer/can", 1), t0);
  EXPECT_EQ(r.decision, InterestDecision::Forwarded);
  EXPECT_EQ(r.upstream, std::vector<FaceId>{producer});
  EXPECT_EQ(f.pit().size(), 1u);
}

TEST_F(ForwarderTest, AggregationTrace)
{
  // 4-event trace: two consumers ask for the same name, data comes back once,
  // then a late copy of the data arrives.
  f.register_prefix(Name::parse("/trailer/can"), producer);
  auto a = f.on_interest(consumer1, interest_for("/trailer/can", 1), t0);
  auto b = f.on_interest(consumer2, interest_for("/trailer/can", 2), t0 + 1ms);
  EXPECT_EQ(a.decision, InterestDecision::Forwarded);
  EXPECT_EQ(b.decision, InterestDecision::Aggregated);
  EXPECT_TRUE(b.upstream.empty());
  ASSERT_EQ(f.pit().size(), 1u);
  EXPECT_EQ(f.pit().begin()->second.downstream.size(), 2u);

  auto d = make_unsigned_data(Name::parse("/trailer/can"), Bytes(160));
  auto r = f.on_data(producer, d, t0 + 2ms);
  EXPECT_EQ(r.decision, DataDecision::Delivered);
  EXPECT_EQ(r.downstream, (std::vector<FaceId>{consumer1, consumer2}));
  EXPECT_EQ(f.pit().size(), 0u);

  auto late = f.on_data(producer, d, t0 + 3ms);
  EXPECT_EQ(late.decision, DataDecision::Unsolicited);
  EXPECT_TRUE(late.downstream.empty());
  EXPECT_EQ(f.counters().unsolicited, 1u);
}

TEST_F(ForwarderTest, SingleInterestSingleDelivery)
{
  f.register_prefix(Name::parse("/trailer/can"), producer);
  f.on_interest(consumer1, interest_for("/trailer/can", 1), t0);
  auto r = f.on_data(producer, make_unsigned_data(Name::parse("/trailer/can"), {}), t0 + 1ms);
  EXPECT_EQ(r.downstream, std::vector<FaceId>{consumer1});
  EXPECT_EQ(f.pit().size(), 0u);
}

TEST_F(ForwarderTest, DataAfterExpiryIsUnsolicited)
{
  f.register_prefix(Name::parse("/trailer/can"), producer);
  f.on_interest(consumer1, interest_for("/trailer/can", 1, 4000ms), t0);
  auto r = f.on_data(producer, make_unsigned_data(Name::parse("/trailer/can"), {}), t0 + 4001ms);
  EXPECT_EQ(r.decision, DataDecision::Unsolicited);
  EXPECT_EQ(f.counters().unsolicited, 1u);
}

TEST_F(ForwarderTest, ExpirePit)
{
  f.register_prefix(Name::parse("/trailer"), producer);
  f.on_interest(consumer1, interest_for("/trailer/can", 1, 4000ms), t0);
  EXPECT_EQ(f.expire_pit(t0 + 3999ms), 0u);
  EXPECT_EQ(f.pit().size(), 1u);
  EXPECT_EQ(f.expire_pit(t0 + 4001ms), 1u);
  EXPECT_EQ(f.expire_pit(t0 + 4001ms), 0u);
  EXPECT_EQ(f.pit().size(), 0u);
}

TEST_F(ForwarderTest, DuplicateNonceDropped)
{
  f.register_prefix(Name::parse("/trailer"), producer);
  f.on_interest(consumer1, interest_for("/trailer/can", 7), t0);
  auto r = f.on_interest(consumer2, interest_for("/trailer/can", 7), t0 + 1ms);
  EXPECT_EQ(r.decision, InterestDecision::DuplicateNonce);
  EXPECT_EQ(f.counters().duplicate_nonce, 1u);
  auto d = f.on_data(producer, make_unsigned_data(Name::parse("/trailer/can"), {}), t0 + 2ms);
  EXPECT_EQ(d.downstream, std::vector<FaceId>{consumer1});
}

TEST_F(ForwarderTest, RetransmissionFromSameFaceIsForwardedAgain)
{
  f.register_prefix(Name::parse("/trailer"), producer);
  f.on_interest(consumer1, interest_for("/trailer/can", 1), t0);
  auto r = f.on_interest(consumer1, interest_for("/trailer/can", 2), t0 + 1000ms);
  EXPECT_EQ(r.decision, InterestDecision::Forwarded);
  EXPECT_EQ(f.pit().size(), 1u);
}

TEST_F(ForwarderTest, MulticastToAllNextHops)
{
  f.register_prefix(Name::parse("/trailer"), producer);
  f.register_prefix(Name::parse("/trailer"), other);
  auto r = f.on_interest(consumer1, interest_for("/trailer/can", 1), t0);
  EXPECT_EQ(r.upstream, (std::vector<FaceId>{producer, other}));
}

TEST_F(ForwarderTest, RemoveFaceCleansTables)
{
  f.register_prefix(Name::parse("/trailer"), producer);
  f.on_interest(consumer1, interest_for("/trailer/can", 1), t0);
  f.remove_face(consumer1);
  EXPECT_EQ(f.pit().size(), 0u);
  f.remove_face(producer);
  EXPECT_EQ(f.fib().size(), 0u);
}

TEST_F(ForwarderTest, AppAckFollowsLastDataUpstream)
{
  EXPECT_FALSE(f.on_app_ack(consumer1).has_value());
  f.register_prefix(Name::parse("/trailer"), producer);
  f.on_interest(consumer1, interest_for("/trailer/can", 1), t0);
  f.on_data(producer, make_unsigned_data(Name::parse("/trailer/can"), {}), t0 + 1ms);
  EXPECT_EQ(f.on_app_ack(consumer1), producer);
  EXPECT_EQ(f.counters().app_acks, 2u);
}

TEST(ContentStoreTest, DisabledByDefault)
{
  Forwarder f;
  auto c = f.add_face("", "c", FaceTransport::Internal);
  auto p = f.add_face("", "p", FaceTransport::Internal);
  f.register_prefix(Name::parse("/trailer"), p);
  f.on_interest(c, interest_for("/trailer/can", 1), TimePoint{});
  f.on_data(p, make_unsigned_data(Name::parse("/trailer/can"), {}), TimePoint{} + 1ms);
  auto r = f.on_interest(c, interest_for("/trailer/can", 2), TimePoint{} + 2ms);
  EXPECT_EQ(r.decision, InterestDecision::Forwarded);
}

TEST(ContentStoreTest, FreshHitAndLru)
{
  Forwarder f(ForwarderOptions{1, 100ms});
  auto c = f.add_face("", "c", FaceTransport::Internal);
  auto p = f.add_face("", "p", FaceTransport::Internal);
  f.register_prefix(Name::parse("/trailer"), p);
  TimePoint t{};
  f.on_interest(c, interest_for("/trailer/can", 1), t);
  f.on_data(p, make_unsigned_data(Name::parse("/trailer/can"), Bytes{5}), t);
  auto hit = f.on_interest(c, interest_for("/trailer/can", 2), t + 50ms);
  EXPECT_EQ(hit.decision, InterestDecision::SatisfiedFromCache);
  ASSERT_TRUE(hit.cached.has_value());
  EXPECT_EQ(hit.cached->content, Bytes{5});
  // stale for MustBeFresh
  auto stale = f.on_interest(c, interest_for("/trailer/can", 3), t + 150ms);
  EXPECT_EQ(stale.decision, InterestDecision::Forwarded);
  // capacity 1: a second name evicts the first
  f.on_data(p, make_unsigned_data(Name::parse("/trailer/can"), Bytes{6}), t + 151ms);
  f.on_interest(c, interest_for("/trailer/cam", 4), t + 152ms);
  f.on_data(p, make_unsigned_data(Name::parse("/trailer/cam"), Bytes{7}), t + 153ms);
  auto evicted = f.on_interest(c, interest_for("/trailer/can", 5), t + 154ms);
  EXPECT_EQ(evicted.decision, InterestDecision::Forwarded);
}

TEST(ForwarderProperty, MatchesBruteForceOracle)
{
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    std::string why;
    EXPECT_EQ(oracle::replay_random_trace(seed, 200, &why), 0u) << "seed " << seed << " " << why;
  }
}

TEST(ForwarderProperty, LongestPrefixMatchesLinearScan)
{
  std::mt19937_64 rng(42);
  for (int fib_no = 0; fib_no < 100; ++fib_no) {
    Fib fib;
    oracle::LinearFib linear;
    std::uniform_int_distribution<int> entries(1, 100);
    int n = entries(rng);
    for (int k = 0; k < n; ++k) {
      auto prefix = gen::random_small_name(rng, 6);
      FaceId face = static_cast<FaceId>(rng() % 10 + 1);
      fib.insert(prefix, face);
      linear.add(prefix, face);
    }
    for (int q = 0; q < 200; ++q) {
      auto name = gen::random_small_name(rng, 6);
      const auto* got = fib.longest_prefix_match(name);
      const auto* want = linear.lookup(name);
      ASSERT_EQ(got == nullptr, want == nullptr) << name;
      if (got != nullptr) {
        EXPECT_EQ(got->next_hops, *want) << name;
      }
    }
  }
}
