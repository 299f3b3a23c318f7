#include <trailernet/pairing/demo.hpp>
#include <trailernet/pairing/gps_csv.hpp>
#include <trailernet/pairing/model_check.hpp>

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace tnet;
using namespace tnet::pairing;

TEST(Spoof, ZeroCase)
{
  std::vector<GpsFix> a = {{1, 2, 0}, {3, 4, 1}, {-5, 6.5, 2}};
  auto v = spoof_check(a, a, SpoofParams{0, 0, 0});
  for (auto x : v) EXPECT_EQ(x, Verdict::Consistent);
}

TEST(Spoof, WorkedOffsetAndSpoof)
{
  SpoofParams p{1.0, 0.25, 0.25};
  EXPECT_EQ(spoof_check({{10.0, 5.0, 0}}, {{9.0, 4.0, 0}}, p)[0], Verdict::Consistent);
  EXPECT_EQ(spoof_check({{10.0, 5.0, 0}}, {{20.0, 4.0, 0}}, p)[0], Verdict::SpoofOrMalfunction);
}

TEST(Spoof, BoundaryIsConsistent)
{
  SpoofParams p{1.0, 0.25, 0.25};
  EXPECT_EQ(check_fix({10.5, 5.0, 0}, {9.0, 4.0, 0}, p), Verdict::Consistent);
  EXPECT_EQ(check_fix({10.5, 5.5, 0}, {9.0, 4.0, 0}, p), Verdict::Consistent);
  EXPECT_EQ(check_fix({10.5, 5.5625, 0}, {9.0, 4.0, 0}, p), Verdict::SpoofOrMalfunction);
}

TEST(Spoof, SymmetricAndMonotoneInErrorBudget)
{
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-20, 20);
  std::uniform_real_distribution<double> e(0, 5);
  for (int k = 0; k < 2000; ++k) {
    GpsFix t{u(rng), u(rng), 0};
    GpsFix r{u(rng) / 4 + t.x, u(rng) / 4 + t.y, 0};
    double et = e(rng), er = e(rng), d = e(rng);
    auto v1 = check_fix(t, r, SpoofParams{d, et, er});
    EXPECT_EQ(v1, check_fix(t, r, SpoofParams{d, er, et}));
    if (v1 == Verdict::Consistent) {
      EXPECT_EQ(check_fix(t, r, SpoofParams{d, et + 1, er}), Verdict::Consistent);
    }
  }
}

TEST(Spoof, PerAxisOffsetVariant)
{
  SpoofParams p{1.0, 0.25, 0.25, std::make_pair(3.0, 0.0)};
  EXPECT_EQ(check_fix({13, 4, 0}, {10, 4, 0}, p), Verdict::Consistent);
  p.axis_offset.reset();
  EXPECT_EQ(check_fix({13, 4, 0}, {10, 4, 0}, p), Verdict::SpoofOrMalfunction);
}

TEST(Spoof, Errors)
{
  EXPECT_THROW(spoof_check({{0, 0, 0}}, {}, SpoofParams{}), SeriesMismatch);
  EXPECT_THROW(spoof_check({{0, 0, 0}}, {{0, 0, 1}}, SpoofParams{}), SeriesMismatch);
  EXPECT_THROW(spoof_check({}, {}, SpoofParams{-1, 0, 0}), std::invalid_argument);
}

TEST(GpsCsv, ParsesAndNamesBadLine)
{
  std::istringstream ok("t,x_T,y_T,x_R,y_R\n0,10,5,9,4\n# note\n1,11,6,10,5\n");
  auto s = read_gps_csv(ok);
  ASSERT_EQ(s.tractor.size(), 2u);
  EXPECT_EQ(s.trailer[1].x, 10.0);
  EXPECT_EQ(s.trailer[1].t, 1);

  std::istringstream bad("t,x_T,y_T,x_R,y_R\n0,10,5,9,4\n1,11,abc,10,5\n");
  try {
    read_gps_csv(bad);
    FAIL();
  }
  catch (const GpsCsvError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::istringstream short_row("0,1,2,3\n");
  EXPECT_THROW(read_gps_csv(short_row), GpsCsvError);

  std::istringstream missing("0,10,5,9,4\n1,11,6,,\n");
  auto m = read_gps_csv(missing);
  EXPECT_EQ(m.tractor.size(), 2u);
  EXPECT_EQ(m.trailer.size(), 1u);
  EXPECT_THROW(spoof_check(m.tractor, m.trailer, SpoofParams{}), SeriesMismatch);
}

TEST(Fsm, HappyPath)
{
  SessionState s;
  for (auto e : kHappyPath) {
    s = advance(s, e);
    EXPECT_NE(s.state, State::Failed) << to_string(e);
  }
  EXPECT_EQ(s.state, State::Paired);
  EXPECT_EQ(advance(s, Event::Confirm).reason, FailReason::ProtocolViolation);
}

TEST(Fsm, FailuresAndOrdering)
{
  SessionState s = advance({}, Event::RequestsReceived);
  EXPECT_EQ(advance(s, Event::AuthFail), (SessionState{State::Failed, FailReason::Auth}));
  s = advance(s, Event::AuthOk);
  EXPECT_EQ(advance(s, Event::FactorFail), (SessionState{State::Failed, FailReason::Factor}));
  EXPECT_EQ(advance(s, Event::CredentialsIssued), (SessionState{State::Failed, FailReason::ProtocolViolation}));
  SessionState failed{State::Failed, FailReason::Auth};
  for (auto e : kAllEvents) {
    EXPECT_EQ(advance(failed, e), failed);
  }
  EXPECT_EQ(advance({}, Event::AuthFail).reason, FailReason::ProtocolViolation);
  EXPECT_EQ(parse_event("server-updated"), Event::ServerUpdated);
  EXPECT_THROW(parse_event("nope"), std::invalid_argument);
}

TEST(ModelCheck, ShortBoundIsSafeAndComplete)
{
  auto r = model_check(8);
  EXPECT_EQ(r.sequences, sequence_count(9, 8));
  EXPECT_EQ(r.paired, 1u);
  EXPECT_TRUE(r.safe());
  EXPECT_TRUE(r.counterexample.empty());
}

namespace {

// confirms straight from ServerUpdated, skipping client provisioning
SessionState skip_provisioning(SessionState s, Event e)
{
  if (s.state == State::ServerUpdated && e == Event::Confirm) {
    return {State::Paired, FailReason::None};
  }
  return advance(s, e);
}

// provisions the client before the ACL update
SessionState client_first(SessionState s, Event e)
{
  if (s.state == State::CredentialsIssued && e == Event::ClientProvisioned) {
    return {State::ClientProvisioned, FailReason::None};
  }
  return advance(s, e);
}

} // namespace

TEST(ModelCheck, CatchesFaultyMachines)
{
  auto a = model_check(8, skip_provisioning);
  EXPECT_FALSE(a.safe());
  EXPECT_GT(a.paired_without_path, 0u);
  ASSERT_FALSE(a.counterexample.empty());
  EXPECT_EQ(a.counterexample.back(), Event::Confirm);

  auto b = model_check(8, client_first);
  EXPECT_FALSE(b.safe());
  EXPECT_GT(b.client_before_acl, 0u);
}

TEST(Credentials, AclAdmitRevokeLevels)
{
  WifiServer server;
  auto pairing = mint_credential(AccessLevel::Pairing);
  auto diag = mint_credential(AccessLevel::Diagnostics);
  server.add(pairing);
  server.add(diag);
  EXPECT_THROW(server.add(pairing), std::logic_error);
  auto e = server.admit(diag.token);
  ASSERT_TRUE(e);
  EXPECT_EQ(e->level, AccessLevel::Diagnostics);
  EXPECT_NE(privileges_for(AccessLevel::Pairing), privileges_for(AccessLevel::Diagnostics));
  WifiClient client;
  client.provision(pairing);
  EXPECT_TRUE(client.connect(server));
  EXPECT_TRUE(server.revoke(pairing.id));
  EXPECT_FALSE(client.connect(server));
  EXPECT_FALSE(server.admit(pairing.token));
}

TEST(Fms, Authenticate)
{
  Fms fms;
  auto secret = crypto::random_bytes(32);
  fms.provision("trailer", secret);
  auto c = make_entity_credential("trailer", secret);
  EXPECT_TRUE(fms.authenticate(c));
  auto tampered = c;
  tampered.nonce[0] ^= 1;
  EXPECT_FALSE(fms.authenticate(tampered));
  EXPECT_FALSE(fms.authenticate(make_entity_credential("stranger", secret)));
  EXPECT_EQ(fms.unknown_entities(), 1u);
}

TEST(Otp, SixDigitsSingleUseWindow)
{
  auto now = std::chrono::steady_clock::now();
  auto t = now;
  OtpIssuer otp(std::chrono::seconds(60), [&t] { return t; });
  auto code = otp.issue("a");
  EXPECT_EQ(code.size(), 6u);
  EXPECT_TRUE(std::all_of(code.begin(), code.end(), ::isdigit));
  EXPECT_EQ(otp.verify("a", code), OtpResult::Ok);
  EXPECT_EQ(otp.verify("a", code), OtpResult::NotIssued);

  code = otp.issue("a");
  t = now + std::chrono::seconds(60);
  EXPECT_EQ(otp.verify("a", code), OtpResult::Ok) << "boundary is inside the window";
  t = now;
  code = otp.issue("a");
  t = now + std::chrono::seconds(61);
  EXPECT_EQ(otp.verify("a", code), OtpResult::Expired);
  t = now;
  code = otp.issue("b");
  EXPECT_EQ(otp.verify("b", code == "000000" ? "000001" : "000000"), OtpResult::Wrong);
}

TEST(Session, IssueRefusedOutsideFactorVerified)
{
  WifiServer server;
  WifiClient client;
  PairingSession s("s", "t", "r", server, client);
  EXPECT_THROW(s.issue_credentials(), CredentialRefused);
  EXPECT_EQ(server.size(), 0u);
}

TEST(Session, AclBeforeClientOnHappyPath)
{
  WifiServer server;
  WifiClient client;
  std::ostringstream trace;
  PairingSession s("s1", "t", "r", server, client, &trace);
  for (auto e : kHappyPath) {
    if (e == Event::ClientProvisioned) {
      ASSERT_TRUE(s.credential());
      EXPECT_TRUE(server.contains(s.credential()->id));
      EXPECT_FALSE(client.credential());
    }
    s.apply(e);
  }
  EXPECT_EQ(s.state().state, State::Paired);
  EXPECT_EQ(server.size(), 1u);
  EXPECT_TRUE(client.connect(server));
  std::istringstream lines(trace.str());
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["session"], "s1");
    EXPECT_TRUE(j.contains("t_ns"));
    ++n;
  }
  EXPECT_EQ(n, 7);
}

TEST(Demo, Outcomes)
{
  std::ostringstream sink;
  EXPECT_EQ(run_pairing_demo({}, sink).final_state.state, State::Paired);
  DemoOptions o;
  o.fail_auth = true;
  EXPECT_EQ(exit_code_for(run_pairing_demo(o, sink).final_state), 10);
  o = {};
  o.wrong_otp = true;
  auto r = run_pairing_demo(o, sink);
  EXPECT_EQ(r.final_state, (SessionState{State::Failed, FailReason::Factor}));
  EXPECT_EQ(r.acl_size, 0u);
  o = {};
  o.spoofed_gps = true;
  r = run_pairing_demo(o, sink);
  EXPECT_EQ(exit_code_for(r.final_state), 11);
  EXPECT_EQ(r.factor_reason, "gps spoof-or-malfunction");
  o = {};
  o.factor = FactorKind::Otp;
  o.otp_delay_s = 61;
  r = run_pairing_demo(o, sink);
  EXPECT_EQ(r.factor_reason, "otp expired");
  o = {};
  o.factor = FactorKind::Geo;
  o.wrong_otp = true; // ignored without the otp factor
  r = run_pairing_demo(o, sink);
  EXPECT_EQ(r.final_state.state, State::Paired);
  EXPECT_TRUE(r.client_connected);
}
