#include <trailernet/harness/codec_dump.hpp>
#include <trailernet/harness/orchestrator.hpp>
#include <trailernet/pubsub/reassembler.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace tnet;
namespace fs = std::filesystem;

namespace {

const fs::path kGolden = TRAILERNET_GOLDEN_DIR;
const std::string kCli = TRAILERNET_CLI;

std::string slurp(const fs::path& p)
{
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct CliResult
{
  int code = -1;
  std::string out;
};

CliResult cli(const std::string& args, const std::string& env = "")
{
  auto tmp = fs::temp_directory_path() / ("tnet-cli-" + std::to_string(::getpid()) + ".out");
  std::string cmd = env + " " + kCli + " " + args + " >" + tmp.string() + " 2>&1";
  int rc = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(tmp);
  fs::remove(tmp);
  return r;
}

/// Hex lines of every packet in a dump; comment lines split packets.
std::vector<Bytes> packets_in(const std::string& dump)
{
  std::vector<Bytes> out;
  std::istringstream in(dump);
  std::string line;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      out.push_back(parse_hexdump(current));
      current.clear();
    }
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') {
      flush();
      continue;
    }
    current += line + "\n";
  }
  flush();
  return out;
}

fs::path scratch(const std::string& name)
{
  auto p = fs::temp_directory_path() / ("tnet-harness-" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p.parent_path());
  return p;
}

fs::path write_file(const std::string& name, const std::string& text)
{
  auto p = scratch(name);
  std::ofstream(p) << text;
  return p;
}

} // namespace

// golden corpus

class GoldenDump : public ::testing::TestWithParam<std::tuple<std::string, std::string>>
{};

TEST_P(GoldenDump, LibraryAndCliMatchCorpus)
{
  auto [kind, stream] = GetParam();
  auto file = kGolden / (kind + "_" + stream + ".hex");
  ASSERT_TRUE(fs::exists(file)) << file;
  auto expected = slurp(file);
  auto profile = traffic::default_profile(traffic::parse_label(stream));
  EXPECT_EQ(harness::codec_dump(kind, profile), expected);
  auto r = cli("codec-dump " + kind + " " + stream);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, expected);
}

TEST_P(GoldenDump, CorpusDecodesToTheCanonicalPacket)
{
  auto [kind, stream] = GetParam();
  auto packets = packets_in(slurp(kGolden / (kind + "_" + stream + ".hex")));
  auto profile = traffic::default_profile(traffic::parse_label(stream));
  auto ramp = harness::ramp_payload(profile.payload_bytes);
  ASSERT_FALSE(packets.empty());
  if (kind == "interest") {
    auto i = decode_interest(packets.at(0)).value;
    EXPECT_EQ(i.name, profile.ndn_name);
    EXPECT_EQ(i.nonce, 0x01020304u);
    EXPECT_TRUE(i.must_be_fresh);
    EXPECT_EQ(i.lifetime, std::chrono::milliseconds(4000));
  }
  else if (kind == "data") {
    auto d = decode_data(packets.at(0)).value;
    EXPECT_EQ(d.name, profile.ndn_name);
    EXPECT_EQ(d.content, ramp);
    EXPECT_EQ(d.signature_value, Bytes(32, 0));
  }
  else if (kind == "pubsub") {
    EXPECT_EQ(packets.size(), pubsub::fragment_count(profile.payload_bytes, pubsub::kDefaultMtu));
    pubsub::Reassembler r;
    std::optional<pubsub::Sample> done;
    for (auto it = packets.rbegin(); it != packets.rend(); ++it) { // reverse order on purpose
      auto res = r.push(pubsub::decode_message(*it), Clock::now());
      if (res.sample) done = res.sample;
    }
    ASSERT_TRUE(done);
    EXPECT_EQ(done->payload, ramp);
    EXPECT_EQ(done->topic_id, profile.topic.id);
  }
  else if (kind == "pubsub-ack") {
    ASSERT_EQ(packets.at(0).size(), pubsub::kHeaderSize);
    auto m = pubsub::decode_message(packets.at(0));
    EXPECT_TRUE(m.header.flags & pubsub::FlagAck);
  }
  else if (kind == "app-ack") {
    EXPECT_EQ(decode_app_ack(packets.at(0)), 1u);
  }
}

INSTANTIATE_TEST_SUITE_P(Corpus, GoldenDump,
                         ::testing::Values(std::make_tuple("interest", "lidar"), std::make_tuple("interest", "can"),
                                           std::make_tuple("interest", "cam"), std::make_tuple("data", "lidar"),
                                           std::make_tuple("data", "can"), std::make_tuple("data", "cam"),
                                           std::make_tuple("pubsub", "lidar"), std::make_tuple("pubsub", "can"),
                                           std::make_tuple("pubsub", "cam"), std::make_tuple("pubsub-ack", "can"),
                                           std::make_tuple("app-ack", "can")),
                         [](const auto& info) {
                           auto n = std::get<0>(info.param) + "_" + std::get<1>(info.param);
                           std::replace(n.begin(), n.end(), '-', '_');
                           return n;
                         });

TEST(CodecDump, HeaderLinesCarryWireSizes)
{
  auto can = traffic::default_profile(traffic::StreamLabel::Can);
  EXPECT_NE(harness::codec_dump("interest", can).find("30 bytes, 72 on the wire (udp)"), std::string::npos);
  EXPECT_NE(harness::codec_dump("data", can).find("217 bytes, 259 on the wire (udp)"), std::string::npos);
  EXPECT_NE(harness::codec_dump("pubsub-ack", can).find("64 bytes, 106 on the wire"), std::string::npos);
  EXPECT_THROW(harness::codec_dump("bogus", can), std::invalid_argument);
}

// scenario files

TEST(Scenario, FileAndOverrides)
{
  auto p = write_file("s.conf", "# comment\nprotocol = pubsub\nduration_s = 12.5\nseed=9\ntopology = shared\n"
                                "streams = can,cam\ncan.payload_bytes = 200\ncam.period_ms = 25\n");
  auto s = harness::load_scenario(p);
  EXPECT_EQ(s.protocol, traffic::Protocol::PubSub);
  EXPECT_DOUBLE_EQ(s.duration_s, 12.5);
  EXPECT_EQ(s.seed, 9u);
  EXPECT_EQ(s.topology, harness::Topology::Shared);
  ASSERT_EQ(s.streams.size(), 2u);
  EXPECT_EQ(s.find_stream(traffic::StreamLabel::Can)->payload_bytes, 200u);
  EXPECT_EQ(s.find_stream(traffic::StreamLabel::Cam)->period, std::chrono::milliseconds(25));
  EXPECT_EQ(s.find_stream(traffic::StreamLabel::Lidar), nullptr);
  harness::apply_override(s, "mtu=9000");
  EXPECT_EQ(s.mtu, 9000u);
  EXPECT_NO_THROW(s.validate());
}

TEST(Scenario, ShippedScenariosLoad)
{
  auto desk = harness::load_scenario(fs::path(TRAILERNET_SCENARIO_DIR) / "desk.conf");
  EXPECT_NO_THROW(desk.validate());
  EXPECT_EQ(desk.to_json(), harness::Scenario{}.to_json()); // the file spells out the defaults
  auto det = harness::load_scenario(fs::path(TRAILERNET_SCENARIO_DIR) / "determinism.conf");
  EXPECT_EQ(det.max_samples, 150u);
  EXPECT_EQ(det.protocol, traffic::Protocol::PubSub);
}

TEST(Scenario, RejectsBadInput)
{
  harness::Scenario s;
  EXPECT_THROW(harness::apply_override(s, "nonsense"), harness::ConfigError);
  EXPECT_THROW(harness::apply_override(s, "colour=red"), harness::ConfigError);
  EXPECT_THROW(harness::apply_override(s, "protocol=dds"), harness::ConfigError);
  EXPECT_THROW(harness::apply_override(s, "seed=abc"), harness::ConfigError);
  harness::apply_override(s, "duration_s=0");
  EXPECT_THROW(s.validate(), harness::ConfigError);
  s = {};
  harness::apply_override(s, "mtu=40");
  EXPECT_THROW(s.validate(), harness::ConfigError);
  s = {};
  harness::apply_override(s, "cam.payload_bytes=9000");
  EXPECT_THROW(s.validate(), harness::ConfigError); // over the Data content limit for ndn
  harness::apply_override(s, "protocol=pubsub");
  EXPECT_NO_THROW(s.validate());
  EXPECT_THROW(harness::load_scenario("/nonexistent/x.conf"), harness::ConfigError);
}

TEST(Scenario, OutputRootFollowsEnvironment)
{
  ::setenv(harness::kOutputEnv, "/tmp/elsewhere", 1);
  EXPECT_EQ(harness::output_root(), fs::path("/tmp/elsewhere"));
  ::unsetenv(harness::kOutputEnv);
  EXPECT_EQ(harness::output_root(), fs::path("runs"));
}

TEST(Scenario, ManifestJsonRecordsChoices)
{
  harness::Scenario s;
  auto j = s.to_json();
  EXPECT_EQ(j["topology"], "per-ecu");
  EXPECT_EQ(j["pacing"], "anchored");
  EXPECT_EQ(j["delay"], "consumer");
  EXPECT_EQ(j["streams"].size(), 3u);
}

// process plan

TEST(Plan, PerEcuNdnStartsForwardersFirst)
{
  harness::Scenario s;
  auto stages = harness::plan_processes(s, "/tmp/x");
  ASSERT_EQ(stages.size(), 4u);
  ASSERT_EQ(stages[0].size(), 1u);
  EXPECT_EQ(stages[0][0].process_name, "forwarder-pc");
  EXPECT_EQ(stages[0][0].tcp_listen, "127.0.0.1:46360");
  ASSERT_EQ(stages[1].size(), 3u);
  EXPECT_EQ(stages[1][0].process_name, "forwarder-rpi1");
  EXPECT_EQ(stages[1][0].tcp_listen, "127.0.0.1:46361");
  EXPECT_EQ(stages[1][0].routes.at(0), "/trailer/lidar=tcp://127.0.0.1:46360");
  EXPECT_EQ(stages[2][0].kind, "producer");
  EXPECT_EQ(stages[3][1].process_name, "consumer-can");
  EXPECT_EQ(stages[3][1].forwarder, "127.0.0.1:46362");
  EXPECT_EQ(stages[3][1].face, "tcp");
  EXPECT_EQ(harness::bound_endpoints(stages).size(), 4u);
}

TEST(Plan, SharedUdpAttachesConsumersToPc)
{
  harness::Scenario s;
  s.protocol = traffic::Protocol::NdnUdp;
  s.topology = harness::Topology::Shared;
  auto stages = harness::plan_processes(s, "/tmp/x");
  ASSERT_EQ(stages.size(), 3u);
  EXPECT_EQ(stages[2][0].forwarder, "127.0.0.1:46360");
  EXPECT_EQ(stages[2][0].face, "udp");
}

TEST(Plan, PubSubStartsSubscribersFirst)
{
  harness::Scenario s;
  s.protocol = traffic::Protocol::PubSub;
  auto stages = harness::plan_processes(s, "/tmp/x");
  ASSERT_EQ(stages.size(), 2u);
  EXPECT_EQ(stages[0][0].kind, "consumer");
  EXPECT_EQ(stages[0][0].subscriber, "127.0.0.1:46370");
  EXPECT_EQ(stages[1][2].subscriber, "127.0.0.1:46372");
  EXPECT_EQ(harness::bound_endpoints(stages).size(), 3u);
}

// CLI

TEST(Cli, SpoofCheckExitCodes)
{
  auto clean = write_file("clean.csv", "t,xT,yT,xR,yR\n0,10,10,9,9\n1,20,20,19.5,18\n");
  auto spoof = write_file("spoof.csv", "0,10,10,9,9\n1,20,20,0,0\n");
  auto uneven = write_file("uneven.csv", "0,10,10,9,9\n1,20,20,,\n");
  auto bad = write_file("bad.csv", "0,10,10,9,9\n1,20,x,19,19\n");
  const std::string params = " --d 1 --e-t 2.5 --e-r 2.5";

  auto r = cli("spoof-check " + clean.string() + params);
  EXPECT_EQ(r.code, harness::kSpoofClean) << r.out;
  EXPECT_NE(r.out.find("t=1 consistent"), std::string::npos);
  r = cli("spoof-check " + spoof.string() + params);
  EXPECT_EQ(r.code, harness::kSpoofDetected) << r.out;
  EXPECT_NE(r.out.find("t=1 spoof-or-malfunction"), std::string::npos);
  EXPECT_EQ(cli("spoof-check " + uneven.string() + params).code, harness::kSpoofUsage);
  r = cli("spoof-check " + bad.string() + params);
  EXPECT_EQ(r.code, harness::kSpoofMalformed);
  EXPECT_NE(r.out.find("line 2"), std::string::npos);
  EXPECT_EQ(cli("spoof-check " + clean.string()).code, harness::kSpoofUsage); // missing parameters
  EXPECT_EQ(cli("spoof-check /nonexistent.csv" + params).code, harness::kSpoofUsage);
  EXPECT_EQ(cli("spoof-check " + clean.string() + " --d -1 --e-t 1 --e-r 1").code, harness::kSpoofUsage);
  // per-axis offset (0, 0): the same data is now off by one on each axis, inside the budget
  EXPECT_EQ(cli("spoof-check " + clean.string() + params + " --axis-offset 0,0").code, harness::kSpoofClean);
}

TEST(Cli, PairingDemoExitCodes)
{
  auto r = cli("pairing-demo");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("final state: Paired"), std::string::npos);
  EXPECT_NE(r.out.find("\"to\":\"Paired\""), std::string::npos);
  EXPECT_EQ(cli("pairing-demo --fail-auth").code, 10);
  EXPECT_EQ(cli("pairing-demo --wrong-otp").code, 11);
  EXPECT_EQ(cli("pairing-demo --spoofed-gps").code, 11);
  EXPECT_EQ(cli("pairing-demo --factor otp --spoofed-gps").code, 0); // geo not consulted
  EXPECT_EQ(cli("pairing-demo --factor geo --wrong-otp").code, 0);   // otp not consulted
  EXPECT_EQ(cli("pairing-demo --otp-delay 60").code, 0);
  r = cli("pairing-demo --otp-delay 61");
  EXPECT_EQ(r.code, 11);
  EXPECT_NE(r.out.find("expired"), std::string::npos);
  EXPECT_EQ(cli("pairing-demo --factor sms").code, harness::kExitConfig);
}

TEST(Cli, RunRejectsBadConfiguration)
{
  EXPECT_EQ(cli("run --duration 0 --out " + scratch("zero").string()).code, harness::kExitConfig);
  EXPECT_EQ(cli("run --set colour=red").code, harness::kExitConfig);
  EXPECT_EQ(cli("run --protocol dds").code, harness::kExitConfig);
  EXPECT_EQ(cli("frobnicate").code, harness::kExitConfig);
}

TEST(Cli, ShortRunWritesArtifactsAndReportReadsThem)
{
  auto dir = scratch("short");
  auto r = cli("run --protocol ndn-tcp --duration 1.5 --set base_port=47100 --out " + dir.string());
  ASSERT_EQ(r.code, 0) << r.out;
  for (auto f : {"manifest.json", "samples.csv", "summary.csv", "resources.csv", "traffic.csv", "report.txt",
                 "latency_can.svg"}) {
    EXPECT_TRUE(fs::exists(dir / f) && fs::file_size(dir / f) > 0) << f;
  }
  auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest["status"], "ok");
  EXPECT_EQ(manifest["exit_code"], 0);
  EXPECT_EQ(manifest["scenario"]["base_port"], 47100);
  EXPECT_EQ(manifest["processes"].size(), 10u);
  for (const auto& a : manifest["artifacts"]) {
    EXPECT_TRUE(fs::exists(dir / a.get<std::string>())) << a;
  }
  auto summary = metrics::read_summary_csv(dir / "summary.csv");
  ASSERT_EQ(summary.size(), 3u);
  for (const auto& row : summary) {
    EXPECT_TRUE(row.ordered());
    EXPECT_GE(row.packets_count, 2u);
  }

  auto rep = cli("report " + dir.string());
  EXPECT_EQ(rep.code, 0);
  EXPECT_NE(rep.out.find("can stream"), std::string::npos);
  EXPECT_EQ(cli("report /nonexistent/run").code, harness::kExitConfig);
}

TEST(Cli, OutputRootFromEnvironment)
{
  auto root = scratch("envroot");
  auto r = cli("run --protocol pubsub --duration 0.5 --set streams=can --set base_port=47200",
               std::string(harness::kOutputEnv) + "=" + root.string());
  ASSERT_EQ(r.code, 0) << r.out;
  ASSERT_TRUE(fs::is_directory(root));
  bool found = false;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    found = found || e.path().filename() == "manifest.json";
  }
  EXPECT_TRUE(found);
}

// orchestrator failure paths

TEST(Orchestrator, PortConflictAborts)
{
  auto held = net::tcp_listen(net::Endpoint{"127.0.0.1", 47300});
  harness::Scenario s;
  s.base_port = 47300;
  s.duration_s = 1;
  s.output_dir = scratch("conflict");
  harness::OrchestratorOptions opt;
  opt.executable = kCli;
  std::ostringstream log;
  opt.log = &log;
  auto r = harness::run_scenario(s, opt);
  EXPECT_EQ(r.exit_code, harness::kExitAbort);
  EXPECT_EQ(r.status, "aborted");
  EXPECT_NE(log.str().find("47300"), std::string::npos);
  EXPECT_TRUE(fs::exists(s.output_dir / "manifest.json"));
}

TEST(Orchestrator, RefusesNonEmptyOutputDirectory)
{
  harness::Scenario s;
  s.output_dir = scratch("nonempty");
  fs::create_directories(s.output_dir);
  std::ofstream(s.output_dir / "keep.txt") << "x";
  EXPECT_THROW(harness::run_scenario(s, {}), harness::ConfigError);
}

TEST(Orchestrator, MissingExecutableAborts)
{
  harness::Scenario s;
  s.base_port = 47400;
  s.output_dir = scratch("noexe");
  harness::OrchestratorOptions opt;
  opt.executable = "/nonexistent/trailernet";
  opt.ready_timeout_ms = 1000;
  std::ostringstream log;
  opt.log = &log;
  auto r = harness::run_scenario(s, opt);
  EXPECT_EQ(r.exit_code, harness::kExitAbort);
  EXPECT_NE(r.manifest["abort_reason"].get<std::string>().find("did not become ready"), std::string::npos);
}

TEST(Orchestrator, CountBoundedRunStopsEarly)
{
  harness::Scenario s;
  s.protocol = traffic::Protocol::NdnUdp;
  s.base_port = 47500;
  s.duration_s = 20; // acts as a timeout
  s.max_samples = 30;
  s.output_dir = scratch("bounded");
  harness::OrchestratorOptions opt;
  opt.executable = kCli;
  std::ostringstream log;
  opt.log = &log;
  auto t0 = Clock::now();
  auto r = harness::run_scenario(s, opt);
  EXPECT_EQ(r.exit_code, harness::kExitOk) << log.str();
  EXPECT_LT(Clock::now() - t0, std::chrono::seconds(5));
  EXPECT_TRUE(r.manifest["count_bound_reached"].get<bool>());
  for (const auto& row : r.summaries) {
    EXPECT_EQ(row.packets_count, 30u) << row.stream;
  }
}
