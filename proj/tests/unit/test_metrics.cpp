#include <trailernet/metrics/report.hpp>

#include <gtest/gtest.h>

#include <csignal>
#include <random>
#include <sys/wait.h>
#include <thread>

using namespace tnet;
using namespace tnet::metrics;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag)
{
  auto d = fs::temp_directory_path() / ("tnet-metrics-" + tag + "-" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::vector<std::int64_t> random_receipts(std::mt19937_64& rng, std::size_t n)
{
  std::vector<std::int64_t> t;
  std::int64_t now = 1'000'000'000 + static_cast<std::int64_t>(rng() % 1'000'000);
  for (std::size_t i = 0; i < n; ++i) {
    now += 1 + static_cast<std::int64_t>(rng() % 30'000'000);
    t.push_back(now);
  }
  return t;
}

} // namespace

TEST(Summarize, HandArithmetic)
{
  std::vector<double> d = {2.0, 3.0, 4.0};
  auto s = summarize_deltas(d);
  EXPECT_EQ(s.packets_count, 4u);
  EXPECT_DOUBLE_EQ(s.mean_ms, 3.0);
  EXPECT_DOUBLE_EQ(s.min_ms, 2.0);
  EXPECT_DOUBLE_EQ(s.max_ms, 4.0);
}

TEST(Summarize, ConstantDeltas)
{
  for (double d : {0.1, 1.0 / 3.0, 8.0, 20.123456789}) {
    std::vector<double> v(997, d);
    auto s = summarize_deltas(v);
    EXPECT_EQ(s.mean_ms, d);
    EXPECT_EQ(s.min_ms, d);
    EXPECT_EQ(s.max_ms, d);
  }
}

TEST(Summarize, InsufficientData)
{
  std::vector<LatencySample> one = {{"can", 0, 5, std::nullopt}};
  EXPECT_THROW(summarize(one), InsufficientData);
  EXPECT_THROW(summarize(std::vector<LatencySample>{}), InsufficientData);
  EXPECT_THROW(summarize_deltas(std::vector<double>{}), InsufficientData);
}

TEST(Summarize, FromTimestamps)
{
  std::vector<std::int64_t> t = {0, 2'000'000, 5'000'000, 9'000'000};
  auto samples = make_samples("can", t);
  EXPECT_FALSE(samples[0].inter_arrival_ms);
  EXPECT_DOUBLE_EQ(*samples[3].inter_arrival_ms, 4.0);
  auto s = summarize(samples);
  EXPECT_EQ(s.stream, "can");
  EXPECT_EQ(s.packets_count, 4u);
  EXPECT_DOUBLE_EQ(s.mean_ms, 3.0);
}

TEST(Summarize, MatchesNaiveOracle)
{
  std::mt19937_64 rng(8);
  for (int round = 0; round < 1000; ++round) {
    std::size_t n = 1 + rng() % 300;
    std::vector<double> d(n);
    std::uniform_real_distribution<double> u(0.001, 50.0);
    for (auto& x : d) x = u(rng);
    auto s = summarize_deltas(d);
    double sum = 0, lo = d[0], hi = d[0];
    for (double x : d) {
      sum += x;
      lo = x < lo ? x : lo;
      hi = x > hi ? x : hi;
    }
    double mean = sum / static_cast<double>(n);
    ASSERT_EQ(s.packets_count, n + 1);
    ASSERT_EQ(s.min_ms, lo);
    ASSERT_EQ(s.max_ms, hi);
    ASSERT_NEAR(s.mean_ms, mean, 1e-9 * mean);
    ASSERT_TRUE(s.ordered());
  }
}

TEST(Csv, SamplesRoundtripBitExact)
{
  auto dir = temp_dir("samples");
  std::mt19937_64 rng(2);
  std::vector<LatencySample> all;
  for (const char* stream : {"lidar", "can", "cam"}) {
    auto t = random_receipts(rng, 500);
    auto s = make_samples(stream, t);
    all.insert(all.end(), s.begin(), s.end());
  }
  write_samples_csv(dir / "samples.csv", all);
  auto back = read_samples_csv(dir / "samples.csv");
  ASSERT_EQ(back, all);
  auto a = summarize_by_stream(all, "pubsub");
  auto b = summarize_by_stream(back, "pubsub");
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a[i].mean_ms, b[i].mean_ms);
    EXPECT_EQ(a[i].min_ms, b[i].min_ms);
    EXPECT_EQ(a[i].max_ms, b[i].max_ms);
    EXPECT_EQ(a[i].packets_count, b[i].packets_count);
  }
  fs::remove_all(dir);
}

TEST(Csv, CorruptionNamesLine)
{
  auto dir = temp_dir("corrupt");
  std::ofstream(dir / "s.csv") << kSamplesHeader << "\ncan,0,1000,\ncan,1,x,\n";
  try {
    read_samples_csv(dir / "s.csv");
    FAIL();
  }
  catch (const CsvError& e) {
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }
  std::ofstream(dir / "t.csv") << kSamplesHeader << "\ncan,0,1000000,\ncan,1,3000000,9.000000\n";
  EXPECT_THROW(read_samples_csv(dir / "t.csv"), CsvError);
  fs::remove_all(dir);
}

TEST(Csv, SummaryColumnOrder)
{
  auto dir = temp_dir("summary");
  std::vector<StreamSummary> rows = {{"lidar", "ndn-tcp", 100, 2.5, 2.0, 8.0}};
  write_summary_csv(dir / "summary.csv", rows);
  std::ifstream f(dir / "summary.csv");
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "stream,protocol,packets_count,mean_ms,min_ms,max_ms");
  auto back = read_summary_csv(dir / "summary.csv");
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].packets_count, 100u);
  EXPECT_DOUBLE_EQ(back[0].mean_ms, 2.5);
  fs::remove_all(dir);
}

TEST(Csv, PreflightRejectsUnwritable)
{
  auto dir = temp_dir("ro");
  std::ofstream(dir / "file") << "x";
  EXPECT_THROW(preflight_output_dir(dir / "file" / "sub"), OutputError);
  EXPECT_NO_THROW(preflight_output_dir(dir / "ok" / "nested"));
  fs::remove_all(dir);
}

namespace {

pid_t spawn(bool busy)
{
  pid_t pid = ::fork();
  if (pid == 0) {
    if (busy) {
      volatile std::uint64_t x = 0;
      for (;;) {
        x = x + 1;
      }
    }
    for (;;) {
      ::pause();
    }
  }
  return pid;
}

double mean_cpu(pid_t pid, int intervals)
{
  ResourceSampler sampler;
  sampler.add(pid, "probe");
  double sum = 0;
  for (int k = 0; k < intervals; ++k) {
    std::this_thread::sleep_for(std::chrono::milliseconds(500));
    auto rows = sampler.sample();
    EXPECT_EQ(rows.size(), 1u);
    if (!rows.empty()) {
      sum += rows[0].cpu_percent;
      EXPECT_GT(rows[0].mem_percent, 0.0);
    }
  }
  return sum / intervals;
}

} // namespace

TEST(Resources, BusyLoopSaturatesOneCore)
{
  pid_t pid = spawn(true);
  double cpu = mean_cpu(pid, 4);
  ::kill(pid, SIGKILL);
  ::waitpid(pid, nullptr, 0);
  EXPECT_NEAR(cpu, 100.0, 10.0);
}

TEST(Resources, SleepingProcessIsIdle)
{
  pid_t pid = spawn(false);
  double cpu = mean_cpu(pid, 2);
  ::kill(pid, SIGKILL);
  ::waitpid(pid, nullptr, 0);
  EXPECT_LT(cpu, 2.0);
}

TEST(Resources, ExitYieldsFinalSampleThenStops)
{
  pid_t pid = spawn(false);
  ResourceSampler sampler;
  sampler.add(pid, "short");
  ::kill(pid, SIGKILL);
  std::this_thread::sleep_for(std::chrono::milliseconds(100));
  auto rows = sampler.sample(); // zombie, not yet reaped
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].final);
  EXPECT_TRUE(sampler.empty());
  ::waitpid(pid, nullptr, 0);
  EXPECT_TRUE(sampler.sample().empty());
}

TEST(Resources, SummaryPerProcess)
{
  std::vector<ResourceSample> s = {{1, "forwarder-pc", 0, 10, 1, false},
                                   {2, "producer-can", 0, 4, 2, false},
                                   {1, "forwarder-pc", 1, 20, 3, false},
                                   {2, "producer-can", 1, 150, 2, true}};
  auto r = summarize_resources(s);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].name, "forwarder-pc");
  EXPECT_DOUBLE_EQ(r[0].mean_cpu_percent, 15.0);
  EXPECT_DOUBLE_EQ(r[0].mean_mem_percent, 2.0);
  EXPECT_FALSE(r[0].multi_core());
  EXPECT_TRUE(r[1].multi_core());
}

TEST(Bytes, InterestAndAckMatchReferenceSizes)
{
  EXPECT_EQ(interest_on_wire(Name::parse("/trailer/can")), 72u);
  EXPECT_EQ(pubsub_ack_on_wire(), 106u);
}

TEST(Bytes, NdnOverheadBelowBaselineForEveryStream)
{
  for (const auto& b : bytes_table()) {
    EXPECT_TRUE(b.ndn_leaner()) << b.stream << " ndn " << b.ndn_overhead << " pubsub " << b.pubsub_overhead;
    EXPECT_EQ(b.ndn_packets, 1u);
    EXPECT_GT(b.reference_ndn_total, 0u);
  }
  EXPECT_EQ(bytes_table()[2].pubsub_packets, 6u);
  EXPECT_EQ(bytes_table()[0].ndn_total, 217u + 42u);
}

namespace {

RunData fake_run(const std::string& protocol, std::mt19937_64& rng)
{
  RunData r;
  r.protocol = protocol;
  for (const char* stream : {"lidar", "can", "cam"}) {
    auto s = make_samples(stream, random_receipts(rng, 50));
    r.samples.insert(r.samples.end(), s.begin(), s.end());
  }
  r.latency = summarize_by_stream(r.samples, protocol);
  r.resources = {{"producer-lidar", 3, 12.5, 20.0, 0.3}, {"forwarder-pc", 3, 5.0, 7.0, 0.2}};
  r.traffic = {{"producer-lidar", "tcp", 10, 1000, 1540}};
  return r;
}

std::size_t count(const std::string& hay, const std::string& needle)
{
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) {
    ++n;
  }
  return n;
}

} // namespace

TEST(Report, ThreeProtocolsThreeTables)
{
  std::mt19937_64 rng(5);
  std::vector<RunData> runs = {fake_run("pubsub", rng), fake_run("ndn-tcp", rng), fake_run("ndn-udp", rng)};
  auto text = render_report(runs);
  EXPECT_EQ(count(text, " stream ("), 3u);
  EXPECT_EQ(count(text, "Packets Count"), 3u);
  EXPECT_EQ(count(text, "\nMean "), 3u);
  // protocol columns in canonical order
  auto header = text.find("ndn-tcp");
  EXPECT_LT(header, text.find("ndn-udp"));
  EXPECT_LT(text.find("ndn-udp"), text.find("pubsub"));
  EXPECT_NE(text.find("2.510"), std::string::npos); // reference lidar ndn-tcp mean alongside
  EXPECT_NE(text.find("producer-lidar"), std::string::npos);
  EXPECT_NE(text.find("Interest /trailer/can: 72 B"), std::string::npos);

  auto dir = temp_dir("report");
  auto files = write_report(runs, dir);
  EXPECT_EQ(files.size(), 4u);
  for (const auto& f : files) {
    EXPECT_GT(fs::file_size(f), 0u);
  }
  std::ifstream svg(dir / "latency_cam.svg");
  std::string first;
  std::getline(svg, first);
  EXPECT_EQ(first.rfind("<svg", 0), 0u);
  fs::remove_all(dir);
}

TEST(Report, EmptyRunRefused)
{
  EXPECT_THROW(render_report({}), InsufficientData);
  RunData empty;
  empty.protocol = "ndn-tcp";
  EXPECT_THROW(render_report({empty}), InsufficientData);
}

TEST(Report, TrafficConsistency)
{
  TrafficRow ok{"producer-can", "udp", 3, 300, 300 + 3 * 42};
  EXPECT_TRUE(ok.consistent());
  TrafficRow tcp{"producer-can", "tcp", 2, 100, 100 + 2 * 54};
  EXPECT_TRUE(tcp.consistent());
  ok.wire_bytes += 1;
  EXPECT_FALSE(ok.consistent());
}
