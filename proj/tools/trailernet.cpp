#include <trailernet/harness/codec_dump.hpp>
#include <trailernet/harness/orchestrator.hpp>
#include <trailernet/pairing/demo.hpp>
#include <trailernet/pairing/gps_csv.hpp>

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace tnet;
using harness::ConfigError;

std::atomic<bool> g_interrupted{false};

void on_interrupt(int)
{
  g_interrupted.store(true);
}

struct RunArgs
{
  std::string scenario;
  std::vector<std::string> protocols;
  double duration = 0;
  std::uint64_t seed = 0;
  std::uint64_t max_samples = 0;
  std::string out;
  std::vector<std::string> settings;
  std::string exe;
};

std::vector<traffic::Protocol> expand_protocols(const std::vector<std::string>& names, traffic::Protocol fallback)
{
  std::vector<traffic::Protocol> out;
  for (const auto& n : names) {
    if (n == "all") {
      out = {traffic::Protocol::NdnTcp, traffic::Protocol::NdnUdp, traffic::Protocol::PubSub};
      continue;
    }
    out.push_back(traffic::parse_protocol(n));
  }
  if (out.empty()) {
    out.push_back(fallback);
  }
  return out;
}

int cmd_run(const RunArgs& a, CLI::App& app)
{
  harness::Scenario base;
  if (!a.scenario.empty()) {
    base = harness::load_scenario(a.scenario);
  }
  for (const auto& kv : a.settings) {
    harness::apply_override(base, kv);
  }
  if (app.count("--duration")) base.duration_s = a.duration;
  if (app.count("--seed")) base.seed = a.seed;
  if (app.count("--max-samples")) base.max_samples = a.max_samples;

  auto protocols = expand_protocols(a.protocols, base.protocol);
  std::filesystem::path root = a.out.empty() ? std::filesystem::path() : std::filesystem::path(a.out);
  if (root.empty() && (protocols.size() > 1 || base.output_dir.empty())) {
    root = harness::output_root() / ("session-" + harness::detail::timestamp());
  }
  if (protocols.size() == 1 && !a.out.empty()) {
    root = a.out;
  }

  struct sigaction sa{};
  sa.sa_handler = on_interrupt;
  sigemptyset(&sa.sa_mask);
  ::sigaction(SIGINT, &sa, nullptr);
  ::sigaction(SIGTERM, &sa, nullptr);
  std::signal(SIGPIPE, SIG_IGN);

  harness::OrchestratorOptions opt;
  if (!a.exe.empty()) opt.executable = a.exe;
  opt.interrupt = &g_interrupted;

  int worst = harness::kExitOk;
  std::vector<metrics::RunData> finished;
  for (auto proto : protocols) {
    harness::Scenario sc = base;
    sc.protocol = proto;
    if (protocols.size() > 1) {
      sc.output_dir = root / traffic::to_string(proto);
    }
    else if (!root.empty()) {
      sc.output_dir = root;
    }
    sc.validate();
    std::cerr << "running " << traffic::to_string(proto) << " for " << sc.duration_s << " s -> "
              << sc.output_dir.string() << "\n";
    auto r = harness::run_scenario(sc, opt);
    std::cout << traffic::to_string(proto) << ": " << r.status << " (exit " << r.exit_code << ") " << r.dir.string()
              << "\n";
    for (const auto& s : r.summaries) {
      std::cout << "  " << s.stream << ": " << s.packets_count << " samples, mean "
                << metrics::format_double(s.mean_ms, 4) << " ms, min " << metrics::format_double(s.min_ms, 4)
                << " ms, max " << metrics::format_double(s.max_ms, 4) << " ms\n";
    }
    for (const auto& v : r.violations) {
      std::cout << "  violation: " << v << "\n";
    }
    if (r.exit_code == harness::kExitAbort || (worst == harness::kExitOk && r.exit_code != harness::kExitOk)) {
      worst = r.exit_code;
    }
    if (r.exit_code != harness::kExitAbort) {
      finished.push_back(metrics::load_run(r.dir));
    }
    if (g_interrupted.load()) {
      break;
    }
  }
  if (protocols.size() > 1 && !finished.empty()) {
    try {
      metrics::write_report(finished, root);
      std::cout << "comparison report: " << (root / "report.txt").string() << "\n";
    }
    catch (const metrics::InsufficientData& e) {
      std::cerr << "comparison report skipped: " << e.what() << "\n";
    }
  }
  return worst;
}

int cmd_report(const std::vector<std::string>& dirs, const std::string& out)
{
  std::vector<metrics::RunData> runs;
  for (const auto& d : dirs) {
    if (!std::filesystem::is_directory(d)) {
      throw ConfigError("not a run directory: " + d);
    }
    runs.push_back(metrics::load_run(d));
  }
  try {
    if (!out.empty()) {
      metrics::preflight_output_dir(out);
      metrics::write_report(runs, out);
    }
    std::cout << metrics::render_report(runs);
  }
  catch (const metrics::InsufficientData& e) {
    std::cerr << "report: " << e.what() << "\n";
    return harness::kExitViolation;
  }
  return harness::kExitOk;
}

struct SpoofArgs
{
  std::string csv;
  double d = 0;
  double e_t = 0;
  double e_r = 0;
  std::vector<double> axis_offset;
};

int cmd_spoof_check(const SpoofArgs& a)
{
  pairing::GpsSeries series;
  try {
    series = pairing::read_gps_csv(a.csv);
  }
  catch (const pairing::GpsCsvError& e) {
    std::cerr << "spoof-check: " << a.csv << ": " << e.what() << "\n";
    return harness::kSpoofMalformed;
  }
  catch (const std::exception& e) {
    std::cerr << "spoof-check: " << e.what() << "\n";
    return harness::kSpoofUsage;
  }
  std::optional<std::pair<double, double>> axis;
  if (!a.axis_offset.empty()) {
    axis = std::make_pair(a.axis_offset.at(0), a.axis_offset.at(1));
  }
  pairing::SpoofParams p(a.d, a.e_t, a.e_r, axis);
  std::vector<pairing::Verdict> verdicts;
  try {
    verdicts = pairing::spoof_check(series.tractor, series.trailer, p);
  }
  catch (const std::invalid_argument& e) {
    std::cerr << "spoof-check: " << e.what() << "\n";
    return harness::kSpoofUsage;
  }
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    std::cout << "t=" << series.tractor[i].t << " " << pairing::to_string(verdicts[i]) << "\n";
    flagged += verdicts[i] != pairing::Verdict::Consistent;
  }
  std::cout << verdicts.size() << " fixes, " << flagged << " flagged: "
            << (flagged ? "spoof or malfunction" : "consistent") << "\n";
  return flagged ? harness::kSpoofDetected : harness::kSpoofClean;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Trailer in-vehicle networking testbed: NDN and pub/sub over simulated ECUs"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "run a scenario and write its artifacts");
  run->add_option("--scenario", run_args.scenario, "scenario file (key = value lines)")->check(CLI::ExistingFile);
  run->add_option("--protocol", run_args.protocols, "ndn-tcp, ndn-udp, pubsub or all; repeatable");
  run->add_option("--duration", run_args.duration, "seconds per protocol");
  run->add_option("--seed", run_args.seed, "payload RNG seed");
  run->add_option("--max-samples", run_args.max_samples, "stop each consumer after this many samples");
  run->add_option("--out", run_args.out, "output directory (default $TRAILERNET_OUT or ./runs)");
  run->add_option("--set", run_args.settings, "override a scenario key, e.g. --set mtu=1472");
  run->add_option("--exe", run_args.exe)->group("");

  std::vector<std::string> report_dirs;
  std::string report_out;
  auto* report = app.add_subcommand("report", "render a comparison report from run directories");
  report->add_option("runs", report_dirs, "run directories")->required();
  report->add_option("--out", report_out, "write report.txt and SVG plots here");

  SpoofArgs spoof;
  auto* spoof_cmd = app.add_subcommand("spoof-check", "check tractor/trailer GPS series for spoofing");
  spoof_cmd->add_option("csv", spoof.csv, "CSV: t,tractor_x,tractor_y,trailer_x,trailer_y")->required();
  spoof_cmd->add_option("--d", spoof.d, "antenna separation")->required();
  spoof_cmd->add_option("--e-t", spoof.e_t, "tractor receiver max error")->required();
  spoof_cmd->add_option("--e-r", spoof.e_r, "trailer receiver max error")->required();
  spoof_cmd->add_option("--axis-offset", spoof.axis_offset, "per-axis separation dx,dy")
    ->delimiter(',')
    ->expected(2);

  pairing::DemoOptions demo;
  std::string factor = "both";
  auto* demo_cmd = app.add_subcommand("pairing-demo", "run one simulated pairing session");
  demo_cmd->add_option("--factor", factor, "geo, otp or both")->check(CLI::IsMember({"geo", "otp", "both"}));
  demo_cmd->add_flag("--fail-auth", demo.fail_auth, "trailer presents a tampered credential");
  demo_cmd->add_flag("--wrong-otp", demo.wrong_otp, "trailer echoes a wrong passcode");
  demo_cmd->add_flag("--spoofed-gps", demo.spoofed_gps, "trailer GPS fix is far outside the error budget");
  demo_cmd->add_option("--otp-delay", demo.otp_delay_s, "seconds before passcodes are echoed")
    ->check(CLI::NonNegativeNumber);
  demo_cmd->add_option("--seed", demo.seed);

  std::string dump_kind = "interest";
  std::string dump_stream = "can";
  harness::DumpOptions dump_opt;
  auto* dump = app.add_subcommand("codec-dump", "hex dump of a canonical packet for a stream");
  dump->add_option("kind", dump_kind)->required()->check(
    CLI::IsMember(std::vector<std::string>(harness::kDumpKinds.begin(), harness::kDumpKinds.end())));
  dump->add_option("stream", dump_stream)->required()->check(CLI::IsMember({"lidar", "can", "cam"}));
  dump->add_option("--nonce", dump_opt.nonce);
  dump->add_option("--seq", dump_opt.sequence);
  dump->add_option("--mtu", dump_opt.mtu);

  harness::RoleSpec role_spec;
  auto* role = harness::add_role_commands(app, role_spec);

  try {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : harness::kExitConfig;
  }

  try {
    if (*role) {
      return harness::run_role(role_spec);
    }
    if (*run) {
      return cmd_run(run_args, *run);
    }
    if (*report) {
      return cmd_report(report_dirs, report_out);
    }
    if (*spoof_cmd) {
      return cmd_spoof_check(spoof);
    }
    if (*demo_cmd) {
      demo.factor = pairing::parse_factor(factor);
      auto r = pairing::run_pairing_demo(demo, std::cout);
      std::cout << "final state: " << r.final_state.describe();
      if (!r.factor_reason.empty()) {
        std::cout << " (" << r.factor_reason << ")";
      }
      std::cout << "\n";
      return pairing::exit_code_for(r.final_state);
    }
    if (*dump) {
      std::cout << harness::codec_dump(dump_kind, traffic::default_profile(traffic::parse_label(dump_stream)),
                                       dump_opt);
      return 0;
    }
  }
  catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return harness::kExitConfig;
  }
  catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return harness::kExitConfig;
  }
  catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return harness::kExitAbort;
  }
  return 0;
}
