#ifndef TRAILERNET_HARNESS_ORCHESTRATOR_HPP
#define TRAILERNET_HARNESS_ORCHESTRATOR_HPP

#include "roles.hpp"
#include "scenario.hpp"
#include "../metrics/report.hpp"

#include <fcntl.h>
#include <poll.h>
#include <sys/prctl.h>
#include <sys/wait.h>

#include <ctime>
#include <iostream>
#include <thread>

namespace tnet::harness {

struct RunOutcome
{
  int exit_code = kExitOk;
  std::string status; ///< ok | violations | aborted | interrupted
  std::filesystem::path dir;
  std::vector<std::string> violations;
  std::vector<metrics::StreamSummary> summaries;
  nlohmann::json manifest;
};

struct OrchestratorOptions
{
  std::filesystem::path executable = "/proc/self/exe";
  const std::atomic<bool>* interrupt = nullptr; ///< set by a signal handler to end the run early
  std::ostream* log = &std::cerr;
  int ready_timeout_ms = 5000;
  int stop_timeout_ms = 5000;
};

/// One process in the simulated testbed.
struct Child
{
  RoleSpec spec;
  pid_t pid = -1;
  int ready_fd = -1; ///< read end of the readiness pipe
  bool running = false;
  int status = 0;
  bool stopped_by_us = false;

  bool clean_exit() const { return WIFEXITED(status) && WEXITSTATUS(status) == 0; }
  std::string describe_status() const
  {
    if (WIFEXITED(status)) return "exit " + std::to_string(WEXITSTATUS(status));
    if (WIFSIGNALED(status)) return std::string("signal ") + strsignal(WTERMSIG(status));
    return "unknown";
  }
};

inline std::string endpoint(const std::string& host, std::uint16_t port)
{
  return host + ":" + std::to_string(port);
}

/// Process plan in start order; each inner vector starts together.
inline std::vector<std::vector<RoleSpec>> plan_processes(const Scenario& sc, const std::filesystem::path& dir)
{
  using traffic::Protocol;
  std::vector<std::vector<RoleSpec>> stages;
  auto roles = dir / "roles";
  auto base = [&](const std::string& kind, const std::string& name) {
    RoleSpec r;
    r.kind = kind;
    r.process_name = name;
    r.result_path = (roles / (name + ".json")).string();
    return r;
  };
  auto stream_fields = [&](RoleSpec& r, const traffic::StreamProfile& p) {
    r.protocol = traffic::to_string(sc.protocol);
    r.stream = traffic::to_string(p.label);
    r.payload_bytes = p.payload_bytes;
    r.period_us = p.period.count();
    r.ndn_name = p.ndn_name.to_uri();
    r.mtu = sc.mtu;
    r.seed = sc.seed;
    r.pacing = traffic::to_string(sc.pacing);
    r.delay = traffic::to_string(sc.delay);
    r.max_samples = sc.max_samples;
    r.timeout_ms = sc.consumer_timeout_ms;
  };

  std::vector<RoleSpec> producers;
  std::vector<RoleSpec> consumers;
  if (traffic::is_ndn(sc.protocol)) {
    auto link = traffic::link_transport(sc.protocol);
    auto pc = base("forwarder", "forwarder-pc");
    pc.tcp_listen = pc.udp_listen = endpoint(sc.pc_host, sc.base_port);
    stages.push_back({pc});
    std::vector<RoleSpec> receivers;
    for (const auto& p : sc.streams) {
      auto idx = Scenario::receiver_index(p.label);
      auto prod = base("producer", "producer-" + std::string(traffic::to_string(p.label)));
      stream_fields(prod, p);
      prod.forwarder = endpoint(sc.pc_host, sc.base_port);
      producers.push_back(prod);

      auto cons = base("consumer", "consumer-" + std::string(traffic::to_string(p.label)));
      stream_fields(cons, p);
      cons.samples_path = (roles / (cons.process_name + ".samples.csv")).string();
      if (sc.topology == Topology::PerEcu) {
        auto rpi = base("forwarder", "forwarder-rpi" + std::to_string(idx + 1));
        auto port = static_cast<std::uint16_t>(sc.base_port + 1 + idx);
        rpi.tcp_listen = rpi.udp_listen = endpoint(sc.rpi_hosts[idx], port);
        rpi.routes.push_back(p.ndn_name.to_uri() + "=" + std::string(to_string(link)) + "://" +
                             endpoint(sc.pc_host, sc.base_port));
        receivers.push_back(rpi);
        cons.forwarder = endpoint(sc.rpi_hosts[idx], port);
        cons.face = "tcp";
      }
      else {
        cons.forwarder = endpoint(sc.pc_host, sc.base_port);
        cons.face = std::string(to_string(link));
      }
      consumers.push_back(cons);
    }
    if (!receivers.empty()) {
      stages.push_back(receivers);
    }
    stages.push_back(producers);
    stages.push_back(consumers);
  }
  else {
    for (const auto& p : sc.streams) {
      auto idx = Scenario::receiver_index(p.label);
      auto sub = endpoint(sc.rpi_hosts[idx], static_cast<std::uint16_t>(sc.base_port + 10 + idx));
      auto cons = base("consumer", "consumer-" + std::string(traffic::to_string(p.label)));
      stream_fields(cons, p);
      cons.subscriber = sub;
      cons.samples_path = (roles / (cons.process_name + ".samples.csv")).string();
      consumers.push_back(cons);
      auto prod = base("producer", "producer-" + std::string(traffic::to_string(p.label)));
      stream_fields(prod, p);
      prod.subscriber = sub;
      producers.push_back(prod);
    }
    stages.push_back(consumers);
    stages.push_back(producers);
  }
  return stages;
}

/// Endpoints the run will bind, for the port preflight.
inline std::vector<net::Endpoint> bound_endpoints(const std::vector<std::vector<RoleSpec>>& stages)
{
  std::vector<net::Endpoint> out;
  for (const auto& stage : stages) {
    for (const auto& r : stage) {
      if (r.kind == "forwarder") {
        out.push_back(net::Endpoint::parse(r.tcp_listen));
      }
      else if (r.kind == "consumer" && !r.subscriber.empty()) {
        out.push_back(net::Endpoint::parse(r.subscriber));
      }
    }
  }
  return out;
}

namespace detail {

inline void spawn(Child& c, const std::filesystem::path& exe, const std::filesystem::path& log_path)
{
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) {
    throw net::sys_error("pipe");
  }
  // the write end survives exec in the child at the same number
  c.spec.ready_fd = fds[1];
  auto args = c.spec.to_args();
  std::vector<std::string> argv_s = {exe.string()};
  argv_s.insert(argv_s.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_s) {
    argv.push_back(a.data());
  }
  argv.push_back(nullptr);
  std::string log = log_path.string();
  std::string exe_s = exe.string();

  pid_t pid = ::fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    throw net::sys_error("fork");
  }
  if (pid == 0) {
    ::prctl(PR_SET_PDEATHSIG, SIGTERM);
    ::fcntl(fds[1], F_SETFD, 0);
    int lf = ::open(log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (lf >= 0) {
      ::dup2(lf, STDOUT_FILENO);
      ::dup2(lf, STDERR_FILENO);
      ::close(lf);
    }
    ::execv(exe_s.c_str(), argv.data());
    ::_exit(127);
  }
  ::close(fds[1]);
  c.pid = pid;
  c.ready_fd = fds[0];
  c.running = true;
}

/// Waits for the child's readiness byte. False if it exited or timed out.
inline bool wait_ready(Child& c, int timeout_ms)
{
  pollfd p{c.ready_fd, POLLIN, 0};
  int rc = ::poll(&p, 1, timeout_ms);
  char b = 0;
  bool ok = rc > 0 && ::read(c.ready_fd, &b, 1) == 1 && b == 'R';
  ::close(c.ready_fd);
  c.ready_fd = -1;
  return ok;
}

/// Reaps `c` if it has exited. No resource row is taken here: a window of a
/// few milliseconds is below the tick resolution and would read as 0% or 500%.
inline bool poll_exit(Child& c)
{
  if (!c.running) {
    return true;
  }
  if (::waitpid(c.pid, &c.status, WNOHANG) != c.pid) {
    return false;
  }
  c.running = false;
  return true;
}

inline std::string timestamp()
{
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  ::localtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &tm);
  return buf;
}

inline nlohmann::json read_json(const std::filesystem::path& p)
{
  std::ifstream f(p);
  if (!f) {
    return nullptr;
  }
  auto j = nlohmann::json::parse(f, nullptr, false);
  return j.is_discarded() ? nlohmann::json(nullptr) : j;
}

} // namespace detail

inline std::filesystem::path default_run_dir(const Scenario& sc)
{
  return output_root() / (std::string(traffic::to_string(sc.protocol)) + "-s" + std::to_string(sc.seed) + "-" +
                          detail::timestamp());
}

/** Runs one scenario end to end: preflight, staged start, supervision,
 *  ordered stop (consumers, producers, forwarders), artifact collection and
 *  invariant checks. Never throws for runtime failures; they become the
 *  outcome's status and exit code. ConfigError propagates for bad input. */
inline RunOutcome run_scenario(const Scenario& sc, const OrchestratorOptions& opt = {})
{
  namespace fs = std::filesystem;
  sc.validate();
  RunOutcome out;
  out.dir = sc.output_dir.empty() ? default_run_dir(sc) : sc.output_dir;
  std::error_code ec;
  if (fs::is_directory(out.dir, ec) && !fs::is_empty(out.dir, ec)) {
    throw ConfigError("output directory " + out.dir.string() + " is not empty");
  }
  try {
    metrics::preflight_output_dir(out.dir);
    fs::create_directories(out.dir / "roles");
    fs::create_directories(out.dir / "logs");
  }
  catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  auto& log = *opt.log;
  auto exe = fs::canonical(opt.executable, ec); // readable argv[0] in ps
  if (ec) {
    exe = opt.executable;
  }
  auto stages = plan_processes(sc, out.dir);

  nlohmann::json manifest;
  manifest["protocol"] = traffic::to_string(sc.protocol);
  manifest["scenario"] = sc.to_json();
  manifest["started_unix"] = static_cast<std::int64_t>(std::time(nullptr));
  auto finish = [&](int code, const std::string& status) {
    out.exit_code = code;
    out.status = status;
    manifest["status"] = status;
    manifest["exit_code"] = code;
    manifest["violations"] = out.violations;
    manifest["finished_unix"] = static_cast<std::int64_t>(std::time(nullptr));
    std::ofstream(out.dir / "manifest.json") << manifest.dump(2) << '\n';
    out.manifest = manifest;
    return out;
  };

  for (const auto& ep : bound_endpoints(stages)) {
    if (!net::port_free(ep.host, ep.port)) {
      out.violations.push_back("port " + ep.to_string() + " is in use");
      manifest["abort_reason"] = "port conflict on " + ep.to_string();
      log << "run aborted: port " << ep.to_string() << " is in use\n";
      return finish(kExitAbort, "aborted");
    }
  }

  std::vector<Child> children;
  metrics::ResourceSampler sampler;
  std::vector<metrics::ResourceSample> resource_rows;
  std::string abort_reason;

  auto stop_group = [&](const std::string& kind) {
    for (auto& c : children) {
      if (c.spec.kind == kind && c.running) {
        ::kill(c.pid, SIGTERM);
        c.stopped_by_us = true;
      }
    }
    auto deadline = Clock::now() + std::chrono::milliseconds(opt.stop_timeout_ms);
    for (;;) {
      bool any = false;
      for (auto& c : children) {
        if (c.spec.kind == kind && !detail::poll_exit(c)) {
          any = true;
        }
      }
      if (!any) break;
      if (Clock::now() > deadline) {
        for (auto& c : children) {
          if (c.spec.kind == kind && c.running) {
            ::kill(c.pid, SIGKILL);
            ::waitpid(c.pid, &c.status, 0);
            c.running = false;
            out.violations.push_back(c.spec.process_name + " ignored SIGTERM and was killed");
          }
        }
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
  };
  auto stop_all = [&] {
    stop_group("consumer");
    stop_group("producer");
    stop_group("forwarder");
  };

  // staged start
  for (auto& stage : stages) {
    std::size_t first = children.size();
    for (auto& spec : stage) {
      Child c;
      c.spec = spec;
      try {
        detail::spawn(c, exe, out.dir / "logs" / (spec.process_name + ".log"));
      }
      catch (const std::exception& e) {
        abort_reason = std::string("spawn failed: ") + e.what();
        break;
      }
      sampler.add(c.pid, spec.process_name);
      children.push_back(std::move(c));
    }
    for (std::size_t i = first; abort_reason.empty() && i < children.size(); ++i) {
      if (!detail::wait_ready(children[i], opt.ready_timeout_ms)) {
        abort_reason = children[i].spec.process_name + " did not become ready (see logs/" +
                       children[i].spec.process_name + ".log)";
      }
    }
    if (!abort_reason.empty()) {
      break;
    }
  }
  log << "run " << out.dir.string() << ": " << children.size() << " processes started\n";

  // supervision
  bool interrupted = false;
  bool count_bound_reached = false;
  if (abort_reason.empty()) {
    auto start = Clock::now();
    auto end = start + std::chrono::microseconds(static_cast<std::int64_t>(sc.duration_s * 1e6));
    auto next_sample = start + std::chrono::milliseconds(sc.resource_interval_ms);
    while (Clock::now() < end) {
      if (opt.interrupt && opt.interrupt->load()) {
        interrupted = true;
        break;
      }
      bool consumers_left = false;
      for (auto& c : children) {
        if (detail::poll_exit(c)) {
          bool early_ok = sc.max_samples > 0 && c.clean_exit() &&
                          (c.spec.kind == "consumer" || (c.spec.kind == "producer" && !traffic::is_ndn(sc.protocol)));
          bool interrupting = opt.interrupt && opt.interrupt->load(); // ctrl-c reaches the children too
          if (!early_ok && abort_reason.empty() && !c.stopped_by_us && !interrupting) {
            abort_reason = c.spec.process_name + " exited during the run (" + c.describe_status() + ")";
          }
          c.stopped_by_us = true;
        }
        consumers_left = consumers_left || (c.spec.kind == "consumer" && c.running);
      }
      if (!abort_reason.empty()) {
        break;
      }
      if (sc.max_samples > 0 && !consumers_left) {
        count_bound_reached = true;
        break;
      }
      if (Clock::now() >= next_sample) {
        for (auto& r : sampler.sample()) {
          resource_rows.push_back(r);
        }
        next_sample += std::chrono::milliseconds(sc.resource_interval_ms);
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    manifest["elapsed_s"] = std::chrono::duration<double>(Clock::now() - start).count();
  }
  stop_all();
  for (auto& c : children) {
    if (c.ready_fd >= 0) {
      ::close(c.ready_fd);
    }
    if (abort_reason.empty() && !c.clean_exit()) {
      abort_reason = c.spec.process_name + " failed at shutdown (" + c.describe_status() + ")";
    }
  }

  // collect
  std::vector<std::string> artifacts;
  auto declare = [&](const fs::path& p) { artifacts.push_back(fs::relative(p, out.dir).string()); };
  nlohmann::json streams_j = nlohmann::json::object();
  nlohmann::json processes_j = nlohmann::json::array();
  std::vector<metrics::TrafficRow> traffic_rows;
  std::vector<metrics::LatencySample> all_samples;
  std::map<std::string, nlohmann::json> results;
  for (const auto& c : children) {
    auto j = detail::read_json(c.spec.result_path);
    processes_j.push_back({{"name", c.spec.process_name},
                           {"role", c.spec.kind},
                           {"pid", c.pid},
                           {"status", c.describe_status()},
                           {"argv", c.spec.to_args()}});
    if (j.is_null()) {
      continue;
    }
    declare(c.spec.result_path);
    results[c.spec.process_name] = j;
    if (c.spec.kind == "forwarder") {
      std::map<std::string, metrics::TrafficRow> per;
      for (const auto& f : j["faces"]) {
        auto t = f["transport"].get<std::string>();
        auto& row = per[t];
        row.process = c.spec.process_name;
        row.transport = t;
        row.packets += f["packets_sent"].get<std::uint64_t>();
        row.socket_bytes += f["socket_bytes"].get<std::uint64_t>();
        row.wire_bytes += f["wire_bytes"].get<std::uint64_t>();
      }
      for (auto& [t, row] : per) {
        traffic_rows.push_back(row);
      }
      continue;
    }
    const auto& s = j["sent"];
    traffic_rows.push_back({c.spec.process_name, s["transport"], s["packets"], s["socket_bytes"], s["wire_bytes"]});
    streams_j[c.spec.stream][c.spec.kind] = j;
    if (c.spec.kind == "consumer" && fs::exists(c.spec.samples_path)) {
      declare(c.spec.samples_path);
      auto samples = metrics::read_samples_csv(c.spec.samples_path);
      all_samples.insert(all_samples.end(), samples.begin(), samples.end());
    }
  }
  manifest["processes"] = processes_j;
  manifest["streams"] = streams_j;
  manifest["count_bound"] = sc.max_samples > 0;
  if (sc.max_samples > 0) {
    manifest["count_bound_reached"] = count_bound_reached;
  }

  metrics::write_samples_csv(out.dir / "samples.csv", all_samples);
  declare(out.dir / "samples.csv");
  metrics::write_resources_csv(out.dir / "resources.csv", resource_rows);
  declare(out.dir / "resources.csv");
  metrics::write_traffic_csv(out.dir / "traffic.csv", traffic_rows);
  declare(out.dir / "traffic.csv");

  // invariants
  auto& v = out.violations;
  std::map<std::string, std::vector<metrics::LatencySample>> by_stream;
  for (const auto& s : all_samples) {
    by_stream[s.stream].push_back(s);
  }
  for (const auto& p : sc.streams) {
    std::string label = traffic::to_string(p.label);
    auto& samples = by_stream[label];
    if (samples.size() < 2) {
      v.push_back(label + ": insufficient data (" + std::to_string(samples.size()) + " samples)");
    }
    else {
      auto row = metrics::summarize(samples);
      row.protocol = traffic::to_string(sc.protocol);
      if (!row.ordered()) {
        v.push_back(label + ": min <= mean <= max does not hold");
      }
      if (row.mean_ms < p.period_ms()) {
        v.push_back(label + ": mean inter-arrival " + metrics::format_double(row.mean_ms, 4) + " ms below period " +
                    metrics::format_double(p.period_ms(), 3) + " ms");
      }
      out.summaries.push_back(row);
    }
    if (!streams_j.contains(label) || !streams_j[label].contains("consumer")) {
      v.push_back(label + ": no consumer result");
      continue;
    }
    const auto& cons = streams_j[label]["consumer"];
    std::uint64_t want_packets =
      traffic::is_ndn(sc.protocol) ? 1 : pubsub::fragment_count(p.payload_bytes, sc.mtu);
    if (cons["samples"].get<std::uint64_t>() > 0 &&
        (cons["packets_per_sample_min"].get<std::uint64_t>() != want_packets ||
         cons["packets_per_sample_max"].get<std::uint64_t>() != want_packets)) {
      v.push_back(label + ": expected " + std::to_string(want_packets) + " network packet(s) per sample, saw " +
                  cons["packets_per_sample_min"].dump() + ".." + cons["packets_per_sample_max"].dump());
    }
    if (cons["length_mismatches"].get<std::uint64_t>() != 0) {
      v.push_back(label + ": " + cons["length_mismatches"].dump() + " payload length mismatches");
    }
    if (traffic::is_ndn(sc.protocol) &&
        cons["samples"].get<std::uint64_t>() !=
          cons["interests_sent"].get<std::uint64_t>() - cons["timeouts"].get<std::uint64_t>()) {
      v.push_back(label + ": samples != interests sent - timeouts");
    }
  }
  for (const auto& t : traffic_rows) {
    if (!t.consistent()) {
      v.push_back(t.process + ": wire bytes disagree with socket byte counters");
    }
  }
  if (sc.max_samples > 0 && !count_bound_reached && abort_reason.empty() && !interrupted) {
    v.push_back("max_samples not reached by every consumer within duration_s");
  }

  metrics::write_summary_csv(out.dir / "summary.csv", out.summaries);
  declare(out.dir / "summary.csv");
  if (!out.summaries.empty()) {
    metrics::RunData rd;
    rd.protocol = traffic::to_string(sc.protocol);
    rd.latency = out.summaries;
    rd.resources = metrics::summarize_resources(resource_rows);
    rd.traffic = traffic_rows;
    rd.samples = all_samples;
    for (const auto& f : metrics::write_report({rd}, out.dir)) {
      declare(f);
    }
  }
  manifest["artifacts"] = artifacts;
  for (const auto& a : artifacts) {
    auto p = out.dir / a;
    if (!fs::exists(p) || fs::file_size(p) == 0) {
      v.push_back("artifact " + a + " missing or empty");
    }
  }

  if (!abort_reason.empty()) {
    manifest["abort_reason"] = abort_reason;
    manifest["partial"] = true;
    log << "run aborted: " << abort_reason << "\n";
    return finish(kExitAbort, "aborted");
  }
  if (interrupted) {
    manifest["partial"] = true;
    return finish(kExitAbort, "interrupted");
  }
  for (const auto& msg : v) {
    log << "invariant violated: " << msg << "\n";
  }
  return finish(v.empty() ? kExitOk : kExitViolation, v.empty() ? "ok" : "violations");
}

} // namespace tnet::harness

#endif // TRAILERNET_HARNESS_ORCHESTRATOR_HPP
