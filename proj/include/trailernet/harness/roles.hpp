#ifndef TRAILERNET_HARNESS_ROLES_HPP
#define TRAILERNET_HARNESS_ROLES_HPP

// Child-process entry points. The orchestrator starts each simulated ECU
// process as "<exe> role <kind> ..." and these functions run inside it.

#include "exit_codes.hpp"
#include "../forwarder/daemon.hpp"
#include "../metrics/csv.hpp"
#include "../traffic/consumer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <csignal>
#include <unistd.h>

namespace tnet::harness {

inline std::atomic<bool>& role_stop_flag()
{
  static std::atomic<bool> flag{false};
  return flag;
}

inline void install_stop_handlers()
{
  role_stop_flag(); // initialize before any handler can run
  struct sigaction sa{};
  sa.sa_handler = [](int) { role_stop_flag().store(true); };
  sigemptyset(&sa.sa_mask);
  ::sigaction(SIGTERM, &sa, nullptr);
  ::sigaction(SIGINT, &sa, nullptr);
  std::signal(SIGPIPE, SIG_IGN);
}

struct RoleSpec
{
  std::string kind; ///< forwarder | producer | consumer
  std::string process_name;
  std::string result_path;
  int ready_fd = -1;

  // forwarder
  std::string tcp_listen;
  std::string udp_listen;
  std::vector<std::string> routes;

  // producer / consumer
  std::string protocol = "ndn-tcp";
  std::string stream = "can";
  std::size_t payload_bytes = 0;
  std::int64_t period_us = 0;
  std::string ndn_name;
  std::string forwarder;         ///< ndn: attached forwarder (TCP unless face says otherwise)
  std::string face = "tcp";      ///< ndn consumer: transport to its forwarder
  std::string subscriber;        ///< pubsub producer destination / consumer bind
  std::size_t mtu = pubsub::kDefaultMtu;
  std::uint64_t seed = 1;
  std::string pacing = "anchored";
  std::string delay = "consumer";
  std::uint64_t max_samples = 0;
  int timeout_ms = 1000;
  std::string samples_path;

  std::vector<std::string> to_args() const
  {
    std::vector<std::string> a = {"role", kind, "--process-name", process_name, "--result", result_path};
    if (ready_fd >= 0) {
      a.insert(a.end(), {"--ready-fd", std::to_string(ready_fd)});
    }
    if (kind == "forwarder") {
      a.insert(a.end(), {"--tcp", tcp_listen, "--udp", udp_listen});
      for (const auto& r : routes) {
        a.insert(a.end(), {"--route", r});
      }
      return a;
    }
    a.insert(a.end(), {"--protocol", protocol, "--stream", stream, "--payload-bytes", std::to_string(payload_bytes),
                       "--period-us", std::to_string(period_us), "--ndn-name", ndn_name, "--mtu", std::to_string(mtu),
                       "--seed", std::to_string(seed), "--pacing", pacing, "--delay", delay, "--max-samples",
                       std::to_string(max_samples), "--timeout-ms", std::to_string(timeout_ms), "--face", face});
    if (!forwarder.empty()) {
      a.insert(a.end(), {"--forwarder", forwarder});
    }
    if (!subscriber.empty()) {
      a.insert(a.end(), {"--subscriber", subscriber});
    }
    if (!samples_path.empty()) {
      a.insert(a.end(), {"--samples", samples_path});
    }
    return a;
  }

  traffic::StreamProfile profile() const
  {
    auto p = traffic::default_profile(traffic::parse_label(stream));
    if (payload_bytes) p.payload_bytes = payload_bytes;
    if (period_us) p.period = std::chrono::microseconds(period_us);
    if (!ndn_name.empty()) p.ndn_name = Name::parse(ndn_name);
    return p;
  }
};

/// Adds the hidden "role" subcommand tree to `app`, parsing into `spec`.
inline CLI::App* add_role_commands(CLI::App& app, RoleSpec& spec)
{
  auto* role = app.add_subcommand("role", "internal: run one simulated ECU process");
  role->group(""); // hidden from --help
  role->require_subcommand(1);
  for (const char* kind : {"forwarder", "producer", "consumer"}) {
    auto* sub = role->add_subcommand(kind);
    sub->callback([&spec, kind] { spec.kind = kind; });
    sub->add_option("--process-name", spec.process_name)->required();
    sub->add_option("--result", spec.result_path)->required();
    sub->add_option("--ready-fd", spec.ready_fd);
    if (std::string(kind) == "forwarder") {
      sub->add_option("--tcp", spec.tcp_listen)->required();
      sub->add_option("--udp", spec.udp_listen)->required();
      sub->add_option("--route", spec.routes);
      continue;
    }
    sub->add_option("--protocol", spec.protocol);
    sub->add_option("--stream", spec.stream);
    sub->add_option("--payload-bytes", spec.payload_bytes);
    sub->add_option("--period-us", spec.period_us);
    sub->add_option("--ndn-name", spec.ndn_name);
    sub->add_option("--forwarder", spec.forwarder);
    sub->add_option("--face", spec.face);
    sub->add_option("--subscriber", spec.subscriber);
    sub->add_option("--mtu", spec.mtu);
    sub->add_option("--seed", spec.seed);
    sub->add_option("--pacing", spec.pacing);
    sub->add_option("--delay", spec.delay);
    sub->add_option("--max-samples", spec.max_samples);
    sub->add_option("--timeout-ms", spec.timeout_ms);
    sub->add_option("--samples", spec.samples_path);
  }
  return role;
}

namespace detail {

inline void signal_ready(int fd)
{
  if (fd >= 0) {
    char c = 'R';
    [[maybe_unused]] auto n = ::write(fd, &c, 1);
    ::close(fd);
  }
}

inline void write_json(const std::string& path, const nlohmann::json& j)
{
  std::ofstream f(path);
  f << j.dump(2) << '\n';
  if (!f) {
    throw std::runtime_error("cannot write " + path);
  }
}

inline nlohmann::json counters_json(const net::SendCounters& c, Transport t)
{
  return {{"transport", std::string(to_string(t))},
          {"packets", c.packets},
          {"socket_bytes", c.socket_bytes},
          {"wire_bytes", c.wire_bytes}};
}

} // namespace detail

inline int run_forwarder_role(const RoleSpec& spec)
{
  fwd::DaemonOptions o;
  o.tcp_listen = net::Endpoint::parse(spec.tcp_listen);
  o.udp_listen = net::Endpoint::parse(spec.udp_listen);
  for (const auto& r : spec.routes) {
    o.routes.push_back(fwd::RouteSpec::parse(r));
  }
  fwd::Daemon daemon(std::move(o));
  daemon.connect_routes();
  detail::signal_ready(spec.ready_fd);
  daemon.run(role_stop_flag());
  auto j = daemon.stats();
  j["process"] = spec.process_name;
  j["role"] = "forwarder";
  detail::write_json(spec.result_path, j);
  return kExitOk;
}

inline int run_producer_role(const RoleSpec& spec)
{
  auto protocol = traffic::parse_protocol(spec.protocol);
  auto profile = spec.profile();
  traffic::ProducerStats stats;
  Transport transport = Transport::Tcp;
  if (traffic::is_ndn(protocol)) {
    traffic::NdnProducerConfig cfg{profile, net::Endpoint::parse(spec.forwarder), spec.seed,
                                   traffic::parse_placement(spec.delay), traffic::parse_pacing(spec.pacing)};
    stats = traffic::run_ndn_producer(cfg, role_stop_flag(), [&] { detail::signal_ready(spec.ready_fd); });
  }
  else {
    transport = Transport::Udp;
    traffic::PubSubProducerConfig cfg{profile, net::Endpoint::parse(spec.subscriber), spec.mtu, spec.seed,
                                      traffic::parse_pacing(spec.pacing), spec.max_samples};
    detail::signal_ready(spec.ready_fd);
    stats = traffic::run_pubsub_producer(cfg, role_stop_flag());
  }
  nlohmann::json j = {{"process", spec.process_name},
                      {"role", "producer"},
                      {"stream", stats.stream},
                      {"samples", stats.samples},
                      {"interests_received", stats.interests_received},
                      {"acks_received", stats.acks_received},
                      {"packets_per_sample_min", stats.fragments_min},
                      {"packets_per_sample_max", stats.fragments_max},
                      {"payload_digest", stats.payload_digest},
                      {"sent", detail::counters_json(stats.sent, transport)}};
  detail::write_json(spec.result_path, j);
  return kExitOk;
}

inline int run_consumer_role(const RoleSpec& spec)
{
  auto protocol = traffic::parse_protocol(spec.protocol);
  auto profile = spec.profile();
  traffic::ConsumerResult r;
  Transport transport = Transport::Udp;
  if (traffic::is_ndn(protocol)) {
    transport = spec.face == "udp" ? Transport::Udp : Transport::Tcp;
    traffic::NdnConsumerConfig cfg{profile, protocol, net::Endpoint::parse(spec.forwarder), transport,
                                   traffic::parse_placement(spec.delay), traffic::parse_pacing(spec.pacing),
                                   std::chrono::milliseconds(spec.timeout_ms), spec.max_samples};
    detail::signal_ready(spec.ready_fd);
    r = traffic::run_ndn_consumer(cfg, role_stop_flag());
  }
  else {
    traffic::PubSubConsumerConfig cfg{profile, net::Endpoint::parse(spec.subscriber), spec.max_samples};
    r = traffic::run_pubsub_consumer(cfg, role_stop_flag(), [&] { detail::signal_ready(spec.ready_fd); });
  }
  const auto& s = r.stats;
  if (!spec.samples_path.empty()) {
    auto samples = traffic::latency_samples(r);
    metrics::write_samples_csv(spec.samples_path, samples);
  }
  nlohmann::json j = {{"process", spec.process_name},
                      {"role", "consumer"},
                      {"stream", s.stream},
                      {"samples", s.samples},
                      {"interests_sent", s.interests_sent},
                      {"timeouts", s.timeouts},
                      {"length_mismatches", s.length_mismatches},
                      {"acks_sent", s.acks_sent},
                      {"packets_per_sample_min", s.packets_min},
                      {"packets_per_sample_max", s.packets_max},
                      {"received_wire_bytes", s.received_wire_bytes},
                      {"upstream_closed", s.upstream_closed},
                      {"payload_digest", s.payload_digest},
                      {"sent", detail::counters_json(s.sent, transport)}};
  detail::write_json(spec.result_path, j);
  return kExitOk;
}

/// Runs the role selected on the command line; errors go to stderr.
inline int run_role(const RoleSpec& spec)
{
  install_stop_handlers();
  try {
    if (spec.kind == "forwarder") return run_forwarder_role(spec);
    if (spec.kind == "producer") return run_producer_role(spec);
    if (spec.kind == "consumer") return run_consumer_role(spec);
    std::cerr << "unknown role " << spec.kind << "\n";
    return kExitConfig;
  }
  catch (const std::exception& e) {
    std::cerr << spec.process_name << ": " << e.what() << "\n";
    return kExitAbort;
  }
}

} // namespace tnet::harness

#endif // TRAILERNET_HARNESS_ROLES_HPP
