#ifndef TRAILERNET_HARNESS_SCENARIO_HPP
#define TRAILERNET_HARNESS_SCENARIO_HPP

#include "../traffic/pacing.hpp"
#include "../traffic/profile.hpp"
#include "../traffic/protocol.hpp"
#include "../pubsub/fragmenter.hpp"
#include "../codec/data.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace tnet::harness {

class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class Topology
{
  PerEcu, ///< forwarder on the transmitter and on every receiver
  Shared, ///< one forwarder on the transmitter only
};

inline const char* to_string(Topology t)
{
  return t == Topology::PerEcu ? "per-ecu" : "shared";
}

inline constexpr const char* kOutputEnv = "TRAILERNET_OUT";

/// Root for run directories: $TRAILERNET_OUT, else ./runs.
inline std::filesystem::path output_root()
{
  const char* env = std::getenv(kOutputEnv);
  return env && *env ? std::filesystem::path(env) : std::filesystem::path("runs");
}

struct Scenario
{
  traffic::Protocol protocol = traffic::Protocol::NdnTcp;
  double duration_s = 30;
  std::uint64_t seed = 1;
  std::uint64_t max_samples = 0; ///< > 0: count-bounded run, duration becomes a timeout
  Topology topology = Topology::PerEcu;
  traffic::PacingMode pacing = traffic::PacingMode::Anchored;
  traffic::DelayPlacement delay = traffic::DelayPlacement::Consumer;
  std::size_t mtu = pubsub::kDefaultMtu;
  std::uint16_t base_port = 46360;
  std::string pc_host = "127.0.0.1";
  std::array<std::string, 3> rpi_hosts = {"127.0.0.1", "127.0.0.1", "127.0.0.1"};
  std::vector<traffic::StreamProfile> streams = {traffic::default_profile(traffic::StreamLabel::Lidar),
                                                 traffic::default_profile(traffic::StreamLabel::Can),
                                                 traffic::default_profile(traffic::StreamLabel::Cam)};
  int resource_interval_ms = 500;
  int consumer_timeout_ms = 1000;
  std::filesystem::path output_dir; ///< empty: derived from output_root()

  /// RPi index (0..2) that receives a stream.
  static std::size_t receiver_index(traffic::StreamLabel l) { return static_cast<std::size_t>(l); }

  traffic::StreamProfile* find_stream(traffic::StreamLabel l)
  {
    for (auto& s : streams) {
      if (s.label == l) return &s;
    }
    return nullptr;
  }

  void validate() const
  {
    if (!(duration_s > 0)) {
      throw ConfigError("duration_s must be > 0");
    }
    if (streams.empty()) {
      throw ConfigError("no streams selected");
    }
    for (const auto& s : streams) {
      if (s.payload_bytes == 0) {
        throw ConfigError(std::string(traffic::to_string(s.label)) + ".payload_bytes must be > 0");
      }
      if (s.period.count() <= 0) {
        throw ConfigError(std::string(traffic::to_string(s.label)) + ".period_ms must be > 0");
      }
      if (traffic::is_ndn(protocol) && s.payload_bytes > kMaxContentSize) {
        throw ConfigError(std::string(traffic::to_string(s.label)) + ".payload_bytes exceeds the " +
                          std::to_string(kMaxContentSize) + "-byte Data content limit");
      }
    }
    if (mtu < pubsub::kMinMtu || mtu > 65507) {
      throw ConfigError("mtu must be within " + std::to_string(pubsub::kMinMtu) + "..65507");
    }
    if (base_port < 1024 || base_port > 65535 - 16) {
      throw ConfigError("base_port must be within 1024..65519");
    }
    if (resource_interval_ms < 50) {
      throw ConfigError("resource_interval_ms must be >= 50");
    }
    if (consumer_timeout_ms < 10) {
      throw ConfigError("consumer_timeout_ms must be >= 10");
    }
  }

  nlohmann::json to_json() const
  {
    nlohmann::json j;
    j["protocol"] = traffic::to_string(protocol);
    j["duration_s"] = duration_s;
    j["seed"] = seed;
    j["max_samples"] = max_samples;
    j["topology"] = to_string(topology);
    j["pacing"] = traffic::to_string(pacing);
    j["delay"] = traffic::is_ndn(protocol) ? traffic::to_string(delay) : "producer";
    j["mtu"] = mtu;
    j["base_port"] = base_port;
    j["pc_host"] = pc_host;
    j["rpi_hosts"] = rpi_hosts;
    j["resource_interval_ms"] = resource_interval_ms;
    j["consumer_timeout_ms"] = consumer_timeout_ms;
    auto streams_j = nlohmann::json::array();
    for (const auto& s : streams) {
      streams_j.push_back({{"label", traffic::to_string(s.label)},
                           {"name", s.ndn_name.to_uri()},
                           {"topic", s.topic.id},
                           {"payload_bytes", s.payload_bytes},
                           {"period_ms", s.period_ms()},
                           {"consumer", s.consumer_id}});
    }
    j["streams"] = streams_j;
    return j;
  }
};

namespace detail {

inline std::string trim(std::string s)
{
  auto a = s.find_first_not_of(" \t\r");
  auto b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

template<typename T>
T parse_integer(const std::string& key, const std::string& v, T lo, T hi)
{
  try {
    std::size_t used = 0;
    long long n = std::stoll(v, &used);
    if (used != v.size() || n < static_cast<long long>(lo) || n > static_cast<long long>(hi)) {
      throw std::out_of_range(key);
    }
    return static_cast<T>(n);
  }
  catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer in " + std::to_string(lo) + ".." + std::to_string(hi) +
                      ", got '" + v + "'");
  }
}

inline double parse_real(const std::string& key, const std::string& v)
{
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) {
      throw std::invalid_argument(key);
    }
    return d;
  }
  catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

} // namespace detail

/** Applies one key=value setting. Unknown keys are errors so typos don't
 *  silently fall back to defaults. */
inline void apply_setting(Scenario& s, const std::string& raw_key, const std::string& raw_value)
{
  using namespace traffic;
  auto key = detail::trim(raw_key);
  auto v = detail::trim(raw_value);
  try {
    if (key == "protocol") s.protocol = parse_protocol(v);
    else if (key == "duration_s") s.duration_s = detail::parse_real(key, v);
    else if (key == "seed") s.seed = detail::parse_integer<std::uint64_t>(key, v, 0, INT64_MAX);
    else if (key == "max_samples") s.max_samples = detail::parse_integer<std::uint64_t>(key, v, 0, INT64_MAX);
    else if (key == "topology") {
      if (v == "per-ecu") s.topology = Topology::PerEcu;
      else if (v == "shared") s.topology = Topology::Shared;
      else throw ConfigError("topology: expected per-ecu or shared, got '" + v + "'");
    }
    else if (key == "pacing") s.pacing = parse_pacing(v);
    else if (key == "delay") s.delay = parse_placement(v);
    else if (key == "mtu") s.mtu = detail::parse_integer<std::size_t>(key, v, 0, 65535);
    else if (key == "base_port") s.base_port = detail::parse_integer<std::uint16_t>(key, v, 0, 65535);
    else if (key == "pc_host") s.pc_host = v;
    else if (key == "rpi1_host") s.rpi_hosts[0] = v;
    else if (key == "rpi2_host") s.rpi_hosts[1] = v;
    else if (key == "rpi3_host") s.rpi_hosts[2] = v;
    else if (key == "host") {
      s.pc_host = v;
      s.rpi_hosts = {v, v, v};
    }
    else if (key == "resource_interval_ms") s.resource_interval_ms = detail::parse_integer<int>(key, v, 0, 3600000);
    else if (key == "consumer_timeout_ms") s.consumer_timeout_ms = detail::parse_integer<int>(key, v, 0, 3600000);
    else if (key == "output_dir") s.output_dir = v;
    else if (key == "streams") {
      std::vector<StreamProfile> picked;
      std::stringstream ss(v);
      std::string item;
      while (std::getline(ss, item, ',')) {
        auto label = parse_label(detail::trim(item));
        auto* existing = s.find_stream(label);
        picked.push_back(existing ? *existing : default_profile(label));
      }
      s.streams = picked;
    }
    else if (auto dot = key.find('.'); dot != std::string::npos) {
      auto label = parse_label(key.substr(0, dot));
      auto field = key.substr(dot + 1);
      auto* p = s.find_stream(label);
      if (!p) {
        throw ConfigError(key + ": stream not selected");
      }
      if (field == "payload_bytes") p->payload_bytes = detail::parse_integer<std::size_t>(key, v, 1, 1 << 24);
      else if (field == "period_ms") {
        double ms = detail::parse_real(key, v);
        if (!(ms > 0)) throw ConfigError(key + " must be > 0");
        p->period = std::chrono::microseconds(static_cast<std::int64_t>(ms * 1000.0 + 0.5));
      }
      else if (field == "name") p->ndn_name = Name::parse(v);
      else throw ConfigError("unknown stream setting '" + key + "'");
    }
    else {
      throw ConfigError("unknown setting '" + key + "'");
    }
  }
  catch (const ConfigError&) {
    throw;
  }
  catch (const std::exception& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

/// Applies "key=value" lines; '#' starts a comment.
inline void apply_text(Scenario& s, std::istream& in, const std::string& origin = "config")
{
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    if (detail::trim(line).empty()) {
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    }
    try {
      apply_setting(s, line.substr(0, eq), line.substr(eq + 1));
    }
    catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

inline Scenario load_scenario(const std::filesystem::path& path)
{
  std::ifstream f(path);
  if (!f) {
    throw ConfigError("cannot read scenario " + path.string());
  }
  Scenario s;
  apply_text(s, f, path.string());
  return s;
}

/// Applies a "key=value" override from the command line.
inline void apply_override(Scenario& s, const std::string& kv)
{
  auto eq = kv.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override '" + kv + "' is not key=value");
  }
  apply_setting(s, kv.substr(0, eq), kv.substr(eq + 1));
}

} // namespace tnet::harness

#endif // TRAILERNET_HARNESS_SCENARIO_HPP
