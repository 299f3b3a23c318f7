#ifndef TRAILERNET_METRICS_RUN_DATA_HPP
#define TRAILERNET_METRICS_RUN_DATA_HPP

#include "csv.hpp"
#include "resources.hpp"
#include "../codec/wire.hpp"

#include <json.hpp>

namespace tnet::metrics {

/// Bytes one process put on the wire during a run.
struct TrafficRow
{
  std::string process;
  std::string transport; ///< "udp" or "tcp"
  std::uint64_t packets = 0;
  std::uint64_t socket_bytes = 0;
  std::uint64_t wire_bytes = 0;

  /// wire bytes must equal socket bytes plus per-packet link/IP/transport headers
  bool consistent() const
  {
    auto per = transport_overhead(transport == "tcp" ? Transport::Tcp : Transport::Udp);
    return wire_bytes == socket_bytes + packets * per;
  }
};

/// Everything a report needs from one run directory.
struct RunData
{
  std::string protocol;
  std::filesystem::path dir;
  std::vector<StreamSummary> latency;
  std::vector<ResourceSummary> resources;
  std::vector<TrafficRow> traffic;
  std::vector<LatencySample> samples;

  std::uint64_t total_wire_bytes() const
  {
    std::uint64_t n = 0;
    for (const auto& t : traffic) {
      n += t.wire_bytes;
    }
    return n;
  }
};

inline constexpr const char* kResourcesHeader = "pid,process,t_ns,cpu_percent,mem_percent,final";
inline constexpr const char* kTrafficHeader = "process,transport,packets,socket_bytes,wire_bytes";

inline void write_resources_csv(const std::filesystem::path& path, const std::vector<ResourceSample>& rows)
{
  std::ofstream f(path);
  if (!f) {
    throw OutputError("cannot write " + path.string());
  }
  f << kResourcesHeader << '\n';
  for (const auto& r : rows) {
    f << r.pid << ',' << r.name << ',' << r.t_ns << ',' << format_double(r.cpu_percent, 3) << ','
      << format_double(r.mem_percent, 4) << ',' << (r.final ? 1 : 0) << '\n';
  }
}

inline std::vector<ResourceSample> read_resources_csv(const std::filesystem::path& path)
{
  std::ifstream f(path);
  std::string line;
  if (!f || !std::getline(f, line) || line != kResourcesHeader) {
    throw CsvError("cannot read resource samples from " + path.string());
  }
  std::vector<ResourceSample> out;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    auto c = split_csv_line(line);
    if (c.size() != 6) {
      throw CsvError(path.string() + ":" + std::to_string(lineno) + ": expected 6 columns");
    }
    try {
      out.push_back({static_cast<pid_t>(std::stol(c[0])), c[1], std::stoll(c[2]), std::stod(c[3]), std::stod(c[4]),
                     c[5] == "1"});
    }
    catch (const std::exception&) {
      throw CsvError(path.string() + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return out;
}

inline void write_traffic_csv(const std::filesystem::path& path, const std::vector<TrafficRow>& rows)
{
  std::ofstream f(path);
  if (!f) {
    throw OutputError("cannot write " + path.string());
  }
  f << kTrafficHeader << '\n';
  for (const auto& r : rows) {
    f << r.process << ',' << r.transport << ',' << r.packets << ',' << r.socket_bytes << ',' << r.wire_bytes << '\n';
  }
}

inline std::vector<TrafficRow> read_traffic_csv(const std::filesystem::path& path)
{
  std::ifstream f(path);
  std::string line;
  if (!f || !std::getline(f, line) || line != kTrafficHeader) {
    throw CsvError("cannot read traffic counters from " + path.string());
  }
  std::vector<TrafficRow> out;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    auto c = split_csv_line(line);
    if (c.size() != 5) {
      throw CsvError(path.string() + ":" + std::to_string(lineno) + ": expected 5 columns");
    }
    try {
      out.push_back({c[0], c[1], std::stoull(c[2]), std::stoull(c[3]), std::stoull(c[4])});
    }
    catch (const std::exception&) {
      throw CsvError(path.string() + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return out;
}

/// Loads a finished run directory (manifest.json plus its CSV artifacts).
inline RunData load_run(const std::filesystem::path& dir)
{
  RunData run;
  run.dir = dir;
  std::ifstream mf(dir / "manifest.json");
  if (!mf) {
    throw CsvError("no manifest.json in " + dir.string());
  }
  auto manifest = nlohmann::json::parse(mf, nullptr, false);
  if (manifest.is_discarded() || !manifest.contains("protocol")) {
    throw CsvError("malformed manifest in " + dir.string());
  }
  run.protocol = manifest["protocol"].get<std::string>();
  if (std::filesystem::exists(dir / "summary.csv")) {
    run.latency = read_summary_csv(dir / "summary.csv");
  }
  if (std::filesystem::exists(dir / "resources.csv")) {
    run.resources = summarize_resources(read_resources_csv(dir / "resources.csv"));
  }
  if (std::filesystem::exists(dir / "traffic.csv")) {
    run.traffic = read_traffic_csv(dir / "traffic.csv");
  }
  if (std::filesystem::exists(dir / "samples.csv")) {
    run.samples = read_samples_csv(dir / "samples.csv");
  }
  return run;
}

} // namespace tnet::metrics

#endif // TRAILERNET_METRICS_RUN_DATA_HPP
