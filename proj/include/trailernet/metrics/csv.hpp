#ifndef TRAILERNET_METRICS_CSV_HPP
#define TRAILERNET_METRICS_CSV_HPP

#include "stats.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace tnet::metrics {

class CsvError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class OutputError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Creates `dir` if needed and proves a file can be written there.
inline void preflight_output_dir(const std::filesystem::path& dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw OutputError("cannot create output directory " + dir.string() + ": " + ec.message());
  }
  auto probe = dir / ".write-probe";
  {
    std::ofstream f(probe);
    if (!(f << "ok")) {
      throw OutputError("output directory " + dir.string() + " is not writable");
    }
  }
  std::filesystem::remove(probe, ec);
}

inline std::vector<std::string> split_csv_line(const std::string& line)
{
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') {
    out.emplace_back();
  }
  return out;
}

inline std::string format_double(double v, int precision = 6)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

inline constexpr const char* kSamplesHeader = "stream,seq,receipt_ns,inter_arrival_ms";
inline constexpr const char* kSummaryHeader = "stream,protocol,packets_count,mean_ms,min_ms,max_ms";

inline void write_samples_csv(const std::filesystem::path& path, std::span<const LatencySample> samples)
{
  std::ofstream f(path);
  if (!f) {
    throw OutputError("cannot write " + path.string());
  }
  f << kSamplesHeader << '\n';
  for (const auto& s : samples) {
    f << s.stream << ',' << s.seq << ',' << s.receipt_ns << ',';
    if (s.inter_arrival_ms) {
      f << format_double(*s.inter_arrival_ms);
    }
    f << '\n';
  }
  if (!f) {
    throw OutputError("write failed: " + path.string());
  }
}

/** Reads samples back. Deltas are recomputed from the integer timestamps so
 *  the reloaded samples equal the written ones exactly; a printed delta that
 *  disagrees with its timestamps is reported as corruption. */
inline std::vector<LatencySample> read_samples_csv(const std::filesystem::path& path)
{
  std::ifstream f(path);
  if (!f) {
    throw CsvError("cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(f, line) || line != kSamplesHeader) {
    throw CsvError(path.string() + ":1: expected header '" + std::string(kSamplesHeader) + "'");
  }
  std::vector<LatencySample> out;
  std::map<std::string, std::int64_t> last;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    auto cells = split_csv_line(line);
    auto where = path.string() + ":" + std::to_string(lineno) + ": ";
    if (cells.size() != 4) {
      throw CsvError(where + "expected 4 columns");
    }
    LatencySample s;
    s.stream = cells[0];
    try {
      std::size_t used = 0;
      s.seq = std::stoull(cells[1], &used);
      if (used != cells[1].size()) throw std::invalid_argument("seq");
      s.receipt_ns = std::stoll(cells[2], &used);
      if (used != cells[2].size()) throw std::invalid_argument("receipt_ns");
    }
    catch (const std::exception&) {
      throw CsvError(where + "malformed number");
    }
    auto prev = last.find(s.stream);
    if (prev != last.end()) {
      s.inter_arrival_ms = delta_ms(prev->second, s.receipt_ns);
      double printed = 0;
      try {
        printed = std::stod(cells[3]);
      }
      catch (const std::exception&) {
        throw CsvError(where + "missing inter_arrival_ms");
      }
      if (std::abs(printed - *s.inter_arrival_ms) > 1e-5) {
        throw CsvError(where + "inter_arrival_ms disagrees with timestamps");
      }
    }
    else if (!cells[3].empty()) {
      throw CsvError(where + "first sample of a stream has no inter-arrival delta");
    }
    last[s.stream] = s.receipt_ns;
    out.push_back(std::move(s));
  }
  return out;
}

inline void write_summary_csv(const std::filesystem::path& path, std::span<const StreamSummary> rows)
{
  std::ofstream f(path);
  if (!f) {
    throw OutputError("cannot write " + path.string());
  }
  f << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    f << r.stream << ',' << r.protocol << ',' << r.packets_count << ',' << format_double(r.mean_ms) << ','
      << format_double(r.min_ms) << ',' << format_double(r.max_ms) << '\n';
  }
}

inline std::vector<StreamSummary> read_summary_csv(const std::filesystem::path& path)
{
  std::ifstream f(path);
  if (!f) {
    throw CsvError("cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(f, line) || line != kSummaryHeader) {
    throw CsvError(path.string() + ":1: expected header '" + std::string(kSummaryHeader) + "'");
  }
  std::vector<StreamSummary> out;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    auto cells = split_csv_line(line);
    if (cells.size() != 6) {
      throw CsvError(path.string() + ":" + std::to_string(lineno) + ": expected 6 columns");
    }
    try {
      out.push_back({cells[0], cells[1], std::stoull(cells[2]), std::stod(cells[3]), std::stod(cells[4]),
                     std::stod(cells[5])});
    }
    catch (const std::exception&) {
      throw CsvError(path.string() + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return out;
}

/// Groups samples per stream, keeping file order, and summarizes each.
inline std::vector<StreamSummary> summarize_by_stream(std::span<const LatencySample> samples,
                                                      const std::string& protocol)
{
  std::vector<std::string> order;
  std::map<std::string, std::vector<LatencySample>> groups;
  for (const auto& s : samples) {
    auto [it, fresh] = groups.try_emplace(s.stream);
    if (fresh) {
      order.push_back(s.stream);
    }
    it->second.push_back(s);
  }
  std::vector<StreamSummary> out;
  for (const auto& name : order) {
    auto row = summarize(groups[name]);
    row.protocol = protocol;
    out.push_back(row);
  }
  return out;
}

} // namespace tnet::metrics

#endif // TRAILERNET_METRICS_CSV_HPP
