#ifndef TRAILERNET_METRICS_RESOURCES_HPP
#define TRAILERNET_METRICS_RESOURCES_HPP

#include "../clock.hpp"

#include <unistd.h>

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <sys/types.h>
#include <vector>

namespace tnet::metrics {

struct ProcStat
{
  char state = '?';
  std::uint64_t cpu_ticks = 0; ///< utime + stime
  std::uint64_t rss_pages = 0;
};

/// Parses /proc/<pid>/stat. nullopt once the process has been reaped.
inline std::optional<ProcStat> read_proc_stat(pid_t pid)
{
  std::ifstream f("/proc/" + std::to_string(pid) + "/stat");
  std::string line;
  if (!f || !std::getline(f, line)) {
    return std::nullopt;
  }
  // comm may contain spaces; fields resume after the last ')'
  auto close = line.rfind(')');
  if (close == std::string::npos) {
    return std::nullopt;
  }
  std::istringstream in(line.substr(close + 2));
  std::vector<std::string> fields;
  std::string tok;
  while (in >> tok) {
    fields.push_back(tok);
  }
  // fields[0] is field 3 (state); utime=14, stime=15, rss=24
  if (fields.size() < 22) {
    return std::nullopt;
  }
  ProcStat s;
  s.state = fields[0][0];
  s.cpu_ticks = std::stoull(fields[11]) + std::stoull(fields[12]);
  s.rss_pages = std::stoull(fields[21]);
  return s;
}

inline std::uint64_t mem_total_bytes()
{
  std::ifstream f("/proc/meminfo");
  std::string key;
  std::uint64_t kb = 0;
  std::string unit;
  while (f >> key >> kb >> unit) {
    if (key == "MemTotal:") {
      return kb * 1024;
    }
  }
  return 0;
}

struct ResourceSample
{
  pid_t pid = 0;
  std::string name;
  std::int64_t t_ns = 0;
  double cpu_percent = 0; ///< of one core; may exceed 100 for multi-threaded processes
  double mem_percent = 0;
  bool final = false;     ///< last sample before the process went away
};

/** Periodic CPU/memory sampler over a set of processes. Each call to
 *  sample() emits one row per live process covering the interval since the
 *  previous call. A process that exited yields one final row (while still a
 *  zombie) or none (if already reaped), and is then dropped. */
class ResourceSampler
{
public:
  ResourceSampler()
    : ticks_per_sec_(static_cast<double>(::sysconf(_SC_CLK_TCK)))
    , page_size_(static_cast<double>(::sysconf(_SC_PAGESIZE)))
    , mem_total_(static_cast<double>(mem_total_bytes()))
  {}

  void add(pid_t pid, std::string name)
  {
    Tracked t;
    t.name = std::move(name);
    t.last_t = monotonic_ns();
    if (auto s = read_proc_stat(pid)) {
      t.last_ticks = s->cpu_ticks;
    }
    tracked_[pid] = std::move(t);
  }

  bool empty() const { return tracked_.empty(); }

  std::vector<ResourceSample> sample()
  {
    std::vector<ResourceSample> out;
    std::int64_t now = monotonic_ns();
    for (auto it = tracked_.begin(); it != tracked_.end();) {
      auto& t = it->second;
      auto s = read_proc_stat(it->first);
      if (!s) {
        it = tracked_.erase(it);
        continue;
      }
      double wall = static_cast<double>(now - t.last_t) / 1e9;
      ResourceSample r;
      r.pid = it->first;
      r.name = t.name;
      r.t_ns = now;
      if (wall > 0) {
        double cpu_s = static_cast<double>(s->cpu_ticks - std::min(s->cpu_ticks, t.last_ticks)) / ticks_per_sec_;
        r.cpu_percent = 100.0 * cpu_s / wall;
      }
      r.mem_percent = mem_total_ > 0 ? 100.0 * static_cast<double>(s->rss_pages) * page_size_ / mem_total_ : 0.0;
      r.final = s->state == 'Z' || s->state == 'X';
      t.last_t = now;
      t.last_ticks = s->cpu_ticks;
      out.push_back(r);
      if (r.final) {
        it = tracked_.erase(it);
      }
      else {
        ++it;
      }
    }
    return out;
  }

private:
  struct Tracked
  {
    std::string name;
    std::int64_t last_t = 0;
    std::uint64_t last_ticks = 0;
  };

  double ticks_per_sec_;
  double page_size_;
  double mem_total_;
  std::map<pid_t, Tracked> tracked_;
};

struct ResourceSummary
{
  std::string name;
  std::uint64_t samples = 0;
  double mean_cpu_percent = 0;
  double max_cpu_percent = 0;
  double mean_mem_percent = 0;

  bool multi_core() const { return max_cpu_percent > 100.0; }
};

/// Per-process means, in first-seen order.
inline std::vector<ResourceSummary> summarize_resources(const std::vector<ResourceSample>& samples)
{
  std::vector<ResourceSummary> out;
  std::map<std::string, std::size_t> index;
  for (const auto& s : samples) {
    auto [it, fresh] = index.try_emplace(s.name, out.size());
    if (fresh) {
      out.push_back(ResourceSummary{s.name});
    }
    auto& r = out[it->second];
    ++r.samples;
    r.mean_cpu_percent += s.cpu_percent;
    r.mean_mem_percent += s.mem_percent;
    r.max_cpu_percent = std::max(r.max_cpu_percent, s.cpu_percent);
  }
  for (auto& r : out) {
    r.mean_cpu_percent /= static_cast<double>(r.samples);
    r.mean_mem_percent /= static_cast<double>(r.samples);
  }
  return out;
}

} // namespace tnet::metrics

#endif // TRAILERNET_METRICS_RESOURCES_HPP
