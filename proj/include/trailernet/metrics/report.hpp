#ifndef TRAILERNET_METRICS_REPORT_HPP
#define TRAILERNET_METRICS_REPORT_HPP

#include "bytes.hpp"
#include "run_data.hpp"
#include "svg.hpp"

namespace tnet::metrics {

inline constexpr std::array<std::string_view, 3> kProtocolOrder = {"ndn-tcp", "ndn-udp", "pubsub"};
inline constexpr std::array<std::string_view, 3> kStreamOrder = {"lidar", "can", "cam"};

namespace detail {

inline std::string pad(const std::string& s, std::size_t w, bool left = false)
{
  if (s.size() >= w) {
    return s;
  }
  return left ? s + std::string(w - s.size(), ' ') : std::string(w - s.size(), ' ') + s;
}

inline const StreamSummary* find_row(const RunData& run, std::string_view stream)
{
  for (const auto& r : run.latency) {
    if (r.stream == stream) {
      return &r;
    }
  }
  return nullptr;
}

inline const reference::LatencyRow* find_reference(std::string_view stream, std::string_view protocol)
{
  for (const auto& r : reference::kLatency) {
    if (r.stream == stream && r.protocol == protocol) {
      return &r;
    }
  }
  return nullptr;
}

/// Reference CPU row name for a local process name ("producer-lidar" -> "lidar").
inline std::string reference_process(const std::string& process)
{
  if (process.rfind("producer-", 0) == 0) {
    return process.substr(9);
  }
  if (process == "forwarder-pc" || process == "forwarder") {
    return "forwarder";
  }
  return {};
}

inline double reference_cpu(const std::string& process, std::string_view protocol)
{
  auto key = reference_process(process);
  for (const auto& r : reference::kTransmitterCpu) {
    if (r.process == key) {
      if (protocol == "pubsub") return r.pubsub;
      if (protocol == "ndn-udp") return r.ndn_udp;
      if (protocol == "ndn-tcp") return r.ndn_tcp;
    }
  }
  return -1;
}

} // namespace detail

/// Orders runs as ndn-tcp, ndn-udp, pubsub (unknown protocols last).
inline std::vector<const RunData*> ordered_runs(const std::vector<RunData>& runs)
{
  std::vector<const RunData*> out;
  for (auto p : kProtocolOrder) {
    for (const auto& r : runs) {
      if (r.protocol == p) {
        out.push_back(&r);
      }
    }
  }
  for (const auto& r : runs) {
    if (std::find(kProtocolOrder.begin(), kProtocolOrder.end(), r.protocol) == kProtocolOrder.end()) {
      out.push_back(&r);
    }
  }
  return out;
}

/** Plain-text comparison: one latency table per stream with a column per
 *  protocol and the reference testbed values beside them, then CPU/memory
 *  and bytes-on-wire tables. */
inline std::string render_report(const std::vector<RunData>& runs)
{
  using detail::pad;
  bool any = false;
  for (const auto& r : runs) {
    any = any || !r.latency.empty();
  }
  if (!any) {
    throw InsufficientData("no latency summaries to report (empty run)");
  }
  auto order = ordered_runs(runs);
  std::string out;
  out += "Inter-arrival latency (ms). Local runs first, reference testbed values after '|'.\n";
  out += "Absolute values depend on hardware; compare shapes, not numbers.\n\n";

  constexpr std::size_t kLabel = 16;
  constexpr std::size_t kCol = 12;
  for (auto stream : kStreamOrder) {
    auto profile = traffic::default_profile(traffic::parse_label(stream));
    out += std::string(stream) + " stream (" + std::to_string(profile.payload_bytes) + " B every " +
           format_double(profile.period_ms(), 0) + " ms)\n";
    std::string head = pad("", kLabel, true);
    for (const auto* r : order) {
      head += pad(r->protocol, kCol);
    }
    head += "  |";
    for (auto p : kProtocolOrder) {
      head += pad("ref " + std::string(p), kCol + 2);
    }
    out += head + "\n";
    const char* labels[] = {"Packets Count", "Mean", "Min", "Max"};
    for (int row = 0; row < 4; ++row) {
      std::string line = pad(labels[row], kLabel, true);
      for (const auto* r : order) {
        const auto* s = detail::find_row(*r, stream);
        std::string cell = "-";
        if (s) {
          cell = row == 0 ? std::to_string(s->packets_count)
                          : format_double(row == 1 ? s->mean_ms : row == 2 ? s->min_ms : s->max_ms, 3);
        }
        line += pad(cell, kCol);
      }
      line += "  |";
      for (auto p : kProtocolOrder) {
        const auto* ref = detail::find_reference(stream, p);
        std::string cell = row == 0 ? std::to_string(ref->count)
                                    : format_double(row == 1 ? ref->mean_ms : row == 2 ? ref->min_ms : ref->max_ms, 3);
        line += pad(cell, kCol + 2);
      }
      out += line + "\n";
    }
    out += "\n";
  }

  // resources
  std::vector<std::string> processes;
  for (const auto* r : order) {
    for (const auto& p : r->resources) {
      if (std::find(processes.begin(), processes.end(), p.name) == processes.end()) {
        processes.push_back(p.name);
      }
    }
  }
  if (!processes.empty()) {
    out += "Resource use: mean CPU % of one core / memory % of total, per process\n";
    std::string head = pad("process", 20, true);
    for (const auto* r : order) {
      head += pad(r->protocol, 18);
    }
    head += "  | ref CPU (transmitter)";
    out += head + "\n";
    bool flagged = false;
    for (const auto& name : processes) {
      std::string line = pad(name, 20, true);
      std::string refs;
      for (const auto* r : order) {
        std::string cell = "-";
        for (const auto& p : r->resources) {
          if (p.name == name) {
            cell = format_double(p.mean_cpu_percent, 2) + " / " + format_double(p.mean_mem_percent, 2);
            if (p.multi_core()) {
              cell += "*";
              flagged = true;
            }
          }
        }
        line += pad(cell, 18);
        double ref = detail::reference_cpu(name, r->protocol);
        if (ref >= 0) {
          refs += " " + r->protocol + "=" + format_double(ref, 2);
        }
      }
      out += line + "  |" + (refs.empty() ? " -" : refs) + "\n";
    }
    if (flagged) {
      out += "* peak above 100% of one core (process used more than one core)\n";
    }
    out += "\n";
  }

  out += "Bytes on wire per sample (Ethernet + IPv4 + UDP), local encoding vs reference testbed\n";
  out += pad("stream", 8, true) + pad("payload", 9) + pad("ndn", 8) + pad("ndn ovh", 9) + pad("pubsub", 9) +
         pad("frags", 7) + pad("ps ovh", 8) + "  |" + pad("ref ndn", 9) + pad("ref pubsub", 12) + "\n";
  for (const auto& b : bytes_table()) {
    out += pad(b.stream, 8, true) + pad(std::to_string(b.payload), 9) + pad(std::to_string(b.ndn_total), 8) +
           pad(std::to_string(b.ndn_overhead), 9) + pad(std::to_string(b.pubsub_total), 9) +
           pad(std::to_string(b.pubsub_packets), 7) + pad(std::to_string(b.pubsub_overhead), 8) + "  |" +
           pad(std::to_string(b.reference_ndn_total), 9) + pad(std::to_string(b.reference_pubsub_total), 12) + "\n";
  }
  out += "Interest /trailer/can: " + std::to_string(interest_on_wire(Name::parse("/trailer/can"))) +
         " B (reference " + std::to_string(reference::kInterestOnWire) + ")\n";
  out += "pub/sub ACK: " + std::to_string(pubsub_ack_on_wire()) + " B (reference " +
         std::to_string(reference::kAckOnWire) + ")\n";
  out += "ndn-tcp application ACK: " + std::to_string(app_ack_on_wire()) + " B\n\n";

  bool have_traffic = false;
  for (const auto* r : order) {
    have_traffic = have_traffic || !r->traffic.empty();
  }
  if (have_traffic) {
    out += "Measured bytes on wire per run (all senders)\n";
    for (const auto* r : order) {
      std::uint64_t packets = 0;
      for (const auto& t : r->traffic) {
        packets += t.packets;
      }
      out += pad(r->protocol, 10, true) + pad(std::to_string(r->total_wire_bytes()), 14) + " B in " +
             std::to_string(packets) + " packets\n";
    }
  }
  return out;
}

/// Writes report.txt plus one inter-arrival plot per stream; returns the files written.
inline std::vector<std::filesystem::path> write_report(const std::vector<RunData>& runs,
                                                       const std::filesystem::path& dir)
{
  auto text = render_report(runs);
  preflight_output_dir(dir);
  std::vector<std::filesystem::path> files;
  auto report = dir / "report.txt";
  std::ofstream(report) << text;
  files.push_back(report);
  auto order = ordered_runs(runs);
  for (auto stream : kStreamOrder) {
    std::vector<Series> series;
    for (const auto* r : order) {
      Series s{r->protocol, {}};
      for (const auto& sample : r->samples) {
        if (sample.stream == stream && sample.inter_arrival_ms) {
          s.values.push_back(*sample.inter_arrival_ms);
        }
      }
      if (!s.values.empty()) {
        series.push_back(std::move(s));
      }
    }
    if (series.empty()) {
      continue;
    }
    auto path = dir / ("latency_" + std::string(stream) + ".svg");
    std::ofstream(path) << render_svg(std::string(stream) + " inter-arrival latency", "ms", series);
    files.push_back(path);
  }
  return files;
}

} // namespace tnet::metrics

#endif // TRAILERNET_METRICS_REPORT_HPP
