#ifndef TRAILERNET_METRICS_SVG_HPP
#define TRAILERNET_METRICS_SVG_HPP

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

namespace tnet::metrics {

struct Series
{
  std::string label;
  std::vector<double> values;
};

inline std::string svg_escape(const std::string& s)
{
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

/** Line plot of one or more series against sample index. Long series are
 *  thinned to at most `max_points` evenly spaced points. */
inline std::string render_svg(const std::string& title, const std::string& y_label, const std::vector<Series>& series,
                              std::size_t max_points = 2000)
{
  constexpr double W = 900, H = 420, L = 70, R = 150, T = 40, B = 50;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  double ymax = 0;
  std::size_t xmax = 1;
  for (const auto& s : series) {
    for (double v : s.values) {
      ymax = std::max(ymax, v);
    }
    xmax = std::max(xmax, s.values.size());
  }
  if (ymax <= 0) {
    ymax = 1;
  }
  ymax *= 1.05;

  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" font-family=\"sans-serif\" "
                "font-size=\"12\">\n",
                W, H);
  out += buf;
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf, "<text x=\"%.0f\" y=\"24\" font-size=\"15\">", L);
  out += buf + svg_escape(title) + "</text>\n";
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.0f\" y1=\"%.0f\" x2=\"%.0f\" y2=\"%.0f\" stroke=\"black\"/>\n"
                "<line x1=\"%.0f\" y1=\"%.0f\" x2=\"%.0f\" y2=\"%.0f\" stroke=\"black\"/>\n",
                L, H - B, W - R, H - B, L, T, L, H - B);
  out += buf;
  for (int k = 0; k <= 4; ++k) {
    double v = ymax * k / 4;
    double y = (H - B) - (H - B - T) * k / 4;
    std::snprintf(buf, sizeof buf, "<text x=\"%.0f\" y=\"%.1f\" text-anchor=\"end\">%.2f</text>\n", L - 6, y + 4, v);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%.0f\" y=\"%.0f\" text-anchor=\"middle\">sample index (0..%zu)</text>\n",
                (L + W - R) / 2, H - 14, xmax - 1);
  out += buf;
  std::snprintf(buf, sizeof buf, "<text x=\"16\" y=\"%.0f\" transform=\"rotate(-90 16 %.0f)\" text-anchor=\"middle\">",
                (T + H - B) / 2, (T + H - B) / 2);
  out += buf + svg_escape(y_label) + "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kColors[si % 6];
    out += std::string("<polyline fill=\"none\" stroke-width=\"1\" stroke=\"") + color + "\" points=\"";
    std::size_t n = s.values.size();
    std::size_t step = std::max<std::size_t>(1, (n + max_points - 1) / max_points);
    for (std::size_t i = 0; i < n; i += step) {
      double x = L + (W - L - R) * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(1, xmax - 1));
      double y = (H - B) - (H - B - T) * s.values[i] / ymax;
      std::snprintf(buf, sizeof buf, "%.1f,%.1f ", x, y);
      out += buf;
    }
    out += "\"/>\n";
    std::snprintf(buf, sizeof buf, "<text x=\"%.0f\" y=\"%.0f\" fill=\"%s\">", W - R + 10, T + 16.0 * (si + 1), color);
    out += buf + svg_escape(s.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

} // namespace tnet::metrics

#endif // TRAILERNET_METRICS_SVG_HPP
