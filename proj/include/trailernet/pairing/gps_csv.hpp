#ifndef TRAILERNET_PAIRING_GPS_CSV_HPP
#define TRAILERNET_PAIRING_GPS_CSV_HPP

#include "spoof.hpp"

#include <fstream>
#include <istream>
#include <sstream>

namespace tnet::pairing {

class GpsCsvError : public std::runtime_error
{
public:
  GpsCsvError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what)
    , line_(line)
  {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

struct GpsSeries
{
  std::vector<GpsFix> tractor;
  std::vector<GpsFix> trailer;
};

namespace detail {

inline std::string trim(const std::string& s)
{
  auto a = s.find_first_not_of(" \t\r");
  auto b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

inline bool parse_number(const std::string& cell, double& out)
{
  auto s = trim(cell);
  if (s.empty()) {
    return false;
  }
  std::size_t used = 0;
  try {
    out = std::stod(s, &used);
  }
  catch (const std::exception&) {
    return false;
  }
  return used == s.size() && std::isfinite(out);
}

} // namespace detail

/** Reads "t,x_T,y_T,x_R,y_R" rows. An optional header line is skipped, as are
 *  blank lines and '#' comments. A row may leave both trailer (or both
 *  tractor) columns empty when that receiver produced no fix; the series then
 *  differ in length, which spoof_check reports. */
inline GpsSeries read_gps_csv(std::istream& in)
{
  GpsSeries s;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = detail::trim(line);
    if (body.empty() || body[0] == '#') {
      continue;
    }
    if (lineno == 1 && (body[0] == 't' || body[0] == 'T')) {
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(body);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cells.push_back(cell);
    }
    if (body.back() == ',') {
      cells.emplace_back();
    }
    if (cells.size() != 5) {
      throw GpsCsvError(lineno, "expected 5 columns (t,x_T,y_T,x_R,y_R), got " + std::to_string(cells.size()));
    }
    double t = 0;
    if (!detail::parse_number(cells[0], t) || t != std::floor(t)) {
      throw GpsCsvError(lineno, "t must be an integer index");
    }
    auto pair = [&](std::size_t a, std::vector<GpsFix>& into, const char* who) {
      bool empty_x = detail::trim(cells[a]).empty();
      bool empty_y = detail::trim(cells[a + 1]).empty();
      if (empty_x && empty_y) {
        return;
      }
      GpsFix f;
      f.t = static_cast<long>(t);
      if (!detail::parse_number(cells[a], f.x) || !detail::parse_number(cells[a + 1], f.y)) {
        throw GpsCsvError(lineno, std::string("malformed ") + who + " coordinate");
      }
      into.push_back(f);
    };
    pair(1, s.tractor, "tractor");
    pair(3, s.trailer, "trailer");
  }
  return s;
}

inline GpsSeries read_gps_csv(const std::string& path)
{
  std::ifstream f(path);
  if (!f) {
    throw std::runtime_error("cannot open " + path);
  }
  return read_gps_csv(static_cast<std::istream&>(f));
}

} // namespace tnet::pairing

#endif // TRAILERNET_PAIRING_GPS_CSV_HPP
