#include "monocycle/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "monocycle/errors.hpp"

namespace monocycle {

std::string format_number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  std::string s(buf, r.ptr);
  if (s == "-0") s = "0";
  return s;
}

void write_signal_csv(std::ostream& os, const PeriodicSignal& x) {
  os << "t,value\n";
  for (std::size_t k = 0; k < x.size(); ++k) {
    os << format_number(x.grid().time(k)) << ',' << format_number(x[k]) << '\n';
  }
}

void write_signal_csv(const std::filesystem::path& path, const PeriodicSignal& x) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("path", "cannot open " + path.string() + " for writing");
  write_signal_csv(os, x);
}

namespace {

double parse_field(const std::string& s, std::size_t line) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  while (e > b && (e[-1] == ' ' || e[-1] == '\t' || e[-1] == '\r')) --e;
  const auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e) {
    throw ConfigError("csv", "line " + std::to_string(line) + ": bad number '" + s + "'", line);
  }
  return v;
}

}  // namespace

PeriodicSignal read_signal_csv(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(is, line)) throw ConfigError("csv", "empty input");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,value") throw ConfigError("csv", "expected header 't,value'", 1);
  std::vector<double> t;
  std::vector<double> v;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ConfigError("csv", "line " + std::to_string(lineno) + ": missing comma", lineno);
    }
    t.push_back(parse_field(line.substr(0, comma), lineno));
    v.push_back(parse_field(line.substr(comma + 1), lineno));
  }
  if (v.size() < 4) throw ConfigError("csv", "need at least 4 rows");
  const auto n = static_cast<double>(v.size());
  const double h = (t.back() - t.front()) / (n - 1.0);
  if (!(h > 0.0)) throw ConfigError("csv", "time column must increase");
  const PeriodicGrid grid(h * n, v.size());
  return PeriodicSignal(grid, std::move(v));
}

PeriodicSignal read_signal_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("path", "cannot open " + path.string());
  return read_signal_csv(is);
}

}  // namespace monocycle
