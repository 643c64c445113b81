#include "monocycle/system_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "monocycle/errors.hpp"
#include "monocycle/io.hpp"

namespace monocycle {

namespace {

struct Entry {
  std::string value;
  std::size_t line;
};

using Section = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& key, std::size_t line, const std::string& msg) {
  throw ConfigError(key, "line " + std::to_string(line) + ", key '" + key + "': " + msg, line);
}

double to_number(const std::string& raw, const std::string& key, std::size_t line) {
  const std::string s = trim(raw);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    fail(key, line, "expected a number, got '" + s + "'");
  }
  return v;
}

std::vector<double> to_array(const Entry& e, const std::string& key) {
  const std::string s = trim(e.value);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    fail(key, e.line, "expected an array like [1, 2]");
  }
  std::vector<double> out;
  const std::string body = s.substr(1, s.size() - 2);
  if (trim(body).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = body.find(',', start);
    out.push_back(to_number(body.substr(start, comma - start), key, e.line));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

const Entry& require(const Section& sec, const std::string& name, const std::string& key,
                     std::size_t section_line) {
  const auto it = sec.find(key);
  if (it == sec.end()) fail(name + "." + key, section_line, "missing required key");
  return it->second;
}

}  // namespace

MixedFeedbackSystem parse_system_definition(std::istream& is,
                                            const std::filesystem::path& base_dir) {
  std::map<std::string, Section> sections;
  std::map<std::string, std::size_t> section_lines;
  std::string current;
  section_lines[current] = 1;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      current = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"lti", "e1", "e2", "input", "operating"};
      bool ok = false;
      for (const char* k : known) ok = ok || current == k;
      if (!ok) fail(current, lineno, "unknown section");
      if (section_lines.count(current) && sections.count(current)) {
        fail(current, lineno, "duplicate section");
      }
      section_lines[current] = lineno;
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line, lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string full = current.empty() ? key : current + "." + key;
    auto& sec = sections[current];
    if (sec.count(key)) fail(full, lineno, "duplicate key");
    sec[key] = {trim(line.substr(eq + 1)), lineno};
  }

  auto section = [&](const std::string& name) -> const Section& {
    const auto it = sections.find(name);
    if (it == sections.end()) fail(name, lineno, "missing section [" + name + "]");
    return it->second;
  };
  auto check_keys = [&](const std::string& name, std::initializer_list<const char*> allowed) {
    const auto it = sections.find(name);
    if (it == sections.end()) return;
    for (const auto& [key, entry] : it->second) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) fail(name.empty() ? key : name + "." + key, entry.line, "unknown key");
    }
  };
  check_keys("", {"label"});
  check_keys("lti", {"numerator", "denominator"});
  check_keys("e1", {"coeffs", "domain"});
  check_keys("e2", {"gain", "coeffs"});
  check_keys("input", {"kind", "amplitude", "frequency", "path"});
  check_keys("operating", {"interval"});

  std::string label = "custom";
  if (sections.count("") && sections[""].count("label")) label = sections[""]["label"].value;

  const Section& lti = section("lti");
  const Entry& num = require(lti, "lti", "numerator", section_lines["lti"]);
  const Entry& den = require(lti, "lti", "denominator", section_lines["lti"]);
  std::optional<LtiRelation> h;
  auto num_coeffs = to_array(num, "lti.numerator");
  auto den_coeffs = to_array(den, "lti.denominator");
  try {
    h.emplace(std::move(num_coeffs), std::move(den_coeffs));
  } catch (const ConfigError& e) {
    const Entry& at = e.field() == "numerator" ? num : den;
    fail("lti." + e.field(), at.line, e.what());
  }

  auto interval_of = [&](const Entry& e, const std::string& key) {
    const auto v = to_array(e, key);
    if (v.size() != 2 || !(v[0] < v[1])) fail(key, e.line, "expected [lo, hi] with lo < hi");
    return Interval{v[0], v[1]};
  };

  auto poly_relation = [&](const Section& sec, const std::string& name) {
    const Entry& c = require(sec, name, "coeffs", section_lines[name]);
    Interval dom;
    if (sec.count("domain")) dom = interval_of(sec.at("domain"), name + ".domain");
    try {
      return StaticPolyRelation(Polynomial(to_array(c, name + ".coeffs")), dom);
    } catch (const MonotonicityError& e) {
      fail(name + ".coeffs", c.line, e.what());
    } catch (const ConfigError& e) {
      fail(name + ".coeffs", c.line, e.what());
    }
  };

  StaticPolyRelation e1 = poly_relation(section("e1"), "e1");

  const Section& e2sec = section("e2");
  std::optional<FeedbackRelation> e2;
  if (e2sec.count("gain") && e2sec.count("coeffs")) {
    fail("e2", e2sec.at("coeffs").line, "give either gain or coeffs, not both");
  }
  if (e2sec.count("gain")) {
    const Entry& g = e2sec.at("gain");
    const double gain = to_number(g.value, "e2.gain", g.line);
    if (gain < 0.0) fail("e2.gain", g.line, "gain must be >= 0 for a monotone relation");
    e2.emplace(GainRelation(gain));
  } else {
    e2.emplace(poly_relation(e2sec, "e2"));
  }

  InputSpec input;
  if (sections.count("input")) {
    const Section& in = sections["input"];
    const std::string kind =
        in.count("kind") ? trim(in.at("kind").value) : std::string("zero");
    const std::size_t kl = in.count("kind") ? in.at("kind").line : section_lines["input"];
    if (kind == "zero") {
      input = InputSpec::zero();
    } else if (kind == "sine") {
      const Entry& a = require(in, "input", "amplitude", kl);
      const Entry& f = require(in, "input", "frequency", kl);
      input = InputSpec::sine(to_number(a.value, "input.amplitude", a.line),
                              to_number(f.value, "input.frequency", f.line));
    } else if (kind == "file") {
      const Entry& p = require(in, "input", "path", kl);
      std::filesystem::path path = trim(p.value);
      if (path.is_relative()) path = base_dir / path;
      try {
        input = InputSpec::from_samples(read_signal_csv(path));
      } catch (const Error& e) {
        fail("input.path", p.line, e.what());
      }
    } else {
      fail("input.kind", kl, "expected zero, sine or file");
    }
  }

  MixedFeedbackSystem sys{label, *h, e1, *e2, input};
  if (sections.count("operating") && sections["operating"].count("interval")) {
    sys.operating_interval =
        interval_of(sections["operating"].at("interval"), "operating.interval");
  }
  try {
    validate_system(sys);
  } catch (const MonotonicityError& e) {
    throw ConfigError("e1/e2", e.what());
  }
  return sys;
}

MixedFeedbackSystem load_system_definition(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("system", "cannot open system definition " + path.string());
  return parse_system_definition(is, path.parent_path());
}

}  // namespace monocycle
