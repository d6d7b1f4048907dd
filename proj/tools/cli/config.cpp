#include "config.hpp"

#include <cmath>
#include <boost/property_tree/ini_parser.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "susyinv/errors.hpp"

namespace susyinv::cli {
namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

// Quoted values keep everything between the quotes; bare values lose a
// trailing ';' or '#' comment.
std::string clean_value(const std::string& raw) {
  std::string v = trim(raw);
  if (!v.empty() && (v.front() == '"' || v.front() == '\'')) {
    const char q = v.front();
    const auto close = v.find(q, 1);
    if (close == std::string::npos) throw ConfigError("unterminated quote in value " + v);
    return v.substr(1, close - 1);
  }
  const auto cut = v.find_first_of(";#");
  if (cut != std::string::npos) v = trim(v.substr(0, cut));
  return v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

class Reader {
 public:
  Reader(const Ini& ini, std::string source) : ini_(ini), source_(std::move(source)) {}

  std::optional<std::string> raw(const std::string& section, const std::string& key) const {
    const auto sec = ini_.get_child_optional(section);
    if (!sec) return std::nullopt;
    const auto v = sec->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return clean_value(*v);
  }

  std::string text(const std::string& section, const std::string& key, std::string fallback) const {
    return raw(section, key).value_or(std::move(fallback));
  }

  double number(const std::string& section, const std::string& key, double fallback) const {
    const auto v = raw(section, key);
    if (!v) return fallback;
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc() || ptr != v->data() + v->size() || !std::isfinite(out)) {
      fail(section, key, "expected a number, got \"" + *v + "\"");
    }
    return out;
  }

  Index integer(const std::string& section, const std::string& key, Index fallback) const {
    const auto v = raw(section, key);
    if (!v) return fallback;
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc() || ptr != v->data() + v->size()) {
      fail(section, key, "expected an integer, got \"" + *v + "\"");
    }
    return static_cast<Index>(out);
  }

  bool flag(const std::string& section, const std::string& key, bool fallback) const {
    const auto v = raw(section, key);
    if (!v) return fallback;
    if (*v == "true" || *v == "yes" || *v == "1" || *v == "on") return true;
    if (*v == "false" || *v == "no" || *v == "0" || *v == "off") return false;
    fail(section, key, "expected true or false, got \"" + *v + "\"");
  }

  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& why) const {
    throw ConfigError(source_ + ": [" + section + "] " + key + ": " + why);
  }

  void reject_unknown() const {
    static const std::vector<std::pair<std::string, std::vector<std::string>>> known = {
        {"system", {"family", "j", "N", "buffer", "padding", "b"}},
        {"gauge", {"theta", "phi"}},
        {"y", {"f", "g"}},
        {"d0", {"named", "file"}},
        {"grid", {"T", "dt"}},
        {"checks", {"suites"}},
        {"output", {"dir", "formats", "samples"}},
        {"verify", {"wrong_hamiltonian", "solution_levels"}},
        {"phase", {"steps", "reverse"}},
        {"sweep", {"key", "values"}},
    };
    for (const auto& [section, body] : ini_) {
      const auto it = std::find_if(known.begin(), known.end(),
                                   [&](const auto& k) { return k.first == section; });
      if (it == known.end()) throw ConfigError(source_ + ": unknown section [" + section + "]");
      for (const auto& [key, value] : body) {
        (void)value;
        if (std::find(it->second.begin(), it->second.end(), key) == it->second.end()) {
          fail(section, key, "unknown key");
        }
      }
    }
  }

 private:
  const Ini& ini_;
  std::string source_;
};

const std::vector<std::string> kSuites = {"superalgebra", "pairing",   "random",
                                          "closed_form",  "lvn",       "transport",
                                          "identities",   "solutions", "propagation",
                                          "intertwining"};

Operator read_matrix_file(const std::string& path, Index dim) {
  std::ifstream in(path);
  if (!in) throw ConfigError("[d0] file: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("[d0] file: " + path + ": " + e.what());
  }
  if (!j.contains("real")) throw ConfigError("[d0] file: " + path + " has no \"real\" array");
  const auto& re = j.at("real");
  const nlohmann::json im = j.contains("imag") ? j.at("imag") : nlohmann::json();
  if (!re.is_array() || static_cast<Index>(re.size()) != dim) {
    throw ConfigError("[d0] file: expected " + std::to_string(dim) + " rows in " + path);
  }
  Operator m = Operator::Zero(dim, dim);
  try {
    for (Index r = 0; r < dim; ++r) {
      const auto& row = re.at(r);
      if (static_cast<Index>(row.size()) != dim) {
        throw ConfigError("[d0] file: row " + std::to_string(r) + " has wrong length in " + path);
      }
      for (Index c = 0; c < dim; ++c) {
        const double ival = im.is_null() ? 0.0 : im.at(r).at(c).get<double>();
        m(r, c) = cplx(row.at(c).get<double>(), ival);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("[d0] file: " + path + ": " + e.what());
  }
  return m;
}

}  // namespace

bool RunConfig::wants(const std::string& suite) const {
  return suites.empty() || std::find(suites.begin(), suites.end(), suite) != suites.end();
}

bool RunConfig::wants_format(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

Ini read_ini(const std::string& path) {
  Ini ini;
  try {
    boost::property_tree::ini_parser::read_ini(path, ini);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(e.filename() + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  return ini;
}

RunConfig parse_config(const Ini& ini, const std::string& source) {
  const Reader r(ini, source);
  r.reject_unknown();
  RunConfig c;
  c.source = source;
  c.base_dir = std::filesystem::path(source).parent_path().string();

  const std::string family = r.text("system", "family", "spin");
  if (family == "spin") {
    c.family = Family::spin;
  } else if (family == "oscillator") {
    c.family = Family::oscillator;
  } else {
    r.fail("system", "family", "expected spin or oscillator, got \"" + family + "\"");
  }
  c.j = r.number("system", "j", c.j);
  c.N = r.integer("system", "N", c.N);
  c.buffer = r.integer("system", "buffer", c.buffer);
  c.padding = r.integer("system", "padding", c.padding);
  c.b = r.number("system", "b", c.b);
  if (c.family == Family::spin &&
      (c.j < 0.0 || std::abs(2.0 * c.j - std::round(2.0 * c.j)) > 1e-12 || c.j > 64.0)) {
    r.fail("system", "j", "must be a half-integer in [0, 64]");
  }
  if (c.family == Family::oscillator) {
    if (c.N < 8) r.fail("system", "N", "must be at least 8");
    if (c.buffer != 0 && (c.buffer < 1 || 4 * c.buffer > c.N)) {
      r.fail("system", "buffer", "must lie in [1, N/4]");
    }
    if (c.padding < 0) r.fail("system", "padding", "must be nonnegative");
  }

  c.theta = r.text("gauge", "theta", c.theta);
  c.phi = r.text("gauge", "phi", c.phi);
  c.f = r.text("y", "f", c.f);
  c.g = r.text("y", "g", c.g);
  for (const auto& [section, key, value] :
       {std::tuple{"gauge", "theta", c.theta}, std::tuple{"gauge", "phi", c.phi},
        std::tuple{"y", "f", c.f}, std::tuple{"y", "g", c.g}}) {
    try {
      parse_timefunc(value);
    } catch (const InvalidInput& e) {
      r.fail(section, key, e.what());
    }
  }

  c.d0_named = r.text("d0", "named", c.d0_named);
  c.d0_file = r.text("d0", "file", "");
  if (!c.d0_file.empty() && r.raw("d0", "named")) {
    r.fail("d0", "file", "give either named or file, not both");
  }
  if (c.d0_file.empty() && c.d0_named != "default" && c.d0_named != "Jplus" &&
      c.d0_named != "adag" && c.d0_named != "zero") {
    r.fail("d0", "named", "expected Jplus, adag or zero, got \"" + c.d0_named + "\"");
  }

  c.T = r.number("grid", "T", c.T);
  c.dt = r.number("grid", "dt", c.dt);
  if (!(c.T > 0.0)) r.fail("grid", "T", "must be positive");
  if (!(c.dt > 0.0)) r.fail("grid", "dt", "must be positive");
  if (c.T / c.dt > 1e7) r.fail("grid", "dt", "T/dt exceeds 1e7");

  if (const auto s = r.raw("checks", "suites")) {
    c.suites = split_list(*s);
    for (const auto& name : c.suites) {
      if (std::find(kSuites.begin(), kSuites.end(), name) == kSuites.end()) {
        r.fail("checks", "suites", "unknown suite \"" + name + "\"");
      }
    }
  }

  c.out_dir = r.text("output", "dir", c.out_dir);
  if (const auto s = r.raw("output", "formats")) {
    c.formats = split_list(*s);
    for (const auto& fmt : c.formats) {
      if (fmt != "csv" && fmt != "json") r.fail("output", "formats", "unknown format \"" + fmt + "\"");
    }
  }
  c.samples = r.integer("output", "samples", c.samples);
  if (c.samples < 2) r.fail("output", "samples", "need at least 2 samples");

  c.wrong_hamiltonian = r.flag("verify", "wrong_hamiltonian", c.wrong_hamiltonian);
  c.solution_levels = r.integer("verify", "solution_levels", c.solution_levels);
  c.phase_steps = r.integer("phase", "steps", c.phase_steps);
  if (c.phase_steps < 1) r.fail("phase", "steps", "must be positive");
  c.reverse = r.flag("phase", "reverse", c.reverse);

  c.sweep_key = r.text("sweep", "key", "");
  if (const auto s = r.raw("sweep", "values")) c.sweep_values = split_list(*s);
  return c;
}

RunConfig load_config(const std::string& path) { return parse_config(read_ini(path), path); }

void override_value(Ini& ini, const std::string& dotted_key, const std::string& value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == dotted_key.size()) {
    throw ConfigError("sweep key must look like section.key, got \"" + dotted_key + "\"");
  }
  ini.put(boost::property_tree::ptree::path_type(dotted_key, '.'), "\"" + value + "\"");
}

Model build_model(const RunConfig& config) {
  Model m;
  m.config = config;
  try {
    m.f = parse_timefunc(config.f);
    m.g = parse_timefunc(config.g);
    m.theta = parse_timefunc(config.theta);
    m.phi = parse_timefunc(config.phi);

    if (config.family == Family::spin) {
      m.spin = make_spin(config.j);
      m.dim = m.spin->dim;
      m.interior = m.dim;
      GaugeCurve w = GaugeCurve::spin(*m.spin, m.theta, m.phi);
      YSpec y = YSpec::spin(*m.spin, m.f, m.g);
      m.system = spin_system(*m.spin, config.b, std::move(w), std::move(y));
    } else {
      const Index buffer = config.buffer > 0 ? config.buffer : default_buffer(config.N);
      m.osc = make_oscillator(config.N, buffer, config.padding);
      m.dim = m.osc->dim();
      m.interior = m.osc->interior();
      GaugeCurve w = GaugeCurve::oscillator(*m.osc, m.theta, m.phi);
      YSpec y = YSpec::oscillator(*m.osc, m.f, m.g);
      m.system = oscillator_system(*m.osc, std::move(w), std::move(y));
    }

    if (!config.d0_file.empty()) {
      std::filesystem::path p(config.d0_file);
      if (p.is_relative() && !config.base_dir.empty()) p = std::filesystem::path(config.base_dir) / p;
      m.system.d0 = read_matrix_file(p.string(), m.dim);
    } else if (config.d0_named == "zero") {
      m.system.d0 = Operator::Zero(m.dim, m.dim);
    } else if (config.d0_named == "Jplus" && !m.spin) {
      throw ConfigError(config.source + ": [d0] named: Jplus needs family = spin");
    } else if (config.d0_named == "adag" && !m.osc) {
      throw ConfigError(config.source + ": [d0] named: adag needs family = oscillator");
    }
    m.partner = run_prescription(m.system);
  } catch (const InvalidInput& e) {
    throw ConfigError(config.source + ": " + e.what());
  }
  return m;
}

}  // namespace susyinv::cli
