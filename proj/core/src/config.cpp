#include "ptfid/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace ptfid {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, next == std::string_view::npos ? next : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || s.empty())
    throw ConfigError(what + ": '" + s + "' is not a number");
  return v;
}

long long to_int(const std::string& s, const std::string& what) {
  long long v = 0;
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || s.empty())
    throw ConfigError(what + ": '" + s + "' is not an integer");
  return v;
}

bool to_bool(const std::string& s, const std::string& what) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(what + ": '" + s + "' is not a boolean");
}

const std::set<std::string>& names_for(const std::string& model) {
  static const std::set<std::string> ssh{"w", "v1", "v2", "u"};
  static const std::set<std::string> xxz{"Jz", "gamma"};
  static const std::set<std::string> dense{"lambda"};
  if (model == "ssh") return ssh;
  if (model == "xxz") return xxz;
  return dense;
}

}  // namespace

std::vector<double> Axis::values() const {
  std::vector<double> v(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i)
    v[static_cast<std::size_t>(i)] =
        count == 1 ? start : start + (stop - start) * static_cast<double>(i) / (count - 1);
  return v;
}

Axis parse_axis_spec(const std::string& name, const std::string& spec) {
  const auto parts = split(spec, spec.find(':') != std::string::npos ? ':' : ',');
  Axis a;
  a.name = name;
  if (parts.size() == 1) {
    a.start = a.stop = to_double(parts[0], name);
    a.count = 1;
    return a;
  }
  if (parts.size() != 3) throw ConfigError(name + ": expected start:stop:count");
  a.start = to_double(parts[0], name);
  a.stop = to_double(parts[1], name);
  a.count = static_cast<int>(to_int(parts[2], name));
  return a;
}

SweepConfig parse_config(std::string_view text) {
  SweepConfig cfg;
  cfg.source_text = std::string(text);
  std::string section = "sweep";
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "sweep" && section != "params" && section != "axes" && section != "output")
        throw ConfigError(where + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    const std::string what = where + " (" + key + ")";
    if (section == "params") {
      cfg.fixed[key] = to_double(val, what);
    } else if (section == "axes") {
      Axis a = parse_axis_spec(key, val);
      cfg.axes.push_back(a);
    } else if (section == "output") {
      if (key == "path") cfg.output = val;
      else if (key == "format") cfg.format = val;
      else throw ConfigError(what + ": unknown key");
    } else if (key == "model") {
      cfg.model = val;
    } else if (key == "direction") {
      cfg.direction = val;
    } else if (key == "epsilon") {
      cfg.epsilon = to_double(val, what);
    } else if (key == "definition") {
      try {
        cfg.definition = parse_definition(val);
      } catch (const ConfigError& e) {
        throw ConfigError(what + ": " + e.what());
      }
    } else if (key == "sizes" || key == "L") {
      cfg.sizes.clear();
      for (const auto& s : split(val, ',')) cfg.sizes.push_back(static_cast<int>(to_int(s, what)));
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(to_int(val, what));
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(to_int(val, what));
    } else if (key == "tol_real") {
      cfg.tol_real = to_double(val, what);
    } else if (key == "divergence_floor") {
      cfg.divergence_floor = to_double(val, what);
    } else if (key == "fit_degree") {
      cfg.fit_degree = static_cast<int>(to_int(val, what));
    } else if (key == "track") {
      cfg.track = to_bool(val, what);
    } else if (key == "h0") {
      cfg.h0_path = val;
    } else if (key == "v") {
      cfg.v_path = val;
    } else {
      throw ConfigError(what + ": unknown key");
    }
  }
  return cfg;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

void validate(SweepConfig& cfg) {
  if (cfg.model != "ssh" && cfg.model != "xxz" && cfg.model != "dense-file")
    throw ConfigError("unknown model '" + cfg.model + "'");
  const auto& names = names_for(cfg.model);
  std::set<std::string> seen;
  for (const auto& a : cfg.axes) {
    if (!names.count(a.name))
      throw ConfigError("axis '" + a.name + "' is not a parameter of model " + cfg.model);
    if (!seen.insert(a.name).second) throw ConfigError("axis '" + a.name + "' given twice");
    if (a.count < 2) throw ConfigError("axis '" + a.name + "' needs at least 2 points");
    if (cfg.fixed.count(a.name))
      throw ConfigError("'" + a.name + "' is both fixed and swept");
  }
  for (const auto& [k, v] : cfg.fixed)
    if (!names.count(k)) throw ConfigError("'" + k + "' is not a parameter of model " + cfg.model);
  if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (cfg.threads < 0) throw ConfigError("threads must be >= 0");
  if (cfg.format != "csv" && cfg.format != "json")
    throw ConfigError("format must be csv or json");
  if (cfg.fit_degree < 0) throw ConfigError("fit_degree must be >= 0");
  if (!(cfg.tol_real > 0.0)) throw ConfigError("tol_real must be positive");

  if (cfg.model == "ssh") {
    if (cfg.direction.empty()) cfg.direction = "v1";
    if (cfg.direction != "v1") throw ConfigError("ssh scans perturb v1 only");
    if (cfg.sizes.empty()) cfg.sizes = {101};
    for (int L : cfg.sizes)
      if (L < 2) throw ConfigError("ssh sizes must be >= 2");
    if (cfg.fixed.count("w") && !(cfg.fixed.at("w") > 0.0)) throw ConfigError("w must be positive");
  } else if (cfg.model == "xxz") {
    if (cfg.direction.empty())
      cfg.direction = (!cfg.axes.empty() && cfg.axes.front().name == "Jz") ? "Jz" : "gamma";
    if (cfg.direction != "gamma" && cfg.direction != "Jz")
      throw ConfigError("xxz direction must be gamma or Jz");
    if (cfg.sizes.empty()) cfg.sizes = {12};
    for (int L : cfg.sizes)
      if (L < 4 || L % 2 != 0) throw ConfigError("xxz sizes must be even and >= 4");
  } else {
    if (cfg.direction.empty()) cfg.direction = "lambda";
    if (cfg.direction != "lambda") throw ConfigError("dense-file direction must be lambda");
    if (cfg.h0_path.empty() || cfg.v_path.empty())
      throw ConfigError("dense-file model needs h0 and v matrix paths");
    cfg.sizes = {0};
  }
}

}  // namespace ptfid
