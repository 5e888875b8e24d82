#include "enstro/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace enstro {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || end != v.data() + v.size() || !std::isfinite(x)) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
  }
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || end != v.data() + v.size()) {
    throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
  }
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw ConfigError("config: '" + key + "' expects true/false, got '" + v + "'");
}

template <typename E>
E choose(const std::string& key, const std::string& v, const std::map<std::string, E>& options) {
  const auto it = options.find(v);
  if (it != options.end()) return it->second;
  std::string valid;
  for (const auto& [name, value] : options) valid += (valid.empty() ? "" : ", ") + name;
  throw ConfigError("config: '" + key + "' must be one of {" + valid + "}, got '" + v + "'");
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"mode", [](RunConfig& c, auto& k, auto& v) {
         c.mode = choose<RunConfig::Mode>(k, v, {{"stokes", RunConfig::Mode::stokes},
                                                 {"nse", RunConfig::Mode::nse}});
       }},
      {"map", [](RunConfig& c, auto& k, auto& v) {
         c.map = choose<ConformalMap::Kind>(k, v, {{"disk", ConformalMap::Kind::disk},
                                                   {"joukowski", ConformalMap::Kind::joukowski}});
       }},
      {"map_c", [](RunConfig& c, auto& k, auto& v) { c.map_c = to_double(k, v); }},
      {"nu", [](RunConfig& c, auto& k, auto& v) { c.nu = to_double(k, v); }},
      {"v_inf", [](RunConfig& c, auto& k, auto& v) { c.v_inf = to_double(k, v); }},
      {"r0", [](RunConfig& c, auto& k, auto& v) { c.r0 = to_double(k, v); }},
      {"rmax", [](RunConfig& c, auto& k, auto& v) { c.rmax = to_double(k, v); }},
      {"n", [](RunConfig& c, auto& k, auto& v) { c.n = to_int(k, v); }},
      {"K", [](RunConfig& c, auto& k, auto& v) { c.K = to_int(k, v); }},
      {"nphi", [](RunConfig& c, auto& k, auto& v) { c.nphi = to_int(k, v); }},
      {"stretch", [](RunConfig& c, auto& k, auto& v) {
         const double growth = c.stretch.kind == Stretch::Kind::geometric ? c.stretch.growth : 5.0;
         c.stretch = choose<Stretch>(k, v, {{"uniform", Stretch::uniform()},
                                            {"geometric", Stretch::geometric(growth)}});
       }},
      {"growth", [](RunConfig& c, auto& k, auto& v) { c.stretch.growth = to_double(k, v); }},
      {"dt", [](RunConfig& c, auto& k, auto& v) { c.dt = to_double(k, v); }},
      {"steps", [](RunConfig& c, auto& k, auto& v) { c.steps = to_int(k, v); }},
      {"scheme", [](RunConfig& c, auto& k, auto& v) {
         c.scheme = choose<TimeScheme>(k, v, {{"crank_nicolson", TimeScheme::crank_nicolson},
                                              {"backward_euler", TimeScheme::backward_euler}});
       }},
      {"cfl", [](RunConfig& c, auto& k, auto& v) {
         c.cfl = choose<CflAction>(k, v, {{"warn", CflAction::warn}, {"abort", CflAction::abort}});
       }},
      {"advection", [](RunConfig& c, auto& k, auto& v) { c.advection = to_bool(k, v); }},
      {"compatible_start",
       [](RunConfig& c, auto& k, auto& v) { c.compatible_start = to_bool(k, v); }},
      {"ic", [](RunConfig& c, auto& k, auto& v) {
         c.ic.kind = choose<InitialCondition::Kind>(k, v, {{"ring", InitialCondition::Kind::ring},
                                                           {"power", InitialCondition::Kind::power},
                                                           {"noise", InitialCondition::Kind::noise},
                                                           {"zero", InitialCondition::Kind::zero}});
       }},
      {"amplitude", [](RunConfig& c, auto& k, auto& v) { c.ic.amplitude = to_double(k, v); }},
      {"ring_radius", [](RunConfig& c, auto& k, auto& v) { c.ic.ring_radius = to_double(k, v); }},
      {"ring_beta", [](RunConfig& c, auto& k, auto& v) { c.ic.ring_beta = to_double(k, v); }},
      {"ring_mode", [](RunConfig& c, auto& k, auto& v) { c.ic.ring_mode = to_int(k, v); }},
      {"power_exponent",
       [](RunConfig& c, auto& k, auto& v) { c.ic.power_exponent = to_double(k, v); }},
      {"correction_width",
       [](RunConfig& c, auto& k, auto& v) { c.ic.correction_width = to_double(k, v); }},
      {"noise_modes", [](RunConfig& c, auto& k, auto& v) { c.ic.noise_modes = to_int(k, v); }},
      {"noise_bumps", [](RunConfig& c, auto& k, auto& v) { c.ic.noise_bumps = to_int(k, v); }},
      {"noise_min_width", [](RunConfig& c, auto& k, auto& v) { c.ic.noise_min_width = to_double(k, v); }},
      {"noise_max_width", [](RunConfig& c, auto& k, auto& v) { c.ic.noise_max_width = to_double(k, v); }},
      {"seed", [](RunConfig& c, auto& k, auto& v) {
         const long long s = to_int(k, v);
         if (s < 0) throw ConfigError("config: 'seed' must be nonnegative");
         c.ic.seed = static_cast<std::uint64_t>(s);
       }},
      {"csv", [](RunConfig& c, auto&, auto& v) { c.csv = v; }},
      {"snapshot_every", [](RunConfig& c, auto& k, auto& v) { c.snapshot_every = to_int(k, v); }},
      {"snapshot_prefix", [](RunConfig& c, auto&, auto& v) { c.snapshot_prefix = v; }},
  };
  return table;
}

}  // namespace

SolverConfig RunConfig::solver() const {
  SolverConfig s;
  s.nu = nu;
  s.v_inf = v_inf;
  s.scheme = scheme;
  s.dt = dt;
  s.map = conformal_map();
  s.nphi = resolved_nphi();
  s.advection = mode == Mode::nse && advection;
  s.cfl = cfl;
  return s;
}

void RunConfig::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError("config: " + msg);
  };
  require(nu > 0.0, "nu must be positive");
  require(r0 > 0.0, "r0 must be positive");
  require(rmax >= 4.0 * r0, "rmax / r0 must be at least 4");
  require(n >= 16, "n must be at least 16");
  require(K >= 1, "K must be at least 1");
  require(nphi >= 0, "nphi must be nonnegative");
  require(nphi == 0 || nphi >= 2 * K + 1, "nphi must be at least 2K + 1");
  require(mode == Mode::stokes || resolved_nphi() >= 3 * K, "nse mode needs nphi >= 3K");
  require(dt > 0.0, "dt must be positive");
  require(steps >= 0, "steps must be nonnegative");
  require(snapshot_every >= 0, "snapshot_every must be nonnegative");
  require(stretch.kind == Stretch::Kind::uniform || stretch.growth > 0.0,
          "growth must be positive");
  require(map != ConformalMap::Kind::joukowski || (map_c >= 0.0 && map_c < r0),
          "joukowski map needs 0 <= map_c < r0");
  require(ic.amplitude >= 0.0, "amplitude must be nonnegative");
  require(ic.kind != InitialCondition::Kind::ring || (ic.ring_mode >= 0 && ic.ring_mode <= K),
          "ring_mode must be in [0, K]");
  require(ic.ring_beta > 0.0 && ic.ring_radius > 0.0, "ring_radius and ring_beta must be positive");
  require(ic.correction_width > 0.0, "correction_width must be positive");
  require(ic.noise_modes >= 0 && ic.noise_bumps >= 0, "noise settings must be nonnegative");
  require(ic.noise_min_width > 0.0 && ic.noise_max_width >= ic.noise_min_width,
          "noise widths must satisfy 0 < noise_min_width <= noise_max_width");
}

std::vector<std::string> RunConfig::warnings() const {
  std::vector<std::string> w;
  if (mode == Mode::nse && std::abs(v_inf) / nu > 20.0) {
    w.push_back("v_inf / nu = " + std::to_string(v_inf / nu) +
                " needs far more resolution than a desk-scale grid provides; expect CFL warnings "
                "and under-resolved boundary layers");
  }
  return w;
}

RunConfig preset_config(const std::string& name) {
  RunConfig c;
  c.preset = name;
  if (name == "stokes_demo") {
    // Thin ring just off a large body: the wall layer stays thin over the run,
    // so the decay is close to the flat-plate power law.
    c.mode = RunConfig::Mode::stokes;
    c.v_inf = 1.0;
    c.r0 = 10.0;
    c.rmax = 60.0;
    c.ic.kind = InitialCondition::Kind::ring;
    c.ic.amplitude = 0.3;
    c.ic.ring_radius = 1.1;
    c.ic.ring_beta = 400.0;
    c.ic.ring_mode = 2;
    c.ic.correction_width = 0.025;
    c.csv = "stokes_demo.csv";
  } else if (name == "nse_demo") {
    // Impulsive start: the wall vortex sheet is advected off the body.
    c.mode = RunConfig::Mode::nse;
    c.v_inf = 15.0;
    c.ic.kind = InitialCondition::Kind::zero;
    c.csv = "nse_demo.csv";
  } else if (name == "appendix") {
    c.mode = RunConfig::Mode::nse;
    c.nu = 1.0;
    c.v_inf = 150.0;
    c.n = 512;
    c.K = 64;
    c.dt = 1e-5;
    c.csv = "appendix.csv";
  } else {
    throw ConfigError("config: unknown preset '" + name + "'");
  }
  return c;
}

std::vector<std::string> preset_names() { return {"stokes_demo", "nse_demo", "appendix"}; }

RunConfig parse_config(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::string preset;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
    }
    for (const auto& [k, v] : entries) {
      if (k == key) throw ConfigError("config: duplicate key '" + key + "'");
    }
    if (key == "preset") {
      preset = value;
    } else if (!setters().contains(key)) {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    entries.emplace_back(std::move(key), std::move(value));
  }

  RunConfig c = preset.empty() ? RunConfig{} : preset_config(preset);
  for (const auto& [key, value] : entries) {
    if (key != "preset") setters().at(key)(c, key, value);
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys{"preset"};
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

}  // namespace enstro
