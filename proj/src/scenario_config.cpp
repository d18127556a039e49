#include "scenario_config.hpp"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "field_io.hpp"

namespace wigcur {

namespace {

struct ParsedConfig {
  std::string path;
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::set<std::string> consumed;

  std::string key_path(const std::string& section, const std::string& key) const {
    return section + "." + key;
  }

  bool has(const std::string& section, const std::string& key) const {
    const auto s = sections.find(section);
    return s != sections.end() && s->second.count(key) > 0;
  }

  std::string raw(const std::string& section, const std::string& key) {
    const auto s = sections.find(section);
    if (s == sections.end() || !s->second.count(key)) {
      throw ConfigError(path + ": missing required key " + key_path(section, key));
    }
    consumed.insert(key_path(section, key));
    return s->second.at(key);
  }

  double get_double(const std::string& section, const std::string& key) {
    const std::string v = raw(section, key);
    try {
      size_t used = 0;
      const double d = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw ConfigError(path + ": " + key_path(section, key) + ": not a number: '" + v + "'");
    }
  }

  double get_double_or(const std::string& section, const std::string& key, double fallback) {
    return has(section, key) ? get_double(section, key) : fallback;
  }

  int get_int(const std::string& section, const std::string& key) {
    const double d = get_double(section, key);
    const int i = static_cast<int>(std::lround(d));
    if (std::abs(d - i) > 1e-12) {
      throw ConfigError(path + ": " + key_path(section, key) + ": expected an integer");
    }
    return i;
  }

  int get_int_or(const std::string& section, const std::string& key, int fallback) {
    return has(section, key) ? get_int(section, key) : fallback;
  }

  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) {
    return has(section, key) ? raw(section, key) : fallback;
  }

  void reject_unconsumed() const {
    for (const auto& [section, keys] : sections) {
      for (const auto& [key, value] : keys) {
        if (!consumed.count(key_path(section, key))) {
          throw ConfigError(path + ": unknown key " + key_path(section, key));
        }
      }
    }
  }
};

ParsedConfig parse_ini(const std::string& path) {
  ParsedConfig cfg;
  cfg.path = path;
  static const std::set<std::string> kSections = {"grid",  "pump",           "environment",
                                                  "noise", "reconstruction", "topology"};
  std::istringstream in(read_text_file(path));
  std::string line;
  std::string section;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t\r");
    return (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(path + ":" + std::to_string(line_no) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (!kSections.count(section)) {
        throw ConfigError(path + ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || section.empty()) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
    }
    if (cfg.sections[section].count(key)) {
      throw ConfigError(path + ": duplicate key " + section + "." + key);
    }
    cfg.sections[section][key] = value;
  }
  return cfg;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  ParsedConfig cfg = parse_ini(path);
  RunConfig run;

  const int nx = cfg.get_int("grid", "nx");
  const int np = cfg.get_int("grid", "np");
  const double x_half = cfg.get_double("grid", "x_half");
  const double p_half = cfg.get_double("grid", "p_half");
  try {
    run.scenario.grid = make_grid(nx, np, x_half, p_half);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": grid: " + e.what());
  }

  const double start = cfg.get_double("pump", "power_start_mw");
  const double step = cfg.get_double("pump", "power_step_mw");
  const int steps = cfg.get_int("pump", "power_steps");
  if (steps < 1) throw ConfigError(path + ": pump.power_steps: must be >= 1");
  for (int i = 0; i < steps; ++i) run.scenario.schedule.powers_mw.push_back(start + i * step);
  run.scenario.schedule.k_cal = cfg.get_double("pump", "k_cal");
  run.scenario.theta = cfg.get_double_or("pump", "theta", kHalfPi);
  try {
    validate_schedule(run.scenario.schedule);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": pump: " + e.what());
  }

  run.scenario.env.gamma = cfg.get_double("environment", "gamma");
  run.scenario.env.n_bar = cfg.get_double("environment", "n_bar");
  try {
    validate_env(run.scenario.env);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": environment: " + e.what());
  }
  const std::string policy = cfg.get_string_or("environment", "weight_policy", "fitted");
  if (policy == "fitted") {
    run.scenario.weight_policy = WeightPolicy::kFitted;
    if (cfg.has("environment", "weights")) {
      throw ConfigError(path + ": environment.weights: only valid with weight_policy = fixed");
    }
  } else if (policy == "fixed") {
    run.scenario.weight_policy = WeightPolicy::kFixed;
    std::istringstream ws(cfg.raw("environment", "weights"));
    double a, b, c;
    if (!(ws >> a >> b >> c)) {
      throw ConfigError(path + ": environment.weights: expected three numbers");
    }
    run.scenario.fixed_weights = {a, b, c};
  } else {
    throw ConfigError(path + ": environment.weight_policy: expected fitted or fixed");
  }

  run.noise.eta = cfg.get_double("noise", "eta");
  run.noise.theta_rms = cfg.get_double("noise", "theta_rms");
  try {
    validate_noise(run.noise);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": noise: " + e.what());
  }

  const std::string modes = cfg.get_string_or("reconstruction", "init_modes", "zero,fitted");
  run.run_zero = run.run_fitted = false;
  std::istringstream ms(modes);
  std::string mode;
  while (std::getline(ms, mode, ',')) {
    const auto b = mode.find_first_not_of(" \t");
    const auto e = mode.find_last_not_of(" \t");
    mode = (b == std::string::npos) ? "" : mode.substr(b, e - b + 1);
    if (mode == "zero") run.run_zero = true;
    else if (mode == "fitted") run.run_fitted = true;
    else throw ConfigError(path + ": reconstruction.init_modes: unknown mode '" + mode + "'");
  }
  if (!run.run_zero && !run.run_fitted) {
    throw ConfigError(path + ": reconstruction.init_modes: no modes selected");
  }
  run.solve.dense_column_limit =
      cfg.get_int_or("reconstruction", "dense_column_limit", run.solve.dense_column_limit);
  run.display.env = cfg.get_double_or("reconstruction", "display_scale_env", 1.0);
  run.display.damp = cfg.get_double_or("reconstruction", "display_scale_damp", 1.0);
  run.display.diff = cfg.get_double_or("reconstruction", "display_scale_diff", 1.0);

  run.topology.floor_frac = cfg.get_double_or("topology", "floor_frac", 1e-3);
  run.topology.loop_radius_cells = cfg.get_double_or("topology", "loop_radius_cells", 3.0);
  run.topology.loop_samples = cfg.get_int_or("topology", "loop_samples", 64);
  if (!(run.topology.floor_frac > 0.0) || !(run.topology.floor_frac < 1.0)) {
    throw ConfigError(path + ": topology.floor_frac: must lie in (0, 1)");
  }
  if (run.topology.loop_samples < 8) {
    throw ConfigError(path + ": topology.loop_samples: must be >= 8");
  }
  if (!(run.topology.loop_radius_cells > 0.0)) {
    throw ConfigError(path + ": topology.loop_radius_cells: must be > 0");
  }

  cfg.reject_unconsumed();
  return run;
}

}  // namespace wigcur
