#include "satsim/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace sat {

namespace {

struct Field {
  std::string name;
  std::function<std::string(const ScenarioConfig&)> get;
  std::function<void(ScenarioConfig&, const std::string&)> set;
};

std::string fmt_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

#define DBL_FIELD(key, expr)                                                       \
  {key, [](const ScenarioConfig& c) { return fmt_double(c.expr); },                \
   [](ScenarioConfig& c, const std::string& v) { c.expr = to_double(key, v); }}
#define INT_FIELD(key, expr)                                                       \
  {key, [](const ScenarioConfig& c) { return std::to_string(c.expr); },            \
   [](ScenarioConfig& c, const std::string& v) {                                   \
     c.expr = static_cast<decltype(c.expr)>(to_int(key, v));                       \
   }}
#define BOOL_FIELD(key, expr)                                                      \
  {key, [](const ScenarioConfig& c) { return c.expr ? "true" : "false"; },         \
   [](ScenarioConfig& c, const std::string& v) { c.expr = to_bool(key, v); }}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      DBL_FIELD("motion.sample_interval", sample_interval),
      DBL_FIELD("motion.survival_prob", survival_prob),
      DBL_FIELD("sensor.a", sensor.a),
      DBL_FIELD("sensor.pd_max", sensor.pd_max),
      DBL_FIELD("sensor.zeta0", sensor.zeta0),
      DBL_FIELD("sensor.beta_zeta", sensor.beta_zeta),
      DBL_FIELD("sensor.phi0", sensor.phi0),
      DBL_FIELD("sensor.beta_phi", sensor.beta_phi),
      DBL_FIELD("sensor.lambda_c", sensor.lambda_c),
      DBL_FIELD("control.delta_r", control.delta_r),
      INT_FIELD("control.n_r", control.n_r),
      INT_FIELD("control.n_theta", control.n_theta),
      DBL_FIELD("area.width", area_width),
      DBL_FIELD("area.height", area_height),
      DBL_FIELD("grid.cell", grid_cell),
      DBL_FIELD("grid.decay_j", decay_j),
      DBL_FIELD("grid.beta", beta),
      DBL_FIELD("grid.eps0", eps0),
      DBL_FIELD("filter.birth_rate", birth.rate),
      INT_FIELD("filter.birth_particles", birth.particles_per_step),
      DBL_FIELD("filter.velocity_sigma", birth.velocity_sigma),
      DBL_FIELD("filter.rho", rho),
      INT_FIELD("filter.kmeans_restarts", kmeans_restarts),
      INT_FIELD("planner.connectivity", connectivity),
      DBL_FIELD("planner.replan_fraction", replan_fraction),
      DBL_FIELD("tracker.alpha", alpha),
      INT_FIELD("tracker.h_lost", h_lost),
      INT_FIELD("overlap.window", overlap_window),
      DBL_FIELD("overlap.cutoff", overlap_cutoff),
      DBL_FIELD("overlap.q_threshold", q_threshold),
      BOOL_FIELD("overlap.detection", overlap_detection),
      DBL_FIELD("comm.range", comm_range),
      INT_FIELD("agents.count", n_agents),
      BOOL_FIELD("agents.random_search", random_search),
      INT_FIELD("targets.count", targets.count),
      {"targets.spawn",
       [](const ScenarioConfig& c) {
         return std::string(c.targets.spawn == TargetScript::Spawn::Center ? "center" : "uniform");
       },
       [](ScenarioConfig& c, const std::string& v) {
         if (v == "center")
           c.targets.spawn = TargetScript::Spawn::Center;
         else if (v == "uniform")
           c.targets.spawn = TargetScript::Spawn::Uniform;
         else
           throw ConfigError("targets.spawn: expected uniform|center, got '" + v + "'");
       }},
      INT_FIELD("targets.birth_window", targets.birth_window),
      DBL_FIELD("targets.lifetime_mean", targets.lifetime_mean),
      DBL_FIELD("targets.speed", targets.speed),
      INT_FIELD("sim.horizon", horizon),
      INT_FIELD("sim.seed", seed),
      DBL_FIELD("metrics.theta_s", theta_s),
      DBL_FIELD("metrics.eps_track", eps_track),
      DBL_FIELD("metrics.ospa_cutoff", ospa_cutoff),
  };
  return f;
}

#undef DBL_FIELD
#undef INT_FIELD
#undef BOOL_FIELD

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void ScenarioConfig::validate() const {
  auto rule = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  rule(sample_interval > 0, "motion.sample_interval: must be positive");
  rule(survival_prob > 0 && survival_prob <= 1, "motion.survival_prob: must be in (0, 1]");
  rule(sensor.a > 0, "sensor.a: must be positive");
  rule(sensor.pd_max > 0 && sensor.pd_max <= 1, "sensor.pd_max: must be in (0, 1]");
  rule(sensor.zeta0 >= 0 && sensor.beta_zeta >= 0 && sensor.phi0 >= 0 && sensor.beta_phi >= 0,
       "sensor noise coefficients must be nonnegative");
  rule(sensor.lambda_c >= 0, "sensor.lambda_c: must be nonnegative");
  rule(control.delta_r > 0, "control.delta_r: must be positive");
  rule(control.n_r >= 0 && control.n_theta >= 1, "control.n_r/n_theta: invalid action lattice");
  rule(area_width > 0 && area_height > 0, "area: dimensions must be positive");
  rule(grid_cell > 0, "grid.cell: must be positive");
  rule(decay_j > 0 && decay_j <= 1, "grid.decay_j: must be in (0, 1]");
  rule(beta > 0 && beta < 1, "grid.beta: must be in (0, 1)");
  rule(eps0 > 0 && eps0 <= 1, "grid.eps0: must be in (0, 1]");
  rule(rho > 0, "filter.rho: must be positive");
  rule(connectivity == 4 || connectivity == 8, "planner.connectivity: must be 4 or 8");
  rule(alpha > 0 && alpha < 1, "tracker.alpha: must be in (0, 1)");
  rule(h_lost >= 1, "tracker.h_lost: must be >= 1");
  rule(overlap_window >= 1, "overlap.window: must be >= 1");
  rule(overlap_cutoff > 0, "overlap.cutoff: must be positive");
  rule(comm_range >= std::sqrt(2.0) * sensor.a / 2.0,
       "comm.range: must be >= sqrt(2)*a/2 (communication covers the sensing range)");
  rule(n_agents >= 1, "agents.count: must be >= 1");
  rule(horizon >= 1, "sim.horizon: must be >= 1");
  rule(ospa_cutoff > 0, "metrics.ospa_cutoff: must be positive");
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    bool found = false;
    for (const Field& f : fields()) {
      if (f.name == key) {
        f.set(c, value);
        found = true;
        break;
      }
    }
    if (!found) throw ConfigError("unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string save_config(const ScenarioConfig& c) {
  std::string out;
  for (const Field& f : fields()) {
    out += f.name;
    out += " = ";
    out += f.get(c);
    out += "\n";
  }
  return out;
}

}  // namespace sat
