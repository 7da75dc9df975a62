#include "magicsim/config.hpp"

#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

namespace magicsim {

void Config::validate() const {
  device.validate();
  transistor.validate();
  variability.validate();
  geometry.validate();
  energy.validate();
  if (sim.steps < 2 || sim.read_steps < 2) {
    throw ConfigError("sim.steps and sim.read_steps must be at least 2");
  }
  const double durations[] = {sim.set_duration, sim.reset_duration,
                              sim.exec_duration, sim.read_duration};
  for (double d : durations) {
    if (!(d > 0.0)) throw ConfigError("protocol durations must be positive");
  }
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for " + key + ": '" + value + "'");
  }
  if (used != value.size()) {
    throw ConfigError("bad numeric value for " + key + ": '" + value + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw ConfigError("expected integer for " + key + ": '" + value + "'");
  }
  return i;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("expected boolean for " + key + ": '" + value + "'");
}

// "1.6:500e-6,5:2e-3"
std::vector<std::pair<double, double>> parse_compliance(const std::string& key,
                                                        const std::string& value) {
  std::vector<std::pair<double, double>> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("bad compliance entry for " + key + ": '" + item + "'");
    }
    out.emplace_back(parse_double(key, item.substr(0, colon)),
                     parse_double(key, item.substr(colon + 1)));
  }
  if (out.empty()) throw ConfigError("empty compliance list for " + key);
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

void apply(Config& c, const std::string& key, const std::string& value) {
  if (key == "device.r_hrs_ohm") c.device.r_hrs = parse_double(key, value);
  else if (key == "device.r_lrs_ohm") c.device.r_lrs = parse_double(key, value);
  else if (key == "device.v_set_th_v") c.device.v_set_th = parse_double(key, value);
  else if (key == "device.v_reset_th_v") c.device.v_reset_th = parse_double(key, value);
  else if (key == "device.i_hold_a") c.device.i_hold = parse_double(key, value);
  else if (key == "device.i_reset_min_a") c.device.i_reset_min = parse_double(key, value);
  else if (key == "transistor.v_gate_on_v") c.transistor.v_gate_on = parse_double(key, value);
  else if (key == "transistor.r_on_ohm") c.transistor.r_on = parse_double(key, value);
  else if (key == "transistor.compliance") c.transistor.compliance = parse_compliance(key, value);
  else if (key == "variability.hrs_log_mean") c.variability.hrs_log_mean = parse_double(key, value);
  else if (key == "variability.hrs_log_sigma") c.variability.hrs_log_sigma = parse_double(key, value);
  else if (key == "variability.c2c_sigma") c.variability.c2c_sigma = parse_double(key, value);
  else if (key == "variability.seed") c.variability.seed = static_cast<std::uint64_t>(parse_double(key, value));
  else if (key == "geometry.rows") c.geometry.rows = parse_int(key, value);
  else if (key == "geometry.cols") c.geometry.cols = parse_int(key, value);
  else if (key == "sim.steps") c.sim.steps = parse_int(key, value);
  else if (key == "sim.read_steps") c.sim.read_steps = parse_int(key, value);
  else if (key == "sim.set_duration_s") c.sim.set_duration = parse_double(key, value);
  else if (key == "sim.reset_duration_s") c.sim.reset_duration = parse_double(key, value);
  else if (key == "sim.exec_duration_s") c.sim.exec_duration = parse_double(key, value);
  else if (key == "sim.read_duration_s") c.sim.read_duration = parse_double(key, value);
  else if (key == "energy.set_full_nj") c.energy.set_full_nj = parse_double(key, value);
  else if (key == "energy.reset_full_nj") c.energy.reset_full_nj = parse_double(key, value);
  else if (key == "energy.set_opt_nj") c.energy.set_opt_nj = parse_double(key, value);
  else if (key == "energy.reset_opt_nj") c.energy.reset_opt_nj = parse_double(key, value);
  else if (key == "energy.read_lrs_nj") c.energy.read_lrs_nj = parse_double(key, value);
  else if (key == "energy.read_hrs_nj") c.energy.read_hrs_nj = parse_double(key, value);
  else if (key == "compiler.nary_or") c.compiler.nary_or = parse_bool(key, value);
  else throw ConfigError("unknown config key: " + key);
}

}  // namespace

Config load_config(std::istream& is) {
  Config c;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key=value, got '" + t + "'");
    }
    apply(c, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  // Keep the cost-table durations in step with the protocol durations.
  c.energy.set_duration_s = c.sim.set_duration;
  c.energy.reset_duration_s = c.sim.reset_duration;
  c.energy.read_duration_s = c.sim.read_duration;
  c.validate();
  return c;
}

Config load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  return load_config(f);
}

Config resolve_config(const std::string& config_flag) {
  if (!config_flag.empty()) return load_config_file(config_flag);
  if (const char* env = std::getenv("MAGICSIM_CONFIG"); env != nullptr && *env) {
    return load_config_file(env);
  }
  Config c;
  c.validate();
  return c;
}

}  // namespace magicsim
