#pragma once

#include <iosfwd>
#include <string>

#include "magicsim/compiler.hpp"
#include "magicsim/energy.hpp"

namespace magicsim {

/// Runtime configuration, loaded from a key=value file with dotted section
/// keys (device.r_hrs_ohm, sim.steps, ...). Unknown keys are rejected; all
/// values are validated against their type invariants at load time.
///
/// The variability section feeds the characterize/yield harnesses; single
/// gate and expression runs use zero-variance nominal devices so their exit
/// codes are deterministic.
struct Config {
  DeviceParams device;
  TransistorParams transistor;
  VariabilitySpec variability;
  ArrayGeometry geometry;
  EngineOptions sim;
  CostTable energy;
  CompilerOptions compiler;

  void validate() const;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Config load_config(std::istream& is);
Config load_config_file(const std::string& path);

/// --config flag if given, else $MAGICSIM_CONFIG, else defaults.
Config resolve_config(const std::string& config_flag);

}  // namespace magicsim
