#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "magicsim/config.hpp"

namespace magicsim {

struct CharacterizeOptions {
  int devices = 17;
  int cycles = 100;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  int yield_sets = 100;  // 0 disables the gate-yield harness
};

/// Monte Carlo SET/RESET cycling: emits hrs_cdf.csv / lrs_cdf.csv
/// (resistance_ohm, cdf), an SVG CDF plot and, when yield_sets > 0, a
/// gate-yield report over that many sampled device sets.
nlohmann::json cmd_characterize(const Config& config,
                                const CharacterizeOptions& options);

/// Runs one OR/NOT gate case with full initialization on a nominal array;
/// writes exec trace CSV + switch-event JSON under out_dir. "match" in the
/// result tells whether the output equals the ideal gate.
nlohmann::json cmd_gate(const Config& config, const std::string& kind,
                        const std::string& input_bits, const std::string& mode,
                        const std::string& out_dir);

/// parse -> lower -> map -> simulate. Returns the result bit plus fine and
/// coarse energy accountings; optionally writes the schedule JSON.
nlohmann::json cmd_run(const Config& config, const std::string& expr_text,
                       const std::map<std::string, int>& assignment,
                       const std::string& emit_schedule_path);

/// The four-row OR comparison: init/read from cost-table constants, exec
/// from both the hardware measurement constants (provenance "measured") and
/// this simulator (provenance "simulated").
nlohmann::json cmd_table4(const Config& config);

/// Six-case nominal margin report.
nlohmann::json cmd_calibrate(const Config& config);

std::string render_gate_text(const nlohmann::json& j);
std::string render_calibrate_text(const nlohmann::json& j);
std::string render_run_text(const nlohmann::json& j);
std::string render_table4_text(const nlohmann::json& j);
std::string render_characterize_text(const nlohmann::json& j);

}  // namespace magicsim
