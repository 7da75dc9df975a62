// magicsim command-line front end. Exit codes: 0 = success (and, for gate/run,
// the computed output matches the ideal value), 1 = runtime failure or logic
// mismatch, 2 = usage or validation error.

#include <exception>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "magicsim/commands.hpp"
#include "magicsim/compiler.hpp"

namespace {

std::map<std::string, int> parse_assignment(const std::string& text) {
  std::map<std::string, int> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= item.size()) {
      throw std::invalid_argument("bad --assign entry '" + item +
                                  "', expected name=0|1");
    }
    const std::string name = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (value != "0" && value != "1") {
      throw std::invalid_argument("bad --assign value for " + name +
                                  ", expected 0 or 1");
    }
    out[name] = value == "1";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MAGIC stateful-logic simulator for a 1T1R resistive crossbar"};
  app.require_subcommand(1);

  std::string config_path;
  bool as_json = false;
  app.add_option("--config", config_path,
                 "config file (key=value); overrides $MAGICSIM_CONFIG");
  app.add_flag("--json", as_json, "emit machine-readable JSON");

  auto* gate = app.add_subcommand("gate", "run one OR/NOT gate case");
  std::string gate_kind, gate_inputs, gate_mode = "full", gate_out = "out";
  gate->add_option("kind", gate_kind, "or | not")->required();
  gate->add_option("--inputs", gate_inputs, "input bits, e.g. 01")->required();
  gate->add_option("--mode", gate_mode, "full | optimal");
  gate->add_option("--out-dir", gate_out, "directory for trace artifacts");

  auto* run = app.add_subcommand("run", "compile and simulate an expression");
  std::string run_expr, run_assign, run_emit;
  run->add_option("expr", run_expr, "boolean expression, e.g. '(a&b)|!c'")
      ->required();
  run->add_option("--assign", run_assign, "comma list, e.g. a=1,b=0")
      ->required();
  run->add_option("--emit-schedule", run_emit, "write the micro-op schedule");

  auto* table4 =
      app.add_subcommand("table4", "per-case OR energy comparison table");

  auto* characterize =
      app.add_subcommand("characterize", "Monte Carlo cycling + gate yield");
  magicsim::CharacterizeOptions copt;
  characterize->add_option("--devices", copt.devices, "devices to cycle");
  characterize->add_option("--cycles", copt.cycles, "cycles per device");
  characterize->add_option("--seed", copt.seed, "RNG seed");
  characterize->add_option("--out-dir", copt.out_dir, "output directory");
  characterize->add_option("--yield-sets", copt.yield_sets,
                           "sampled arrays for the yield report (0 = skip)");

  auto* calibrate =
      app.add_subcommand("calibrate", "nominal switching-margin report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const magicsim::Config config = magicsim::resolve_config(config_path);
    nlohmann::json result;
    std::string text;
    bool match = true;
    if (gate->parsed()) {
      result = magicsim::cmd_gate(config, gate_kind, gate_inputs, gate_mode,
                                  gate_out);
      text = magicsim::render_gate_text(result);
      match = result["match"].get<bool>();
    } else if (run->parsed()) {
      result = magicsim::cmd_run(config, run_expr,
                                 parse_assignment(run_assign), run_emit);
      text = magicsim::render_run_text(result);
      match = result["match"].get<bool>();
    } else if (table4->parsed()) {
      result = magicsim::cmd_table4(config);
      text = magicsim::render_table4_text(result);
    } else if (characterize->parsed()) {
      result = magicsim::cmd_characterize(config, copt);
      text = magicsim::render_characterize_text(result);
    } else if (calibrate->parsed()) {
      result = magicsim::cmd_calibrate(config);
      text = magicsim::render_calibrate_text(result);
      match = result["all_pass"].get<bool>();
    }
    if (as_json) {
      std::cout << result.dump(2) << '\n';
    } else {
      std::cout << text;
    }
    return match ? 0 : 1;
  } catch (const magicsim::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const magicsim::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
