#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "magicsim/crossbar.hpp"

namespace magicsim {

/// Cycle durations and step counts for the voltage protocols. dt defaults
/// to duration / steps for each protocol.
struct EngineOptions {
  double set_duration = 4e-3;     // s, full triangular SET cycle
  double reset_duration = 3.6e-3; // s
  double exec_duration = 4e-3;    // s, execution ramp (both gates)
  double read_duration = 0.6e-6;  // s, flat read pulse
  int steps = 2000;               // samples per protocol run
  int read_steps = 8;

  double v_set_peak = 1.8;   // V at TE
  double v_reset_peak = 2.0; // V at SL
  double v_gate_set = 1.6;   // V
  double v_gate_reset = 5.0; // V
  double v_gate_on = 3.3;    // V, exec/read gate drive
  double v_exe_or = 3.3;     // V
  double v_exe_not = 1.5;    // V (x_in gets v_exe_not / 3)
  double v_read = 0.5;       // V
};

/// A named drive assignment for every line plus the cells of interest.
struct ProtocolSpec {
  std::string name;
  std::vector<LineDrive> wl, sl, bl;
  double duration = 0.0;
  double dt = 0.0;
  std::map<std::string, CellAddress> roles;  // x1, x2, x_in, y_out, ...
};

struct MicroOp {
  enum class Kind { Init, ExecOr, ExecNot, Read };
  Kind kind = Kind::Init;
  std::vector<CellAddress> cells;  // ExecOr: inputs then output;
                                   // ExecNot: x1, x_in, y_out; else one cell
  // Init target: exactly one of the three below is meaningful.
  int value = -1;          // 0 or 1
  std::string input_name;  // bound from the runtime assignment
  CellAddress copy_from;   // read-assisted copy source
  bool has_copy_from = false;
};

struct GateResult {
  int output = 0;
  double read_current = 0.0;  // A
  bool switched = false;
  ExecutionTrace exec_trace;
  std::vector<ExecutionTrace> init_traces;
  std::vector<double> input_read_currents;  // A, one per input cell
};

ProtocolSpec protocol_set(const CrossbarState& state, CellAddress cell,
                          const EngineOptions& opt = {});
ProtocolSpec protocol_reset(const CrossbarState& state, CellAddress cell,
                            const EngineOptions& opt = {});
ProtocolSpec protocol_read(const CrossbarState& state, CellAddress cell,
                           const EngineOptions& opt = {});
ProtocolSpec protocol_exec_or(const CrossbarState& state,
                              const std::vector<CellAddress>& inputs,
                              CellAddress output,
                              const EngineOptions& opt = {});
ProtocolSpec protocol_exec_not(const CrossbarState& state, CellAddress x1,
                               CellAddress x_in, CellAddress y_out,
                               const EngineOptions& opt = {});

/// Runs the protocol's transient on the state; drives are restored to
/// floating afterwards.
ExecutionTrace run_protocol(CrossbarState& state, const ProtocolSpec& proto);

struct ReadResult {
  int logic = 0;
  double current = 0.0;  // A
  ExecutionTrace trace;
};

ReadResult read_cell(CrossbarState& state, CellAddress cell,
                     const EngineOptions& opt = {});

/// SET (target 1) or RESET (target 0) the cell; idempotent.
ExecutionTrace init_cell(CrossbarState& state, CellAddress cell, int target,
                         const EngineOptions& opt = {});

GateResult exec_or(CrossbarState& state, const std::vector<CellAddress>& inputs,
                   CellAddress output, const EngineOptions& opt = {});
GateResult exec_not(CrossbarState& state, CellAddress x1, CellAddress x_in,
                    CellAddress y_out, const EngineOptions& opt = {});

enum class GateKind { Or, Not };

struct TruthTableCase {
  std::vector<int> inputs;
  int output = 0;
  double read_current = 0.0;
  bool switched = false;
  std::vector<double> input_read_currents;
  GateResult gate;
};

struct TruthTableResult {
  GateKind kind = GateKind::Or;
  std::vector<TruthTableCase> cases;
  bool all_correct() const;
};

/// Full initialization per case (one Init per participating device), then
/// execution and an output read. Default cell placement: column 0, rows
/// 0/1/2.
TruthTableResult run_truth_table(GateKind kind, CrossbarState& state,
                                 const EngineOptions& opt = {});

/// (n_set, n_reset) init ops for a two-input OR: SET per input 1, RESET per
/// input 0, plus one RESET for the output.
std::pair<int, int> count_init_ops(int input_a, int input_b);

struct CalibrationCase {
  std::string name;
  std::vector<int> inputs;
  int expected = 0;
  int observed = 0;
  bool pass = false;
  double peak_v_out_device = 0.0;  // V, TE-positive peak on the output cell
  double max_i_post = 0.0;         // A, hypothetical post-switch current peak
  double v_set_th = 0.0;
  double i_hold = 0.0;
  double voltage_margin_pct = 0.0;  // signed distance from v_set_th
  double current_margin_pct = 0.0;  // signed distance from i_hold
  double max_input_stress_v = 0.0;  // V, TE-negative peak on any input
  double max_input_stress_i = 0.0;  // A
};

struct CalibrationReport {
  std::vector<CalibrationCase> cases;
  bool all_pass() const;
};

/// Runs all six gate cases at the given nominal parameters and reports the
/// switching margins; any truth-table violation is flagged in the report.
CalibrationReport calibrate_margins(const DeviceParams& params,
                                    const TransistorParams& transistor,
                                    ArrayGeometry geom = {},
                                    const EngineOptions& opt = {});

void print_calibration(const CalibrationReport& report, std::ostream& os);

}  // namespace magicsim
