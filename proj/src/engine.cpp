#include "magicsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace magicsim {

namespace {

void require_in_bounds(const CrossbarState& state, CellAddress cell,
                       const char* what) {
  if (!state.in_bounds(cell)) {
    throw std::invalid_argument(std::string(what) + ": cell out of bounds");
  }
}

ProtocolSpec blank_protocol(const CrossbarState& state, std::string name,
                            double duration, double dt) {
  ProtocolSpec p;
  p.name = std::move(name);
  p.duration = duration;
  p.dt = dt;
  p.wl.assign(state.wl.size(), LineDrive::floating());
  p.sl.assign(state.sl.size(), LineDrive::floating());
  p.bl.assign(state.bl.size(), LineDrive::floating());
  return p;
}

void require_shared_column(const std::vector<CellAddress>& cells,
                           const char* what) {
  for (std::size_t i = 1; i < cells.size(); ++i) {
    if (cells[i].col != cells[0].col) {
      throw std::invalid_argument(std::string(what) +
                                  ": gate cells must share a column");
    }
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = i + 1; j < cells.size(); ++j) {
      if (cells[i].row == cells[j].row) {
        throw std::invalid_argument(std::string(what) +
                                    ": gate cells must occupy distinct rows");
      }
    }
  }
}

}  // namespace

ProtocolSpec protocol_set(const CrossbarState& state, CellAddress cell,
                          const EngineOptions& opt) {
  require_in_bounds(state, cell, "protocol_set");
  ProtocolSpec p = blank_protocol(state, "SET", opt.set_duration,
                                  opt.set_duration / opt.steps);
  p.bl[static_cast<std::size_t>(cell.col)] =
      LineDrive::driven(Waveform::triangle(opt.v_set_peak, opt.set_duration));
  p.wl[static_cast<std::size_t>(cell.col)] =
      LineDrive::driven(Waveform::dc(opt.v_gate_set, opt.set_duration));
  p.sl[static_cast<std::size_t>(cell.row)] = LineDrive::grounded();
  p.roles["target"] = cell;
  return p;
}

ProtocolSpec protocol_reset(const CrossbarState& state, CellAddress cell,
                            const EngineOptions& opt) {
  require_in_bounds(state, cell, "protocol_reset");
  ProtocolSpec p = blank_protocol(state, "RESET", opt.reset_duration,
                                  opt.reset_duration / opt.steps);
  p.sl[static_cast<std::size_t>(cell.row)] =
      LineDrive::driven(Waveform::triangle(opt.v_reset_peak, opt.reset_duration));
  p.wl[static_cast<std::size_t>(cell.col)] =
      LineDrive::driven(Waveform::dc(opt.v_gate_reset, opt.reset_duration));
  p.bl[static_cast<std::size_t>(cell.col)] = LineDrive::grounded();
  p.roles["target"] = cell;
  return p;
}

ProtocolSpec protocol_read(const CrossbarState& state, CellAddress cell,
                           const EngineOptions& opt) {
  require_in_bounds(state, cell, "protocol_read");
  ProtocolSpec p = blank_protocol(state, "READ", opt.read_duration,
                                  opt.read_duration / opt.read_steps);
  p.bl[static_cast<std::size_t>(cell.col)] =
      LineDrive::driven(Waveform::dc(opt.v_read, opt.read_duration));
  p.wl[static_cast<std::size_t>(cell.col)] =
      LineDrive::driven(Waveform::dc(opt.v_gate_on, opt.read_duration));
  p.sl[static_cast<std::size_t>(cell.row)] = LineDrive::grounded();
  p.roles["target"] = cell;
  return p;
}

ProtocolSpec protocol_exec_or(const CrossbarState& state,
                              const std::vector<CellAddress>& inputs,
                              CellAddress output, const EngineOptions& opt) {
  if (inputs.empty()) {
    throw std::invalid_argument("exec_or: at least one input cell required");
  }
  std::vector<CellAddress> all = inputs;
  all.push_back(output);
  for (const auto& c : all) require_in_bounds(state, c, "exec_or");
  require_shared_column(all, "exec_or");

  ProtocolSpec p = blank_protocol(state, "EXEC_OR", opt.exec_duration,
                                  opt.exec_duration / opt.steps);
  for (const auto& in : inputs) {
    p.sl[static_cast<std::size_t>(in.row)] =
        LineDrive::driven(Waveform::triangle(opt.v_exe_or, opt.exec_duration));
  }
  p.sl[static_cast<std::size_t>(output.row)] = LineDrive::grounded();
  p.wl[static_cast<std::size_t>(output.col)] =
      LineDrive::driven(Waveform::dc(opt.v_gate_on, opt.exec_duration));
  // Shared BL stays floating: it is the summing node.
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    p.roles["x" + std::to_string(i + 1)] = inputs[i];
  }
  p.roles["y_out"] = output;
  return p;
}

ProtocolSpec protocol_exec_not(const CrossbarState& state, CellAddress x1,
                               CellAddress x_in, CellAddress y_out,
                               const EngineOptions& opt) {
  std::vector<CellAddress> all = {x1, x_in, y_out};
  for (const auto& c : all) require_in_bounds(state, c, "exec_not");
  require_shared_column(all, "exec_not");

  ProtocolSpec p = blank_protocol(state, "EXEC_NOT", opt.exec_duration,
                                  opt.exec_duration / opt.steps);
  p.sl[static_cast<std::size_t>(x1.row)] =
      LineDrive::driven(Waveform::triangle(opt.v_exe_not, opt.exec_duration));
  p.sl[static_cast<std::size_t>(x_in.row)] = LineDrive::driven(
      Waveform::triangle(opt.v_exe_not / 3.0, opt.exec_duration));
  p.sl[static_cast<std::size_t>(y_out.row)] = LineDrive::grounded();
  p.wl[static_cast<std::size_t>(y_out.col)] =
      LineDrive::driven(Waveform::dc(opt.v_gate_on, opt.exec_duration));
  p.roles["x1"] = x1;
  p.roles["x_in"] = x_in;
  p.roles["y_out"] = y_out;
  return p;
}

ExecutionTrace run_protocol(CrossbarState& state, const ProtocolSpec& proto) {
  state.wl = proto.wl;
  state.sl = proto.sl;
  state.bl = proto.bl;
  ExecutionTrace trace = run_transient(state, proto.duration, proto.dt);
  state.float_all_lines();
  return trace;
}

ReadResult read_cell(CrossbarState& state, CellAddress cell,
                     const EngineOptions& opt) {
  const ProtocolSpec p = protocol_read(state, cell, opt);
  ExecutionTrace trace = run_protocol(state, p);
  const std::size_t mid = trace.samples.size() / 2;
  const double i =
      trace.samples[mid].current[static_cast<std::size_t>(state.index(cell))];
  ReadResult r;
  r.logic = state.logic(cell);
  r.current = i;
  r.trace = std::move(trace);
  return r;
}

ExecutionTrace init_cell(CrossbarState& state, CellAddress cell, int target,
                         const EngineOptions& opt) {
  if (target != 0 && target != 1) {
    throw std::invalid_argument("init_cell: target must be 0 or 1");
  }
  const ProtocolSpec p = target == 1 ? protocol_set(state, cell, opt)
                                     : protocol_reset(state, cell, opt);
  return run_protocol(state, p);
}

namespace {

GateResult finish_gate(CrossbarState& state,
                       const std::vector<CellAddress>& inputs,
                       CellAddress output, ExecutionTrace exec_trace,
                       const EngineOptions& opt) {
  GateResult g;
  g.switched = std::any_of(exec_trace.events.begin(), exec_trace.events.end(),
                           [&](const SwitchEvent& e) { return e.cell == output; });
  g.exec_trace = std::move(exec_trace);
  for (const auto& in : inputs) {
    g.input_read_currents.push_back(read_cell(state, in, opt).current);
  }
  ReadResult out = read_cell(state, output, opt);
  g.output = out.logic;
  g.read_current = out.current;
  return g;
}

}  // namespace

GateResult exec_or(CrossbarState& state, const std::vector<CellAddress>& inputs,
                   CellAddress output, const EngineOptions& opt) {
  const ProtocolSpec p = protocol_exec_or(state, inputs, output, opt);
  if (state.logic(output) != 0) {
    throw std::logic_error("exec_or: output cell must be initialized to HRS");
  }
  ExecutionTrace trace = run_protocol(state, p);
  return finish_gate(state, inputs, output, std::move(trace), opt);
}

GateResult exec_not(CrossbarState& state, CellAddress x1, CellAddress x_in,
                    CellAddress y_out, const EngineOptions& opt) {
  const ProtocolSpec p = protocol_exec_not(state, x1, x_in, y_out, opt);
  if (state.logic(x1) != 1) {
    throw std::logic_error("exec_not: x1 must be initialized to LRS");
  }
  if (state.logic(y_out) != 0) {
    throw std::logic_error("exec_not: output cell must be initialized to HRS");
  }
  ExecutionTrace trace = run_protocol(state, p);
  return finish_gate(state, {x1, x_in}, y_out, std::move(trace), opt);
}

bool TruthTableResult::all_correct() const {
  for (const auto& c : cases) {
    int expected = 0;
    if (kind == GateKind::Or) {
      for (int b : c.inputs) expected |= b;
    } else {
      expected = 1 - c.inputs[0];
    }
    if (c.output != expected) return false;
  }
  return !cases.empty();
}

TruthTableResult run_truth_table(GateKind kind, CrossbarState& state,
                                 const EngineOptions& opt) {
  TruthTableResult result;
  result.kind = kind;
  const CellAddress a{0, 0}, b{1, 0}, y{2, 0};
  if (kind == GateKind::Or) {
    for (int bits = 0; bits < 4; ++bits) {
      const int va = (bits >> 1) & 1;
      const int vb = bits & 1;
      TruthTableCase tc;
      tc.inputs = {va, vb};
      GateResult g;
      g.init_traces.push_back(init_cell(state, a, va, opt));
      g.init_traces.push_back(init_cell(state, b, vb, opt));
      g.init_traces.push_back(init_cell(state, y, 0, opt));
      GateResult run = exec_or(state, {a, b}, y, opt);
      run.init_traces = std::move(g.init_traces);
      tc.output = run.output;
      tc.read_current = run.read_current;
      tc.switched = run.switched;
      tc.input_read_currents = run.input_read_currents;
      tc.gate = std::move(run);
      result.cases.push_back(std::move(tc));
    }
  } else {
    for (int vin = 0; vin < 2; ++vin) {
      TruthTableCase tc;
      tc.inputs = {vin};
      GateResult g;
      g.init_traces.push_back(init_cell(state, a, 1, opt));    // x1 helper
      g.init_traces.push_back(init_cell(state, b, vin, opt));  // x_in
      g.init_traces.push_back(init_cell(state, y, 0, opt));
      GateResult run = exec_not(state, a, b, y, opt);
      run.init_traces = std::move(g.init_traces);
      tc.output = run.output;
      tc.read_current = run.read_current;
      tc.switched = run.switched;
      tc.input_read_currents = run.input_read_currents;
      tc.gate = std::move(run);
      result.cases.push_back(std::move(tc));
    }
  }
  return result;
}

std::pair<int, int> count_init_ops(int input_a, int input_b) {
  const int n_set = input_a + input_b;
  const int n_reset = (1 - input_a) + (1 - input_b) + 1;
  return {n_set, n_reset};
}

bool CalibrationReport::all_pass() const {
  return !cases.empty() &&
         std::all_of(cases.begin(), cases.end(),
                     [](const CalibrationCase& c) { return c.pass; });
}

namespace {

// Frozen nodal sweep over the execution ramp: no event feedback, the
// output stays at HRS while we track its voltage and the hypothetical
// post-switch current. Input stress is evaluated with the output at LRS
// (the worst case once the gate has fired).
CalibrationCase analyze_case(const std::string& name, std::vector<int> inputs,
                             int expected, GateKind kind,
                             const DeviceParams& params,
                             const TransistorParams& transistor,
                             ArrayGeometry geom, const EngineOptions& opt) {
  CalibrationCase cc;
  cc.name = name;
  cc.inputs = inputs;
  cc.expected = expected;
  cc.v_set_th = params.v_set_th;
  cc.i_hold = params.i_hold;

  CrossbarState state = build_array(geom, nominal_spec(params), params, transistor);

  const CellAddress a{0, 0}, b{1, 0}, y{2, 0};
  std::vector<CellAddress> gate_inputs;
  ProtocolSpec proto;
  if (kind == GateKind::Or) {
    state.device(a).resistance = inputs[0] ? params.r_lrs : params.r_hrs;
    state.device(b).resistance = inputs[1] ? params.r_lrs : params.r_hrs;
    gate_inputs = {a, b};
    proto = protocol_exec_or(state, gate_inputs, y, opt);
  } else {
    state.device(a).resistance = params.r_lrs;  // x1 helper
    state.device(b).resistance = inputs[0] ? params.r_lrs : params.r_hrs;
    gate_inputs = {a, b};
    proto = protocol_exec_not(state, a, b, y, opt);
  }
  state.device(y).resistance = params.r_hrs;

  state.wl = proto.wl;
  state.sl = proto.sl;
  state.bl = proto.bl;
  const std::size_t y_idx = static_cast<std::size_t>(state.index(y));
  const int sweep = 400;
  for (int k = 0; k <= sweep; ++k) {
    const double t = proto.duration * k / sweep;
    const NodeSolution sol = solve_instant(state, t);
    cc.peak_v_out_device = std::max(cc.peak_v_out_device, sol.v_device[y_idx]);
    const NodeSolution post = solve_instant(state, t, y, params.r_lrs);
    cc.max_i_post = std::max(cc.max_i_post, post.current[y_idx]);
    for (const auto& in : gate_inputs) {
      const std::size_t idx = static_cast<std::size_t>(state.index(in));
      cc.max_input_stress_v =
          std::max(cc.max_input_stress_v, -post.v_device[idx]);
      cc.max_input_stress_i =
          std::max(cc.max_input_stress_i, std::abs(post.current[idx]));
    }
  }
  state.float_all_lines();
  cc.voltage_margin_pct =
      100.0 * (cc.peak_v_out_device - params.v_set_th) / params.v_set_th;
  cc.current_margin_pct =
      100.0 * (cc.max_i_post - params.i_hold) / params.i_hold;

  // Observed output from the real event-driven transient.
  CrossbarState run_state = state;
  GateResult g = kind == GateKind::Or ? exec_or(run_state, gate_inputs, y, opt)
                                      : exec_not(run_state, a, b, y, opt);
  cc.observed = g.output;
  cc.pass = cc.observed == cc.expected;
  return cc;
}

}  // namespace

CalibrationReport calibrate_margins(const DeviceParams& params,
                                    const TransistorParams& transistor,
                                    ArrayGeometry geom,
                                    const EngineOptions& opt) {
  params.validate();
  transistor.validate();
  CalibrationReport report;
  for (int bits = 0; bits < 4; ++bits) {
    const int a = (bits >> 1) & 1;
    const int b = bits & 1;
    report.cases.push_back(analyze_case(
        "OR " + std::to_string(a) + std::to_string(b), {a, b}, a | b,
        GateKind::Or, params, transistor, geom, opt));
  }
  for (int vin = 0; vin < 2; ++vin) {
    report.cases.push_back(analyze_case("NOT " + std::to_string(vin), {vin},
                                        1 - vin, GateKind::Not, params,
                                        transistor, geom, opt));
  }
  return report;
}

void print_calibration(const CalibrationReport& report, std::ostream& os) {
  os << std::left << std::setw(8) << "case" << std::right << std::setw(10)
     << "expected" << std::setw(10) << "observed" << std::setw(14)
     << "peak V_out" << std::setw(14) << "i_post [uA]" << std::setw(12)
     << "V margin%" << std::setw(12) << "I margin%" << std::setw(16)
     << "in stress [V]" << std::setw(8) << "pass" << "\n";
  for (const auto& c : report.cases) {
    os << std::left << std::setw(8) << c.name << std::right << std::setw(10)
       << c.expected << std::setw(10) << c.observed << std::setw(14)
       << std::fixed << std::setprecision(4) << c.peak_v_out_device
       << std::setw(14) << std::setprecision(2) << c.max_i_post * 1e6
       << std::setw(12) << std::setprecision(1) << c.voltage_margin_pct
       << std::setw(12) << c.current_margin_pct << std::setw(16)
       << std::setprecision(3) << c.max_input_stress_v << std::setw(8)
       << (c.pass ? "yes" : "NO") << "\n";
  }
  os.unsetf(std::ios::floatfield);
}

}  // namespace magicsim
