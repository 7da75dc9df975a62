#include "magicsim/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "magicsim/compiler.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace magicsim {

namespace {

// Per-case OR execution energies (nJ) from the hardware characterization
// this model is calibrated against, indexed by input pair 00,01,10,11.
constexpr double kMeasuredExecFullNj[4] = {139.0, 2455.0, 2300.0, 3531.0};
constexpr double kMeasuredExecOptNj[4] = {8.0, 108.0, 73.0, 134.0};

json breakdown_json(const EnergyBreakdown& b) {
  json j;
  j["mode"] = b.mode == EnergyMode::FullRamp ? "full" : "optimal";
  j["init_nj"] = b.init_nj;
  j["exec_nj"] = b.exec_nj;
  j["read_nj"] = b.read_nj;
  j["total_nj"] = b.total_nj;
  j["init_pct"] = b.init_pct;
  j["exec_pct"] = b.exec_pct;
  j["read_pct"] = b.read_pct;
  j["zero_total"] = b.zero_total;
  json items = json::array();
  for (const auto& it : b.items) {
    items.push_back({{"op", it.op}, {"energy_nj", it.energy_nj}});
  }
  j["items"] = std::move(items);
  return j;
}

MicroOp make_init(CellAddress c, int value) {
  MicroOp m;
  m.kind = MicroOp::Kind::Init;
  m.cells = {c};
  m.value = value;
  return m;
}

MicroOp make_read(CellAddress c) {
  MicroOp m;
  m.kind = MicroOp::Kind::Read;
  m.cells = {c};
  return m;
}

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

struct FineTally {
  double init_full = 0.0, init_opt = 0.0;
  double exec_full = 0.0, exec_opt = 0.0;
  double read = 0.0;  // flat pulse: full == optimal
};

void add_init(FineTally& t, const ExecutionTrace& trace, CellAddress cell,
              const DeviceParams& params) {
  t.init_full += integrate_energy(trace, full_window(trace));
  t.init_opt += integrate_energy(trace, detect_optimal_window(trace, cell, params));
}

EnergyBreakdown tally_to_breakdown(const FineTally& t, EnergyMode mode) {
  EnergyBreakdown b;
  b.mode = mode;
  if (mode == EnergyMode::FullRamp) {
    b.init_nj = t.init_full;
    b.exec_nj = t.exec_full;
  } else {
    b.init_nj = t.init_opt;
    b.exec_nj = t.exec_opt;
  }
  b.read_nj = t.read;
  b.finalize();
  return b;
}

}  // namespace

json cmd_gate(const Config& config, const std::string& kind,
              const std::string& input_bits, const std::string& mode,
              const std::string& out_dir) {
  if (kind != "or" && kind != "not") {
    throw std::invalid_argument("gate kind must be 'or' or 'not'");
  }
  if (mode != "full" && mode != "optimal") {
    throw std::invalid_argument("mode must be 'full' or 'optimal'");
  }
  const bool is_or = kind == "or";
  const std::size_t want = is_or ? 2u : 1u;
  if (input_bits.size() != want ||
      input_bits.find_first_not_of("01") != std::string::npos) {
    throw std::invalid_argument("inputs for '" + kind + "' must be " +
                                std::to_string(want) + " bits of 0/1");
  }
  std::vector<int> in;
  for (char c : input_bits) in.push_back(c - '0');
  const int expected = is_or ? (in[0] | in[1]) : (1 - in[0]);

  CrossbarState state = build_array(config.geometry, nominal_spec(config.device),
                                    config.device, config.transistor);
  const EngineOptions& opt = config.sim;

  // Column 0, rows 0..2: x1 (or the NOT helper), x2/x_in, output.
  const CellAddress a{0, 0}, b{1, 0}, y{2, 0};
  std::vector<std::pair<CellAddress, int>> inits;
  std::vector<CellAddress> read_cells;  // billed reads: the gate inputs
  if (is_or) {
    inits = {{a, in[0]}, {b, in[1]}, {y, 0}};
    read_cells = {a, b};
  } else {
    inits = {{a, 1}, {b, in[0]}, {y, 0}};
    read_cells = {b};
  }

  FineTally tally;
  for (const auto& [cell, value] : inits) {
    ExecutionTrace tr = init_cell(state, cell, value, opt);
    add_init(tally, tr, cell, state.device_params(cell));
  }

  GateResult g = is_or ? exec_or(state, {a, b}, y, opt)
                       : exec_not(state, a, b, y, opt);
  tally.exec_full = integrate_energy(g.exec_trace, full_window(g.exec_trace));
  tally.exec_opt = integrate_energy(
      g.exec_trace, detect_optimal_window(g.exec_trace, y, state.device_params(y)));

  json reads = json::array();
  for (CellAddress c : read_cells) {
    ReadResult rr = read_cell(state, c, opt);
    tally.read += integrate_energy(rr.trace, full_window(rr.trace));
    reads.push_back({{"row", c.row}, {"col", c.col},
                     {"logic", rr.logic}, {"current_a", rr.current}});
  }
  ReadResult out = read_cell(state, y, opt);
  tally.read += integrate_energy(out.trace, full_window(out.trace));

  // Coarse accounting over the same micro-op sequence.
  std::vector<MicroOp> schedule;
  for (const auto& [cell, value] : inits) schedule.push_back(make_init(cell, value));
  MicroOp exec;
  exec.kind = is_or ? MicroOp::Kind::ExecOr : MicroOp::Kind::ExecNot;
  exec.cells = is_or ? std::vector<CellAddress>{a, b, y}
                     : std::vector<CellAddress>{a, b, y};
  schedule.push_back(exec);
  for (CellAddress c : read_cells) schedule.push_back(make_read(c));
  schedule.push_back(make_read(y));
  const EnergyMode emode =
      mode == "full" ? EnergyMode::FullRamp : EnergyMode::Optimal;
  const double exec_sim =
      emode == EnergyMode::FullRamp ? tally.exec_full : tally.exec_opt;
  EnergyBreakdown coarse =
      coarse_cost(schedule, {}, config.energy, emode, {exec_sim});

  fs::create_directories(out_dir);
  const std::string trace_path = (fs::path(out_dir) / "exec_trace.csv").string();
  const std::string events_path = (fs::path(out_dir) / "exec_events.json").string();
  {
    std::ofstream f(trace_path);
    write_trace_csv(g.exec_trace, f);
  }
  {
    std::ofstream f(events_path);
    write_events_json(g.exec_trace, f);
  }

  json j;
  j["kind"] = kind;
  j["inputs"] = in;
  j["mode"] = mode;
  j["output"] = out.logic;
  j["expected"] = expected;
  j["match"] = out.logic == expected;
  j["switched"] = g.switched;
  j["output_read_current_a"] = out.current;
  j["input_reads"] = std::move(reads);
  j["coarse"] = breakdown_json(coarse);
  j["fine_full"] = breakdown_json(tally_to_breakdown(tally, EnergyMode::FullRamp));
  j["fine_optimal"] = breakdown_json(tally_to_breakdown(tally, EnergyMode::Optimal));
  j["files"] = {{"trace_csv", trace_path}, {"events_json", events_path}};
  return j;
}

json cmd_run(const Config& config, const std::string& expr_text,
             const std::map<std::string, int>& assignment,
             const std::string& emit_schedule_path) {
  const Expr parsed = parse_expr(expr_text);
  const std::vector<std::string> vars = collect_vars(parsed);
  for (const auto& v : vars) {
    auto it = assignment.find(v);
    if (it == assignment.end()) {
      throw std::invalid_argument("unbound variable: " + v);
    }
    if (it->second != 0 && it->second != 1) {
      throw std::invalid_argument("assignment for " + v + " must be 0 or 1");
    }
  }
  const Expr lowered = lower_to_or_not(parsed);
  Schedule schedule =
      allocate_and_emit(lowered, vars, config.geometry, config.compiler);
  check_schedule(schedule, config.geometry);

  if (!emit_schedule_path.empty()) {
    std::ofstream f(emit_schedule_path);
    if (!f) {
      throw std::runtime_error("cannot write schedule file: " +
                               emit_schedule_path);
    }
    write_schedule_json(schedule, f);
  }

  CrossbarState state = build_array(config.geometry, nominal_spec(config.device),
                                    config.device, config.transistor);
  SimulatedRun run =
      simulate_schedule(schedule, assignment, state, config.energy, config.sim);
  const int expected = evaluate_expr(parsed, assignment);

  json j;
  j["expr"] = expr_text;
  j["lowered"] = print_expr(lowered);
  j["vars"] = vars;
  json asg = json::object();
  for (const auto& v : vars) asg[v] = assignment.at(v);
  j["assignment"] = std::move(asg);
  j["ops"] = schedule.ops.size();
  j["output_cell"] = {{"row", schedule.output_cell.row},
                      {"col", schedule.output_cell.col}};
  j["output"] = run.output;
  j["expected"] = expected;
  j["match"] = run.output == expected;
  j["fine_full"] = breakdown_json(run.fine_full);
  j["fine_optimal"] = breakdown_json(run.fine_optimal);
  j["coarse_full"] = breakdown_json(run.coarse_full);
  j["coarse_optimal"] = breakdown_json(run.coarse_optimal);
  if (!emit_schedule_path.empty()) j["schedule_file"] = emit_schedule_path;
  return j;
}

json cmd_table4(const Config& config) {
  const CellAddress a{0, 0}, b{1, 0}, y{2, 0};
  json rows = json::array();
  for (int case_idx = 0; case_idx < 4; ++case_idx) {
    const int va = case_idx >> 1, vb = case_idx & 1;
    const auto [n_set, n_reset] = count_init_ops(va, vb);
    const CostTable& t = config.energy;
    const double init_full = n_set * t.set_full_nj + n_reset * t.reset_full_nj;
    const double init_opt = n_set * t.set_opt_nj + n_reset * t.reset_opt_nj;
    const double read_nj = (va ? t.read_lrs_nj : t.read_hrs_nj) +
                           (vb ? t.read_lrs_nj : t.read_hrs_nj);

    // Simulated execution energy on a fresh nominal array.
    CrossbarState state = build_array(config.geometry,
                                      nominal_spec(config.device),
                                      config.device, config.transistor);
    init_cell(state, a, va, config.sim);
    init_cell(state, b, vb, config.sim);
    init_cell(state, y, 0, config.sim);
    GateResult g = exec_or(state, {a, b}, y, config.sim);
    const double exec_sim_full =
        integrate_energy(g.exec_trace, full_window(g.exec_trace));
    const double exec_sim_opt = integrate_energy(
        g.exec_trace,
        detect_optimal_window(g.exec_trace, y, state.device_params(y)));

    json row;
    row["inputs"] = {va, vb};
    row["output"] = g.output;
    row["init"] = {{"full_nj", init_full}, {"optimal_nj", init_opt},
                   {"provenance", "constant"}};
    row["read"] = {{"nj", read_nj}, {"provenance", "constant"}};
    row["exec_measured"] = {{"full_nj", kMeasuredExecFullNj[case_idx]},
                            {"optimal_nj", kMeasuredExecOptNj[case_idx]},
                            {"provenance", "measured"}};
    row["exec_simulated"] = {{"full_nj", exec_sim_full},
                             {"optimal_nj", exec_sim_opt},
                             {"provenance", "simulated"}};
    for (const char* which : {"measured", "simulated"}) {
      const json& e = row[std::string("exec_") + which];
      const Percentages pf = breakdown_percentages(
          init_full, e["full_nj"].get<double>(), read_nj);
      const Percentages po = breakdown_percentages(
          init_opt, e["optimal_nj"].get<double>(), read_nj);
      row[std::string("pct_") + which] = {
          {"full", {{"init", pf.init}, {"exec", pf.exec}, {"read", pf.read}}},
          {"optimal", {{"init", po.init}, {"exec", po.exec}, {"read", po.read}}}};
    }
    rows.push_back(std::move(row));
  }
  json j;
  j["gate"] = "or";
  j["rows"] = std::move(rows);
  return j;
}

json cmd_calibrate(const Config& config) {
  const CalibrationReport report = calibrate_margins(
      config.device, config.transistor, config.geometry, config.sim);
  json cases = json::array();
  for (const auto& c : report.cases) {
    cases.push_back({{"name", c.name},
                     {"inputs", c.inputs},
                     {"expected", c.expected},
                     {"observed", c.observed},
                     {"pass", c.pass},
                     {"peak_v_out_device", c.peak_v_out_device},
                     {"max_i_post", c.max_i_post},
                     {"v_set_th", c.v_set_th},
                     {"i_hold", c.i_hold},
                     {"voltage_margin_pct", c.voltage_margin_pct},
                     {"current_margin_pct", c.current_margin_pct},
                     {"max_input_stress_v", c.max_input_stress_v},
                     {"max_input_stress_i", c.max_input_stress_i}});
  }
  json j;
  j["cases"] = std::move(cases);
  j["all_pass"] = report.all_pass();
  return j;
}

namespace {

void write_cdf_csv(const std::string& path, std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "resistance_ohm,cdf\n";
  f << std::setprecision(12);
  const double n = static_cast<double>(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    f << values[k] << ',' << (static_cast<double>(k + 1) / n) << '\n';
  }
}

// Minimal standalone SVG: both CDFs on a log10 resistance axis.
void write_cdf_svg(const std::string& path, std::vector<double> hrs,
                   std::vector<double> lrs) {
  std::sort(hrs.begin(), hrs.end());
  std::sort(lrs.begin(), lrs.end());
  const double w = 640, h = 420, ml = 70, mr = 20, mt = 20, mb = 50;
  const double x0 = std::log10(1e4), x1 = std::log10(1e6);
  auto px = [&](double r) {
    return ml + (std::log10(r) - x0) / (x1 - x0) * (w - ml - mr);
  };
  auto py = [&](double cdf) { return h - mb - cdf * (h - mt - mb); };
  auto polyline = [&](const std::vector<double>& v, const char* color) {
    std::ostringstream os;
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\" points=\"";
    os << std::setprecision(6);
    const double n = static_cast<double>(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
      os << px(v[k]) << ',' << py(static_cast<double>(k + 1) / n) << ' ';
    }
    os << "\"/>\n";
    return os.str();
  };
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
    << "\" height=\"" << h << "\">\n";
  f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // axes
  f << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
    << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  f << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
    << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  for (double decade : {1e4, 1e5, 1e6}) {
    const double x = px(decade);
    f << "<line x1=\"" << x << "\" y1=\"" << h - mb << "\" x2=\"" << x
      << "\" y2=\"" << h - mb + 5 << "\" stroke=\"black\"/>\n";
    f << "<text x=\"" << x << "\" y=\"" << h - mb + 20
      << "\" text-anchor=\"middle\" font-size=\"12\">1e"
      << static_cast<int>(std::log10(decade)) << "</text>\n";
  }
  for (double cdf : {0.0, 0.5, 1.0}) {
    f << "<text x=\"" << ml - 8 << "\" y=\"" << py(cdf) + 4
      << "\" text-anchor=\"end\" font-size=\"12\">" << cdf << "</text>\n";
  }
  f << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 10
    << "\" text-anchor=\"middle\" font-size=\"13\">resistance (ohm)</text>\n";
  f << polyline(lrs, "#1f77b4") << polyline(hrs, "#d62728");
  f << "<text x=\"" << w - mr - 10 << "\" y=\"" << mt + 16
    << "\" text-anchor=\"end\" font-size=\"12\" fill=\"#1f77b4\">LRS</text>\n";
  f << "<text x=\"" << w - mr - 10 << "\" y=\"" << mt + 32
    << "\" text-anchor=\"end\" font-size=\"12\" fill=\"#d62728\">HRS</text>\n";
  f << "</svg>\n";
}

json quantiles(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  auto q = [&](double p) {
    const std::size_t k = static_cast<std::size_t>(
        p * static_cast<double>(v.size() - 1) + 0.5);
    return v[k];
  };
  return {{"min", v.front()}, {"median", q(0.5)}, {"max", v.back()}};
}

}  // namespace

json cmd_characterize(const Config& config, const CharacterizeOptions& options) {
  if (options.devices < 1 || options.cycles < 1) {
    throw std::invalid_argument("characterize needs devices >= 1, cycles >= 1");
  }
  VariabilitySpec spec = config.variability;
  spec.seed = options.seed;

  std::vector<double> hrs, lrs;
  hrs.reserve(static_cast<std::size_t>(options.devices) * options.cycles);
  lrs.reserve(hrs.capacity());
  for (int d = 0; d < options.devices; ++d) {
    for (const auto& [rh, rl] : cycle_resistances(
             spec, static_cast<std::size_t>(d), options.cycles, config.device)) {
      hrs.push_back(rh);
      lrs.push_back(rl);
    }
  }

  fs::create_directories(options.out_dir);
  const std::string hrs_path = (fs::path(options.out_dir) / "hrs_cdf.csv").string();
  const std::string lrs_path = (fs::path(options.out_dir) / "lrs_cdf.csv").string();
  const std::string svg_path = (fs::path(options.out_dir) / "cdf.svg").string();
  write_cdf_csv(hrs_path, hrs);
  write_cdf_csv(lrs_path, lrs);
  write_cdf_svg(svg_path, hrs, lrs);

  json j;
  j["devices"] = options.devices;
  j["cycles"] = options.cycles;
  j["seed"] = options.seed;
  j["hrs"] = quantiles(hrs);
  j["lrs"] = quantiles(lrs);
  j["files"] = {{"hrs_cdf", hrs_path}, {"lrs_cdf", lrs_path}, {"svg", svg_path}};

  if (options.yield_sets > 0) {
    // Reduced time resolution keeps the Monte Carlo harness fast; switching
    // decisions are threshold crossings, so coarse steps only shift event
    // times, not outcomes, for comfortably passing or failing devices.
    EngineOptions yopt = config.sim;
    yopt.steps = std::min(yopt.steps, 400);
    int or_pass = 0, not_pass = 0, both_pass = 0;
    for (int s = 0; s < options.yield_sets; ++s) {
      VariabilitySpec vs = spec;
      vs.seed = options.seed * 1000003ull + static_cast<std::uint64_t>(s) + 1;
      // A sampled array that cannot even complete initialization (SET/RESET
      // current below threshold) counts as a failed gate, not an error.
      auto gate_ok = [&](GateKind kind) {
        CrossbarState st = build_array(config.geometry, vs, config.device,
                                       config.transistor);
        try {
          return run_truth_table(kind, st, yopt).all_correct();
        } catch (const std::logic_error&) {
          return false;
        }
      };
      const bool ok_or = gate_ok(GateKind::Or);
      const bool ok_not = gate_ok(GateKind::Not);
      or_pass += ok_or;
      not_pass += ok_not;
      both_pass += ok_or && ok_not;
    }
    const double n = options.yield_sets;
    json y;
    y["sets"] = options.yield_sets;
    y["or_pass"] = or_pass;
    y["not_pass"] = not_pass;
    y["both_pass"] = both_pass;
    y["or_yield_pct"] = 100.0 * or_pass / n;
    y["not_yield_pct"] = 100.0 * not_pass / n;
    y["both_yield_pct"] = 100.0 * both_pass / n;
    const std::string yield_path =
        (fs::path(options.out_dir) / "yield.json").string();
    {
      std::ofstream f(yield_path);
      f << y.dump(2) << '\n';
    }
    j["files"]["yield"] = yield_path;
    j["yield"] = std::move(y);
  }
  return j;
}

namespace {

void render_breakdown(std::ostringstream& os, const char* label, const json& b) {
  os << "  " << label << ": total " << fmt(b["total_nj"].get<double>())
     << " nJ (init " << fmt(b["init_nj"].get<double>()) << ", exec "
     << fmt(b["exec_nj"].get<double>()) << ", read "
     << fmt(b["read_nj"].get<double>()) << ")";
  if (!b["zero_total"].get<bool>()) {
    os << "  [" << fmt(b["init_pct"].get<double>(), 3) << "% / "
       << fmt(b["exec_pct"].get<double>(), 3) << "% / "
       << fmt(b["read_pct"].get<double>(), 3) << "%]";
  }
  os << '\n';
}

}  // namespace

std::string render_gate_text(const json& j) {
  std::ostringstream os;
  os << "gate " << j["kind"].get<std::string>() << " inputs=";
  for (int b : j["inputs"]) os << b;
  os << " -> output=" << j["output"].get<int>() << " expected="
     << j["expected"].get<int>()
     << (j["match"].get<bool>() ? " [OK]" : " [MISMATCH]") << '\n';
  os << "  output read current: "
     << fmt(j["output_read_current_a"].get<double>() * 1e6) << " uA\n";
  render_breakdown(os, ("coarse/" + j["mode"].get<std::string>()).c_str(),
                   j["coarse"]);
  render_breakdown(os, "fine/full", j["fine_full"]);
  render_breakdown(os, "fine/optimal", j["fine_optimal"]);
  os << "  trace: " << j["files"]["trace_csv"].get<std::string>() << '\n';
  return os.str();
}

std::string render_run_text(const json& j) {
  std::ostringstream os;
  os << "run " << j["expr"].get<std::string>() << "  [";
  bool first = true;
  for (auto& [k, v] : j["assignment"].items()) {
    if (!first) os << ", ";
    os << k << '=' << v.get<int>();
    first = false;
  }
  os << "]\n";
  os << "  lowered: " << j["lowered"].get<std::string>() << '\n';
  os << "  micro-ops: " << j["ops"].get<std::size_t>() << ", output cell (r"
     << j["output_cell"]["row"].get<int>() << ", c"
     << j["output_cell"]["col"].get<int>() << ")\n";
  os << "  output=" << j["output"].get<int>() << " expected="
     << j["expected"].get<int>()
     << (j["match"].get<bool>() ? " [OK]" : " [MISMATCH]") << '\n';
  render_breakdown(os, "fine/full", j["fine_full"]);
  render_breakdown(os, "fine/optimal", j["fine_optimal"]);
  render_breakdown(os, "coarse/full", j["coarse_full"]);
  render_breakdown(os, "coarse/optimal", j["coarse_optimal"]);
  return os.str();
}

std::string render_table4_text(const json& j) {
  std::ostringstream os;
  os << "OR energy per case (nJ); init/read are calibrated constants,\n"
        "exec is measured vs simulated.\n";
  os << std::left << std::setw(7) << "inputs" << std::setw(11) << "init_full"
     << std::setw(10) << "init_opt" << std::setw(8) << "read" << std::setw(22)
     << "exec meas (full/opt)" << std::setw(22) << "exec sim (full/opt)"
     << "init% (meas full/opt)\n";
  for (const auto& row : j["rows"]) {
    std::ostringstream in;
    for (int b : row["inputs"]) in << b;
    os << std::left << std::setw(7) << in.str() << std::setw(11)
       << fmt(row["init"]["full_nj"].get<double>()) << std::setw(10)
       << fmt(row["init"]["optimal_nj"].get<double>()) << std::setw(8)
       << fmt(row["read"]["nj"].get<double>(), 3) << std::setw(22)
       << (fmt(row["exec_measured"]["full_nj"].get<double>()) + " / " +
           fmt(row["exec_measured"]["optimal_nj"].get<double>()))
       << std::setw(22)
       << (fmt(row["exec_simulated"]["full_nj"].get<double>()) + " / " +
           fmt(row["exec_simulated"]["optimal_nj"].get<double>()))
       << fmt(row["pct_measured"]["full"]["init"].get<double>(), 3) << "% / "
       << fmt(row["pct_measured"]["optimal"]["init"].get<double>(), 3) << "%\n";
  }
  return os.str();
}

std::string render_characterize_text(const json& j) {
  std::ostringstream os;
  os << "characterize: " << j["devices"].get<int>() << " devices x "
     << j["cycles"].get<int>() << " cycles, seed "
     << j["seed"].get<std::uint64_t>() << '\n';
  os << "  HRS [min/median/max]: " << fmt(j["hrs"]["min"].get<double>()) << " / "
     << fmt(j["hrs"]["median"].get<double>()) << " / "
     << fmt(j["hrs"]["max"].get<double>()) << " ohm\n";
  os << "  LRS [min/median/max]: " << fmt(j["lrs"]["min"].get<double>()) << " / "
     << fmt(j["lrs"]["median"].get<double>()) << " / "
     << fmt(j["lrs"]["max"].get<double>()) << " ohm\n";
  os << "  CDFs: " << j["files"]["hrs_cdf"].get<std::string>() << ", "
     << j["files"]["lrs_cdf"].get<std::string>() << ", "
     << j["files"]["svg"].get<std::string>() << '\n';
  if (j.contains("yield")) {
    const auto& y = j["yield"];
    os << "  yield over " << y["sets"].get<int>() << " sampled arrays: OR "
       << fmt(y["or_yield_pct"].get<double>(), 4) << "%, NOT "
       << fmt(y["not_yield_pct"].get<double>(), 4) << "%, both "
       << fmt(y["both_yield_pct"].get<double>(), 4) << "%\n";
  }
  return os.str();
}

std::string render_calibrate_text(const json& j) {
  std::ostringstream os;
  os << "nominal switching margins\n";
  for (const auto& c : j["cases"]) {
    std::ostringstream in;
    for (int b : c["inputs"]) in << b;
    os << "  " << std::left << std::setw(10) << c["name"].get<std::string>()
       << " in=" << std::setw(3) << in.str() << " out="
       << c["observed"].get<int>() << " (want " << c["expected"].get<int>()
       << ") " << (c["pass"].get<bool>() ? "PASS" : "FAIL")
       << "  v_peak=" << fmt(c["peak_v_out_device"].get<double>(), 4)
       << "V (th " << fmt(c["v_set_th"].get<double>(), 3) << ", margin "
       << fmt(c["voltage_margin_pct"].get<double>(), 3) << "%)"
       << "  i_post=" << fmt(c["max_i_post"].get<double>() * 1e6, 4)
       << "uA (hold " << fmt(c["i_hold"].get<double>() * 1e6, 3)
       << ", margin " << fmt(c["current_margin_pct"].get<double>(), 3) << "%)\n";
  }
  os << (j["all_pass"].get<bool>() ? "all cases pass\n"
                                   : "one or more cases FAIL\n");
  return os.str();
}

}  // namespace magicsim
