#include "magicsim/crossbar.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace magicsim {

void ArrayGeometry::validate() const {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("array geometry must be at least 1x1");
  }
}

double Waveform::at(double t) const {
  if (points.empty()) throw std::logic_error("empty waveform");
  if (t < -1e-15 || t > duration * (1.0 + 1e-12) + 1e-15) {
    throw std::out_of_range("waveform evaluated outside [0, duration]");
  }
  if (t <= points.front().first) return points.front().second;
  if (t >= points.back().first) return points.back().second;
  auto it = std::upper_bound(
      points.begin(), points.end(), t,
      [](double x, const std::pair<double, double>& p) { return x < p.first; });
  const auto& [t1, v1] = *it;
  const auto& [t0, v0] = *(it - 1);
  const double a = (t - t0) / (t1 - t0);
  return v0 + a * (v1 - v0);
}

Waveform Waveform::dc(double v, double duration) {
  return {{{0.0, v}, {duration, v}}, duration};
}

Waveform Waveform::triangle(double v_peak, double duration) {
  return {{{0.0, 0.0}, {duration / 2.0, v_peak}, {duration, 0.0}}, duration};
}

void CrossbarState::float_all_lines() {
  wl.assign(static_cast<std::size_t>(geom.cols), LineDrive::floating());
  sl.assign(static_cast<std::size_t>(geom.rows), LineDrive::floating());
  bl.assign(static_cast<std::size_t>(geom.cols), LineDrive::floating());
}

CrossbarState build_array(ArrayGeometry geom, const VariabilitySpec& spec,
                          const DeviceParams& base,
                          const TransistorParams& transistor) {
  geom.validate();
  base.validate();
  transistor.validate();
  spec.validate();
  CrossbarState s;
  s.geom = geom;
  s.transistor = transistor;
  s.variability = spec;
  const int n = geom.cell_count();
  s.params.reserve(static_cast<std::size_t>(n));
  s.devices.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    DeviceParams p = sample_device(spec, static_cast<std::size_t>(i), base);
    s.params.push_back(p);
    s.devices.push_back(DeviceState{p.r_hrs, 0});
  }
  s.float_all_lines();
  return s;
}

namespace {

struct LineValue {
  bool known = false;
  double v = 0.0;
};

LineValue line_value(const LineDrive& d, double t) {
  switch (d.kind) {
    case DriveKind::Grounded:
      return {true, 0.0};
    case DriveKind::Driven:
      return {true, d.wave.at(t)};
    case DriveKind::Floating:
    default:
      return {false, 0.0};
  }
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace

NodeSolution solve_instant(const CrossbarState& state, double t,
                           std::optional<CellAddress> override_cell,
                           double override_r) {
  const int rows = state.geom.rows;
  const int cols = state.geom.cols;
  NodeSolution sol;
  sol.wl_v.assign(static_cast<std::size_t>(cols), 0.0);
  sol.sl_v.assign(static_cast<std::size_t>(rows), 0.0);
  sol.bl_v.assign(static_cast<std::size_t>(cols), 0.0);
  sol.sl_indeterminate.assign(static_cast<std::size_t>(rows), 0);
  sol.bl_indeterminate.assign(static_cast<std::size_t>(cols), 0);
  const std::size_t ncell = static_cast<std::size_t>(rows * cols);
  sol.current.assign(ncell, 0.0);
  sol.v_device.assign(ncell, 0.0);
  sol.conducting.assign(ncell, 0);
  sol.clamped.assign(ncell, 0);

  std::vector<LineValue> slv(static_cast<std::size_t>(rows));
  std::vector<LineValue> blv(static_cast<std::size_t>(cols));
  std::vector<LineValue> wlv(static_cast<std::size_t>(cols));
  for (int r = 0; r < rows; ++r) slv[static_cast<std::size_t>(r)] = line_value(state.sl[static_cast<std::size_t>(r)], t);
  for (int c = 0; c < cols; ++c) {
    blv[static_cast<std::size_t>(c)] = line_value(state.bl[static_cast<std::size_t>(c)], t);
    wlv[static_cast<std::size_t>(c)] = line_value(state.wl[static_cast<std::size_t>(c)], t);
    sol.wl_v[static_cast<std::size_t>(c)] = wlv[static_cast<std::size_t>(c)].v;
  }

  // Node ids: SL r -> r, BL c -> rows + c.
  const int nnode = rows + cols;
  auto sl_node = [](int r) { return r; };
  auto bl_node = [rows](int c) { return rows + c; };

  struct Branch {
    int row, col;
    double g;        // 1 / (r_mem + r_on)
    double r_mem;
    double i_comp;   // compliance at this WL voltage
  };
  std::vector<Branch> branches;
  branches.reserve(ncell);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const auto& w = wlv[static_cast<std::size_t>(c)];
      if (!w.known || w.v < state.transistor.v_gate_on) continue;
      const std::size_t idx = static_cast<std::size_t>(r * cols + c);
      double r_mem = state.devices[idx].resistance;
      if (override_cell && override_cell->row == r && override_cell->col == c) {
        r_mem = override_r;
      }
      sol.conducting[idx] = 1;
      branches.push_back(Branch{r, c, 1.0 / (r_mem + state.transistor.r_on),
                                r_mem, state.transistor.compliance_at(w.v)});
    }
  }

  // Determinate components: reachable from at least one known-voltage line.
  UnionFind uf(nnode + 1);  // extra node = "known" super node
  const int known_node = nnode;
  for (int r = 0; r < rows; ++r) {
    if (slv[static_cast<std::size_t>(r)].known) uf.unite(sl_node(r), known_node);
  }
  for (int c = 0; c < cols; ++c) {
    if (blv[static_cast<std::size_t>(c)].known) uf.unite(bl_node(c), known_node);
  }
  for (const auto& b : branches) uf.unite(sl_node(b.row), bl_node(b.col));

  const int known_root = uf.find(known_node);
  std::vector<int> unknown_id(static_cast<std::size_t>(nnode), -1);
  int nunk = 0;
  std::vector<char> node_has_branch(static_cast<std::size_t>(nnode), 0);
  for (const auto& b : branches) {
    node_has_branch[static_cast<std::size_t>(sl_node(b.row))] = 1;
    node_has_branch[static_cast<std::size_t>(bl_node(b.col))] = 1;
  }
  for (int n = 0; n < nnode; ++n) {
    const bool known = (n < rows) ? slv[static_cast<std::size_t>(n)].known
                                  : blv[static_cast<std::size_t>(n - rows)].known;
    if (known) continue;
    if (node_has_branch[static_cast<std::size_t>(n)] && uf.find(n) == known_root) {
      unknown_id[static_cast<std::size_t>(n)] = nunk++;
    } else {
      // Isolated or fully floating component: indeterminate, zero current.
      if (n < rows) {
        sol.sl_indeterminate[static_cast<std::size_t>(n)] = 1;
      } else {
        sol.bl_indeterminate[static_cast<std::size_t>(n - rows)] = 1;
      }
    }
  }

  std::vector<double> node_v(static_cast<std::size_t>(nnode), 0.0);
  for (int r = 0; r < rows; ++r) node_v[static_cast<std::size_t>(sl_node(r))] = slv[static_cast<std::size_t>(r)].v;
  for (int c = 0; c < cols; ++c) node_v[static_cast<std::size_t>(bl_node(c))] = blv[static_cast<std::size_t>(c)].v;

  // Compliance clamp loop: clamped branches become fixed current sources,
  // iteration bounded by the branch count.
  std::vector<char> clamped(branches.size(), 0);
  std::vector<double> clamp_current(branches.size(), 0.0);
  std::vector<double> branch_i(branches.size(), 0.0);

  for (std::size_t pass = 0; pass <= branches.size(); ++pass) {
    if (nunk > 0) {
      Eigen::MatrixXd G = Eigen::MatrixXd::Zero(nunk, nunk);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nunk);
      for (std::size_t bi = 0; bi < branches.size(); ++bi) {
        const auto& b = branches[bi];
        const int na = bl_node(b.col);
        const int nb = sl_node(b.row);
        const int ua = unknown_id[static_cast<std::size_t>(na)];
        const int ub = unknown_id[static_cast<std::size_t>(nb)];
        if (ua < 0 && ub < 0) continue;
        if (clamped[bi]) {
          const double ic = clamp_current[bi];
          if (ua >= 0) rhs(ua) -= ic;
          if (ub >= 0) rhs(ub) += ic;
          continue;
        }
        if (ua >= 0) {
          G(ua, ua) += b.g;
          if (ub >= 0) G(ua, ub) -= b.g;
          else rhs(ua) += b.g * node_v[static_cast<std::size_t>(nb)];
        }
        if (ub >= 0) {
          G(ub, ub) += b.g;
          if (ua >= 0) G(ub, ua) -= b.g;
          else rhs(ub) += b.g * node_v[static_cast<std::size_t>(na)];
        }
      }
      Eigen::VectorXd x;
      if (nunk == 1) {
        // Dead-end floating nodes keep their single neighbour's potential;
        // G(0,0) is nonzero whenever the node has a conducting branch.
        x = rhs / G(0, 0);
      } else {
        x = G.partialPivLu().solve(rhs);
      }
      for (int n = 0; n < nnode; ++n) {
        const int u = unknown_id[static_cast<std::size_t>(n)];
        if (u >= 0) node_v[static_cast<std::size_t>(n)] = x(u);
      }
    }

    bool new_clamp = false;
    for (std::size_t bi = 0; bi < branches.size(); ++bi) {
      const auto& b = branches[bi];
      if (clamped[bi]) {
        branch_i[bi] = clamp_current[bi];
        continue;
      }
      const double v = node_v[static_cast<std::size_t>(bl_node(b.col))] -
                       node_v[static_cast<std::size_t>(sl_node(b.row))];
      branch_i[bi] = v * b.g;
      if (std::abs(branch_i[bi]) > b.i_comp * (1.0 + 1e-12)) {
        clamped[bi] = 1;
        clamp_current[bi] = branch_i[bi] > 0 ? b.i_comp : -b.i_comp;
        branch_i[bi] = clamp_current[bi];
        new_clamp = true;
      }
    }
    if (!new_clamp) break;
  }

  for (int r = 0; r < rows; ++r) sol.sl_v[static_cast<std::size_t>(r)] = node_v[static_cast<std::size_t>(sl_node(r))];
  for (int c = 0; c < cols; ++c) sol.bl_v[static_cast<std::size_t>(c)] = node_v[static_cast<std::size_t>(bl_node(c))];

  std::vector<double> node_residual(static_cast<std::size_t>(nnode), 0.0);
  for (std::size_t bi = 0; bi < branches.size(); ++bi) {
    const auto& b = branches[bi];
    const std::size_t idx = static_cast<std::size_t>(b.row * cols + b.col);
    // Branches inside an indeterminate component carry no current.
    const bool indet =
        (unknown_id[static_cast<std::size_t>(bl_node(b.col))] < 0 &&
         !blv[static_cast<std::size_t>(b.col)].known &&
         sol.bl_indeterminate[static_cast<std::size_t>(b.col)]) ||
        (unknown_id[static_cast<std::size_t>(sl_node(b.row))] < 0 &&
         !slv[static_cast<std::size_t>(b.row)].known &&
         sol.sl_indeterminate[static_cast<std::size_t>(b.row)]);
    const double i = indet ? 0.0 : branch_i[bi];
    sol.current[idx] = i;
    sol.v_device[idx] = i * b.r_mem;
    sol.clamped[idx] = clamped[bi];
    sol.max_branch_current = std::max(sol.max_branch_current, std::abs(i));
    node_residual[static_cast<std::size_t>(bl_node(b.col))] += i;
    node_residual[static_cast<std::size_t>(sl_node(b.row))] -= i;
  }
  for (int n = 0; n < nnode; ++n) {
    if (unknown_id[static_cast<std::size_t>(n)] >= 0) {
      sol.max_kcl_residual =
          std::max(sol.max_kcl_residual, std::abs(node_residual[static_cast<std::size_t>(n)]));
    }
  }
  return sol;
}

namespace {

struct Candidate {
  CellAddress cell;
  double margin = 0.0;
  bool is_set = false;
};

TraceSample make_sample(double t, const NodeSolution& sol) {
  return TraceSample{t, sol.wl_v, sol.sl_v, sol.bl_v, sol.current, sol.v_device};
}

}  // namespace

ExecutionTrace run_transient(CrossbarState& state, double duration, double dt) {
  if (!(dt > 0.0) || !(duration > 0.0)) {
    throw std::invalid_argument("duration and dt must be positive");
  }
  ExecutionTrace trace;
  trace.geom = state.geom;
  trace.duration = duration;
  trace.dt = dt;
  for (const auto& d : state.wl) trace.wl_kind.push_back(d.kind);
  for (const auto& d : state.sl) trace.sl_kind.push_back(d.kind);
  for (const auto& d : state.bl) trace.bl_kind.push_back(d.kind);

  const int steps = static_cast<int>(std::ceil(duration / dt - 1e-9));
  trace.samples.reserve(static_cast<std::size_t>(steps) + 1);

  for (int k = 0; k <= steps; ++k) {
    const double t = std::min(static_cast<double>(k) * dt, duration);
    NodeSolution sol = solve_instant(state, t);

    Candidate best;
    bool have = false;
    for (int r = 0; r < state.geom.rows; ++r) {
      for (int c = 0; c < state.geom.cols; ++c) {
        const CellAddress cell{r, c};
        const std::size_t idx = static_cast<std::size_t>(state.index(cell));
        if (!sol.conducting[idx]) continue;
        const DeviceParams& p = state.params[idx];
        const int logic = state.logic(cell);
        double margin = 0.0;
        bool is_set = false;
        if (logic == 0 && sol.v_device[idx] >= p.v_set_th) {
          // Hypothetical post-switch current: re-solve with this device at LRS.
          NodeSolution post = solve_instant(state, t, cell, p.r_lrs);
          const double i_post = post.current[idx];
          if (!set_event_check(sol.v_device[idx], i_post, p)) continue;
          margin = std::min(sol.v_device[idx] / p.v_set_th, i_post / p.i_hold);
          is_set = true;
        } else if (logic == 1 && -sol.v_device[idx] >= p.v_reset_th) {
          const double i_pre = std::abs(sol.current[idx]);
          if (!reset_event_check(-sol.v_device[idx], i_pre, p)) continue;
          margin = std::min(-sol.v_device[idx] / p.v_reset_th,
                            i_pre / p.i_reset_min);
        } else {
          continue;
        }
        if (!have || margin > best.margin) {
          best = Candidate{cell, margin, is_set};
          have = true;
        }
      }
    }

    if (have) {
      DeviceState& dev = state.device(best.cell);
      const DeviceParams& p = state.device_params(best.cell);
      const double r_from = dev.resistance;
      const double f = c2c_jitter_factor(state.variability,
                                         static_cast<std::size_t>(state.index(best.cell)),
                                         dev.cycle_count);
      double r_to = (best.is_set ? p.r_lrs : p.r_hrs) * f;
      if (!best.is_set) r_to = std::clamp(r_to, kHrsMinOhm, kHrsMaxOhm);
      dev.resistance = r_to;
      dev.cycle_count += 1;
      trace.events.push_back(SwitchEvent{best.cell, r_from, r_to, t, best.is_set});
      sol = solve_instant(state, t);
    }
    trace.samples.push_back(make_sample(t, sol));
  }
  return trace;
}

double ExecutionTrace::source_power(std::size_t k) const {
  const TraceSample& s = samples[k];
  const int rows = geom.rows;
  const int cols = geom.cols;
  double p = 0.0;
  for (int c = 0; c < cols; ++c) {
    if (bl_kind[static_cast<std::size_t>(c)] != DriveKind::Driven) continue;
    double i = 0.0;
    for (int r = 0; r < rows; ++r) i += s.current[static_cast<std::size_t>(r * cols + c)];
    p += s.bl_v[static_cast<std::size_t>(c)] * i;
  }
  for (int r = 0; r < rows; ++r) {
    if (sl_kind[static_cast<std::size_t>(r)] != DriveKind::Driven) continue;
    double i = 0.0;
    for (int c = 0; c < cols; ++c) i -= s.current[static_cast<std::size_t>(r * cols + c)];
    p += s.sl_v[static_cast<std::size_t>(r)] * i;
  }
  return p;
}

double ExecutionTrace::device_power(std::size_t k, CellAddress cell) const {
  const TraceSample& s = samples[k];
  const std::size_t idx = static_cast<std::size_t>(cell.row * geom.cols + cell.col);
  return s.current[idx] * s.v_device[idx];
}

void write_trace_csv(const ExecutionTrace& trace, std::ostream& os) {
  const int rows = trace.geom.rows;
  const int cols = trace.geom.cols;
  std::vector<char> active(static_cast<std::size_t>(rows * cols), 0);
  for (const auto& s : trace.samples) {
    for (std::size_t i = 0; i < s.current.size(); ++i) {
      if (s.current[i] != 0.0) active[i] = 1;
    }
  }
  os << "t";
  for (int c = 0; c < cols; ++c) os << ",WL" << c + 1;
  for (int r = 0; r < rows; ++r) os << ",SL" << r + 1;
  for (int c = 0; c < cols; ++c) os << ",BL" << c + 1;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (!active[static_cast<std::size_t>(r * cols + c)]) continue;
      os << ",r" << r << "c" << c << "_i,r" << r << "c" << c << "_v";
    }
  }
  os << "\n";
  os.precision(12);
  for (const auto& s : trace.samples) {
    os << s.t;
    for (int c = 0; c < cols; ++c) os << "," << s.wl_v[static_cast<std::size_t>(c)];
    for (int r = 0; r < rows; ++r) os << "," << s.sl_v[static_cast<std::size_t>(r)];
    for (int c = 0; c < cols; ++c) os << "," << s.bl_v[static_cast<std::size_t>(c)];
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const std::size_t idx = static_cast<std::size_t>(r * cols + c);
        if (!active[idx]) continue;
        os << "," << s.current[idx] << "," << s.v_device[idx];
      }
    }
    os << "\n";
  }
}

void write_events_json(const ExecutionTrace& trace, std::ostream& os) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : trace.events) {
    arr.push_back({{"cell", {{"row", e.cell.row}, {"col", e.cell.col}}},
                   {"from", e.r_from},
                   {"to", e.r_to},
                   {"t", e.t},
                   {"kind", e.is_set ? "SET" : "RESET"}});
  }
  os << arr.dump(2) << "\n";
}

}  // namespace magicsim
