#include "magicsim/energy.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace magicsim {

void CostTable::validate() const {
  const double vals[] = {set_full_nj,  reset_full_nj, set_opt_nj,
                         reset_opt_nj, read_lrs_nj,   read_hrs_nj,
                         set_duration_s, reset_duration_s, read_duration_s};
  for (double v : vals) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw std::invalid_argument("cost table entries must be non-negative");
    }
  }
  if (set_opt_nj > set_full_nj || reset_opt_nj > reset_full_nj) {
    throw std::invalid_argument("optimal cost must not exceed full-ramp cost");
  }
}

void EnergyBreakdown::finalize() {
  total_nj = init_nj + exec_nj + read_nj;
  const Percentages p = breakdown_percentages(init_nj, exec_nj, read_nj);
  init_pct = p.init;
  exec_pct = p.exec;
  read_pct = p.read;
  zero_total = p.zero_total;
}

Percentages breakdown_percentages(double init_nj, double exec_nj,
                                  double read_nj) {
  const double total = init_nj + exec_nj + read_nj;
  if (total <= 0.0) return Percentages{0.0, 0.0, 0.0, true};
  return Percentages{100.0 * init_nj / total, 100.0 * exec_nj / total,
                     100.0 * read_nj / total, false};
}

namespace {

double power_at(const ExecutionTrace& trace, std::size_t k,
                const EnergySelection& sel) {
  if (sel.device) return trace.device_power(k, *sel.device);
  return trace.source_power(k);
}

}  // namespace

PhaseWindow full_window(const ExecutionTrace& trace) {
  return PhaseWindow{0.0, trace.duration, -1.0, 0.0};
}

double integrate_energy(const ExecutionTrace& trace, const PhaseWindow& window,
                        const EnergySelection& selection) {
  if (trace.samples.size() < 2) return 0.0;
  const double t0 = std::max(window.t_start, trace.samples.front().t);
  const double t1 = std::min(window.t_end, trace.samples.back().t);
  if (!(t1 > t0)) return 0.0;

  double joules = 0.0;
  for (std::size_t k = 0; k + 1 < trace.samples.size(); ++k) {
    const double ta = trace.samples[k].t;
    const double tb = trace.samples[k + 1].t;
    if (tb <= t0 || ta >= t1 || tb <= ta) continue;
    const double pa = power_at(trace, k, selection);
    const double pb = power_at(trace, k + 1, selection);
    const double lo = std::max(ta, t0);
    const double hi = std::min(tb, t1);
    // Linear power between samples; interpolate the clipped endpoints.
    const double plo = pa + (pb - pa) * (lo - ta) / (tb - ta);
    const double phi = pa + (pb - pa) * (hi - ta) / (tb - ta);
    joules += 0.5 * (plo + phi) * (hi - lo);
  }
  return joules * 1e9;
}

PhaseWindow detect_optimal_window(const ExecutionTrace& trace, CellAddress cell,
                                  const DeviceParams& params) {
  PhaseWindow w;
  w.guard = 10.0 * trace.dt;
  const std::size_t idx =
      static_cast<std::size_t>(cell.row * trace.geom.cols + cell.col);

  const SwitchEvent* ev = nullptr;
  for (const auto& e : trace.events) {
    if (e.cell == cell) {
      ev = &e;
      break;
    }
  }
  if (ev != nullptr) {
    double t_th = ev->t;
    for (const auto& s : trace.samples) {
      const double v = s.v_device[idx];
      const bool crossed = ev->is_set ? v >= params.v_set_th
                                      : -v >= params.v_reset_th;
      if (crossed) {
        t_th = s.t;
        break;
      }
    }
    w.event_t = ev->t;
    w.t_start = std::min(t_th, ev->t);
    w.t_end = std::min(ev->t + w.guard, trace.duration);
    if (!(w.t_end > w.t_start)) {
      w.t_start = std::max(0.0, w.t_end - w.guard);
    }
    return w;
  }

  // No event: minimal window around the sample of peak device power.
  std::size_t k_peak = 0;
  double p_peak = -1.0;
  for (std::size_t k = 0; k < trace.samples.size(); ++k) {
    const double p = std::abs(trace.device_power(k, cell));
    if (p > p_peak) {
      p_peak = p;
      k_peak = k;
    }
  }
  const double t_peak = trace.samples[k_peak].t;
  w.t_start = std::max(0.0, t_peak - w.guard);
  w.t_end = std::min(trace.duration, t_peak + w.guard);
  if (!(w.t_end > w.t_start)) {
    w.t_end = std::min(trace.duration, w.t_start + w.guard);
  }
  return w;
}

EnergyBreakdown coarse_cost(const std::vector<MicroOp>& schedule,
                            const std::map<std::string, int>& assignment,
                            const CostTable& table, EnergyMode mode,
                            const std::vector<double>& exec_energies_nj) {
  table.validate();
  EnergyBreakdown b;
  b.mode = mode;
  const double set_nj = mode == EnergyMode::Optimal ? table.set_opt_nj
                                                    : table.set_full_nj;
  const double reset_nj = mode == EnergyMode::Optimal ? table.reset_opt_nj
                                                      : table.reset_full_nj;

  std::map<std::pair<int, int>, int> logic;  // (row, col) -> 0/1
  auto key = [](CellAddress c) { return std::make_pair(c.row, c.col); };
  auto logic_of = [&](CellAddress c) {
    auto it = logic.find(key(c));
    if (it == logic.end()) {
      throw std::logic_error("coarse_cost: cell used before initialization");
    }
    return it->second;
  };

  std::size_t exec_i = 0;
  for (const auto& op : schedule) {
    switch (op.kind) {
      case MicroOp::Kind::Init: {
        int v;
        if (!op.input_name.empty()) {
          auto it = assignment.find(op.input_name);
          if (it == assignment.end()) {
            throw std::invalid_argument("coarse_cost: unbound input " +
                                        op.input_name);
          }
          v = it->second;
        } else if (op.has_copy_from) {
          v = logic_of(op.copy_from);
        } else {
          v = op.value;
        }
        if (v != 0 && v != 1) {
          throw std::invalid_argument("coarse_cost: init target must be 0/1");
        }
        logic[key(op.cells.at(0))] = v;
        const double e = v == 1 ? set_nj : reset_nj;
        b.init_nj += e;
        b.items.push_back({v == 1 ? "set" : "reset", e});
        break;
      }
      case MicroOp::Kind::ExecOr: {
        int v = 0;
        for (std::size_t i = 0; i + 1 < op.cells.size(); ++i) {
          v |= logic_of(op.cells[i]);
        }
        logic[key(op.cells.back())] = v;
        if (exec_i >= exec_energies_nj.size()) {
          throw std::invalid_argument(
              "coarse_cost: missing exec energy for op");
        }
        b.exec_nj += exec_energies_nj[exec_i];
        b.items.push_back({"exec_or", exec_energies_nj[exec_i]});
        ++exec_i;
        break;
      }
      case MicroOp::Kind::ExecNot: {
        const int v = 1 - logic_of(op.cells.at(1));
        logic[key(op.cells.at(2))] = v;
        if (exec_i >= exec_energies_nj.size()) {
          throw std::invalid_argument(
              "coarse_cost: missing exec energy for op");
        }
        b.exec_nj += exec_energies_nj[exec_i];
        b.items.push_back({"exec_not", exec_energies_nj[exec_i]});
        ++exec_i;
        break;
      }
      case MicroOp::Kind::Read: {
        const double e =
            logic_of(op.cells.at(0)) == 1 ? table.read_lrs_nj : table.read_hrs_nj;
        b.read_nj += e;
        b.items.push_back({"read", e});
        break;
      }
      default:
        throw std::invalid_argument("coarse_cost: unknown op kind");
    }
  }
  b.finalize();
  return b;
}

void write_breakdown_json(const EnergyBreakdown& b, std::ostream& os) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& it : b.items) {
    items.push_back({{"op", it.op}, {"energy_nj", it.energy_nj}});
  }
  nlohmann::json j = {
      {"mode", b.mode == EnergyMode::Optimal ? "optimal" : "full"},
      {"init_nj", b.init_nj},
      {"exec_nj", b.exec_nj},
      {"read_nj", b.read_nj},
      {"total_nj", b.total_nj},
      {"init_pct", b.init_pct},
      {"exec_pct", b.exec_pct},
      {"read_pct", b.read_pct},
      {"zero_total", b.zero_total},
      {"items", items}};
  os << j.dump(2) << "\n";
}

void write_breakdown_csv(const EnergyBreakdown& b, std::ostream& os) {
  os << "op,energy_nj\n";
  os.precision(12);
  for (const auto& it : b.items) {
    os << it.op << "," << it.energy_nj << "\n";
  }
  os << "total," << b.total_nj << "\n";
}

}  // namespace magicsim
