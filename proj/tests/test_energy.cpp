#include <doctest.h>

#include <cmath>
#include <random>

#include "magicsim/energy.hpp"

using namespace magicsim;

namespace {

// Triangle ramp across one fixed resistor; no switching possible.
ExecutionTrace ramp_trace(double v_peak, double duration, double r_fixed,
                          int steps) {
  DeviceParams base;
  base.r_hrs = r_fixed;
  base.r_lrs = r_fixed / 10.0;
  base.v_set_th = 1e6;  // unreachable: keep the resistance constant
  base.v_reset_th = 1e6;
  TransistorParams t;
  t.r_on = 1e-6;  // negligible against r_fixed
  CrossbarState s = build_array({}, nominal_spec(base), base, t);
  s.wl[0] = LineDrive::driven(Waveform::dc(10.0 + v_peak, duration));
  s.bl[0] = LineDrive::driven(Waveform::triangle(v_peak, duration));
  s.sl[0] = LineDrive::grounded();
  return run_transient(s, duration, duration / steps);
}

MicroOp init_op(CellAddress c, int v) {
  MicroOp m;
  m.kind = MicroOp::Kind::Init;
  m.cells = {c};
  m.value = v;
  return m;
}

MicroOp read_op(CellAddress c) {
  MicroOp m;
  m.kind = MicroOp::Kind::Read;
  m.cells = {c};
  return m;
}

std::vector<MicroOp> or_case_ops(int a, int b, bool read_output) {
  const CellAddress ca{0, 0}, cb{1, 0}, cy{2, 0};
  std::vector<MicroOp> ops = {init_op(ca, a), init_op(cb, b), init_op(cy, 0)};
  MicroOp ex;
  ex.kind = MicroOp::Kind::ExecOr;
  ex.cells = {ca, cb, cy};
  ops.push_back(ex);
  ops.push_back(read_op(ca));
  ops.push_back(read_op(cb));
  if (read_output) ops.push_back(read_op(cy));
  return ops;
}

}  // namespace

TEST_CASE("triangle-ramp energy matches the closed form V^2 T / (3R)") {
  std::mt19937_64 rng(2024);
  // resistances inside the sampler's HRS window so the state stays fixed
  std::uniform_real_distribution<double> uv(0.2, 0.9), ut(1e-4, 5e-3),
      ur(1.2e5, 9e5);
  for (int k = 0; k < 10; ++k) {
    const double v = uv(rng), t = ut(rng), r = ur(rng);
    const ExecutionTrace trace = ramp_trace(v, t, r, 4000);
    const double got = integrate_energy(trace, full_window(trace));
    const double want = v * v * t / (3.0 * r) * 1e9;  // nJ
    CHECK(got == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("window splits are exactly additive") {
  const ExecutionTrace trace = ramp_trace(0.8, 2e-3, 1e5, 500);
  const double whole = integrate_energy(trace, full_window(trace));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 2e-3);
  for (int k = 0; k < 20; ++k) {
    const double split = u(rng);
    const double left = integrate_energy(trace, {0.0, split});
    const double right = integrate_energy(trace, {split, 2e-3});
    CHECK(left + right == doctest::Approx(whole).epsilon(1e-12));
  }
}

TEST_CASE("the optimal window never exceeds the full-ramp energy") {
  DeviceParams base;
  CrossbarState s = build_array({}, nominal_spec(base), base, {});
  s.wl[0] = LineDrive::driven(Waveform::dc(1.6, 4e-3));
  s.bl[0] = LineDrive::driven(Waveform::triangle(1.8, 4e-3));
  s.sl[0] = LineDrive::grounded();
  const ExecutionTrace trace = run_transient(s, 4e-3, 4e-3 / 2000);
  REQUIRE(trace.events.size() == 1);
  const PhaseWindow w = detect_optimal_window(trace, {0, 0}, base);
  CHECK(w.event_t >= 0.0);
  CHECK(w.t_start < w.t_end);
  const double opt = integrate_energy(trace, w);
  const double full = integrate_energy(trace, full_window(trace));
  CHECK(opt > 0.0);
  CHECK(opt <= full);
  // the window brackets the event
  CHECK(w.t_start <= trace.events[0].t);
  CHECK(w.t_end >= trace.events[0].t);
}

TEST_CASE("device-selected energy is bounded by total source energy") {
  const ExecutionTrace trace = ramp_trace(0.8, 2e-3, 1e5, 500);
  EnergySelection sel;
  sel.device = CellAddress{0, 0};
  const double dev = integrate_energy(trace, full_window(trace), sel);
  const double src = integrate_energy(trace, full_window(trace));
  CHECK(dev > 0.0);
  CHECK(dev <= src * (1.0 + 1e-9));
}

TEST_CASE("coarse accounting reproduces the per-case init constants") {
  const CostTable table;
  const double want_full[4] = {3900.0, 2912.0, 2912.0, 1924.0};
  const double want_opt[4] = {696.0, 738.0, 738.0, 780.0};
  for (int c = 0; c < 4; ++c) {
    const int a = c >> 1, b = c & 1;
    const auto ops = or_case_ops(a, b, false);
    const EnergyBreakdown f =
        coarse_cost(ops, {}, table, EnergyMode::FullRamp, {0.0});
    const EnergyBreakdown o =
        coarse_cost(ops, {}, table, EnergyMode::Optimal, {0.0});
    CHECK(f.init_nj == want_full[c]);
    CHECK(o.init_nj == want_opt[c]);
  }
}

TEST_CASE("coarse reads bill by the tracked logical state") {
  const CostTable table;
  const auto ops = or_case_ops(0, 1, true);  // output becomes 1
  const EnergyBreakdown b =
      coarse_cost(ops, {}, table, EnergyMode::FullRamp, {123.0});
  // reads: a=0 (hrs), b=1 (lrs), y=1 (lrs)
  CHECK(b.read_nj ==
        doctest::Approx(table.read_hrs_nj + 2 * table.read_lrs_nj));
  CHECK(b.exec_nj == doctest::Approx(123.0));
}

TEST_CASE("percentages sum to 100 and flag the zero-total case") {
  const Percentages p = breakdown_percentages(50.0, 30.0, 20.0);
  CHECK(p.init == doctest::Approx(50.0));
  CHECK(p.exec == doctest::Approx(30.0));
  CHECK(p.read == doctest::Approx(20.0));
  CHECK_FALSE(p.zero_total);
  CHECK(breakdown_percentages(0.0, 0.0, 0.0).zero_total);
}

TEST_CASE("cost tables reject optimal costs above full-ramp costs") {
  CostTable t;
  t.set_opt_nj = t.set_full_nj + 1.0;
  CHECK_THROWS(t.validate());
}
