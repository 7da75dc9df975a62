#include <doctest.h>

#include <cmath>
#include <sstream>

#include "magicsim/crossbar.hpp"

using namespace magicsim;

namespace {

CrossbarState nominal_array() {
  DeviceParams base;
  return build_array({}, nominal_spec(base), base, {});
}

}  // namespace

TEST_CASE("waveforms evaluate piecewise-linearly and reject out-of-range t") {
  const Waveform tri = Waveform::triangle(2.0, 4e-3);
  CHECK(tri.at(0.0) == doctest::Approx(0.0));
  CHECK(tri.at(2e-3) == doctest::Approx(2.0));
  CHECK(tri.at(1e-3) == doctest::Approx(1.0));
  CHECK(tri.at(3e-3) == doctest::Approx(1.0));
  CHECK(tri.at(4e-3) == doctest::Approx(0.0));
  CHECK_THROWS(tri.at(-1e-9));
  CHECK_THROWS(tri.at(4e-3 + 1e-9));
  const Waveform dc = Waveform::dc(3.3, 1e-3);
  CHECK(dc.at(0.0) == doctest::Approx(3.3));
  CHECK(dc.at(0.5e-3) == doctest::Approx(3.3));
}

TEST_CASE("fresh arrays start all-HRS with floating lines") {
  const CrossbarState s = nominal_array();
  REQUIRE(static_cast<int>(s.devices.size()) == s.geom.cell_count());
  for (const auto& d : s.devices) CHECK(d.resistance == doctest::Approx(200e3));
  for (const auto& l : s.wl) CHECK(l.kind == DriveKind::Floating);
  for (const auto& l : s.sl) CHECK(l.kind == DriveKind::Floating);
  for (const auto& l : s.bl) CHECK(l.kind == DriveKind::Floating);
}

TEST_CASE("single-cell read currents match the series-resistance oracle") {
  CrossbarState s = nominal_array();
  s.wl[0] = LineDrive::driven(Waveform::dc(3.3, 1e-6));
  s.bl[0] = LineDrive::driven(Waveform::dc(0.5, 1e-6));
  s.sl[0] = LineDrive::grounded();

  // HRS: 0.5 / (200k + 1k)
  NodeSolution sol = solve_instant(s, 0.5e-6);
  const int idx = s.index({0, 0});
  CHECK(sol.current[idx] == doctest::Approx(0.5 / 201e3).epsilon(1e-9));
  CHECK(sol.v_device[idx] ==
        doctest::Approx(0.5 * 200e3 / 201e3).epsilon(1e-9));

  s.device({0, 0}).resistance = 20e3;  // LRS: 0.5 / 21k
  sol = solve_instant(s, 0.5e-6);
  CHECK(sol.current[idx] == doctest::Approx(0.5 / 21e3).epsilon(1e-9));
}

TEST_CASE("closed gates and floating dead ends carry no current") {
  CrossbarState s = nominal_array();
  s.bl[0] = LineDrive::driven(Waveform::dc(0.5, 1e-6));
  s.sl[0] = LineDrive::grounded();
  s.wl[0] = LineDrive::driven(Waveform::dc(0.5, 1e-6));  // below v_gate_on
  NodeSolution sol = solve_instant(s, 0.0);
  CHECK(sol.current[s.index({0, 0})] == 0.0);
  CHECK_FALSE(sol.conducting[s.index({0, 0})]);

  // fully floating column: indeterminate, reported as 0 with zero current
  s.wl[0] = LineDrive::driven(Waveform::dc(3.3, 1e-6));
  sol = solve_instant(s, 0.0);
  CHECK(sol.bl_indeterminate[1]);
  CHECK(sol.current[s.index({0, 1})] == 0.0);
}

TEST_CASE("three-branch summing node matches the hand nodal solution") {
  // Rows 0,1 driven at 3.3 V, row 2 grounded, BL0 floating, gate open.
  // Inputs LRS, output HRS; every branch includes the 1k channel.
  CrossbarState s = nominal_array();
  s.device({0, 0}).resistance = 20e3;
  s.device({1, 0}).resistance = 20e3;
  s.wl[0] = LineDrive::driven(Waveform::dc(3.3, 1e-3));
  s.sl[0] = LineDrive::driven(Waveform::dc(3.3, 1e-3));
  s.sl[1] = LineDrive::driven(Waveform::dc(3.3, 1e-3));
  s.sl[2] = LineDrive::grounded();

  const double g_in = 1.0 / 21e3, g_out = 1.0 / 201e3;
  const double v_bl = 3.3 * (2.0 * g_in) / (2.0 * g_in + g_out);
  NodeSolution sol = solve_instant(s, 0.5e-3);
  CHECK(sol.bl_v[0] == doctest::Approx(v_bl).epsilon(1e-9));
  const int out = s.index({2, 0});
  // positive current is the BL -> SL (SET) direction
  CHECK(sol.current[out] == doctest::Approx(v_bl * g_out).epsilon(1e-9));
  CHECK(sol.current[s.index({0, 0})] ==
        doctest::Approx(-(3.3 - v_bl) * g_in).epsilon(1e-9));
  CHECK(sol.v_device[out] ==
        doctest::Approx(v_bl * 200e3 / 201e3).epsilon(1e-9));
  CHECK(sol.max_kcl_residual <= 1e-9 * sol.max_branch_current);
}

TEST_CASE("hypothetical override re-solves with the replacement resistance") {
  CrossbarState s = nominal_array();
  s.wl[0] = LineDrive::driven(Waveform::dc(3.3, 1e-6));
  s.bl[0] = LineDrive::driven(Waveform::dc(0.5, 1e-6));
  s.sl[0] = LineDrive::grounded();
  NodeSolution sol = solve_instant(s, 0.0, CellAddress{0, 0}, 20e3);
  CHECK(sol.current[s.index({0, 0})] ==
        doctest::Approx(0.5 / 21e3).epsilon(1e-9));
  CHECK(s.device({0, 0}).resistance == doctest::Approx(200e3));  // untouched
}

TEST_CASE("compliance clamps the branch current at the gate-voltage limit") {
  CrossbarState s = nominal_array();
  s.device({0, 0}).resistance = 100.0;  // would draw ~1.6 mA unclamped
  s.wl[0] = LineDrive::driven(Waveform::dc(1.6, 1e-6));
  s.bl[0] = LineDrive::driven(Waveform::dc(1.8, 1e-6));
  s.sl[0] = LineDrive::grounded();
  NodeSolution sol = solve_instant(s, 0.0);
  const int idx = s.index({0, 0});
  CHECK(sol.clamped[idx]);
  CHECK(sol.current[idx] == doctest::Approx(500e-6).epsilon(1e-9));
}

TEST_CASE("transients are deterministic and record switch events") {
  DeviceParams base;
  auto run_once = [&]() {
    CrossbarState s = build_array({}, nominal_spec(base), base, {});
    s.wl[0] = LineDrive::driven(Waveform::dc(1.6, 4e-3));
    s.bl[0] = LineDrive::driven(Waveform::triangle(1.8, 4e-3));
    s.sl[0] = LineDrive::grounded();
    return run_transient(s, 4e-3, 4e-3 / 2000);
  };
  const ExecutionTrace a = run_once();
  const ExecutionTrace b = run_once();
  REQUIRE(a.events.size() == 1);
  CHECK(a.events[0].is_set);
  CHECK(a.events[0].cell == CellAddress{0, 0});
  // SET fires close to where the ramp crosses the threshold condition
  CHECK(a.events[0].t > 0.0);
  CHECK(a.events[0].t < 2e-3);
  REQUIRE(b.events.size() == 1);
  CHECK(a.events[0].t == b.events[0].t);
  REQUIRE(a.samples.size() == b.samples.size());
  CHECK(a.samples.back().current == b.samples.back().current);
}

TEST_CASE("trace writers emit well-formed CSV and JSON") {
  DeviceParams base;
  CrossbarState s = build_array({}, nominal_spec(base), base, {});
  s.wl[0] = LineDrive::driven(Waveform::dc(3.3, 1e-6));
  s.bl[0] = LineDrive::driven(Waveform::dc(0.5, 1e-6));
  s.sl[0] = LineDrive::grounded();
  const ExecutionTrace t = run_transient(s, 1e-6, 0.25e-6);

  std::ostringstream csv;
  write_trace_csv(t, csv);
  const std::string text = csv.str();
  CHECK(text.rfind("t,", 0) == 0);
  CHECK(text.find("r0c0") != std::string::npos);

  std::ostringstream js;
  write_events_json(t, js);
  CHECK(js.str().find('[') != std::string::npos);
}
