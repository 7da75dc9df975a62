#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "magicsim/device.hpp"

namespace magicsim {

struct ArrayGeometry {
  int rows = 8;  // source lines
  int cols = 4;  // word/bit lines

  int cell_count() const { return rows * cols; }
  void validate() const;
};

struct CellAddress {
  int row = 0;
  int col = 0;

  friend bool operator==(const CellAddress&, const CellAddress&) = default;
};

/// Piecewise-linear voltage waveform. Breakpoints are time-sorted and start
/// at t = 0; evaluation outside [0, duration] throws.
struct Waveform {
  std::vector<std::pair<double, double>> points;  // (t, v)
  double duration = 0.0;

  double at(double t) const;

  static Waveform dc(double v, double duration);
  static Waveform triangle(double v_peak, double duration);  // 0 -> v -> 0
};

enum class DriveKind { Floating, Grounded, Driven };

struct LineDrive {
  DriveKind kind = DriveKind::Floating;
  Waveform wave;  // used only when kind == Driven

  static LineDrive floating() { return {}; }
  static LineDrive grounded() { return {DriveKind::Grounded, {}}; }
  static LineDrive driven(Waveform w) { return {DriveKind::Driven, std::move(w)}; }
};

/// The 1T1R array: per-cell device state/params plus one drive assignment
/// per WL, SL and BL. Owned by exactly one simulation run at a time.
struct CrossbarState {
  ArrayGeometry geom;
  TransistorParams transistor;
  VariabilitySpec variability;
  std::vector<DeviceParams> params;   // row-major, rows*cols
  std::vector<DeviceState> devices;   // row-major
  std::vector<LineDrive> wl;          // cols
  std::vector<LineDrive> sl;          // rows
  std::vector<LineDrive> bl;          // cols

  int index(CellAddress a) const { return a.row * geom.cols + a.col; }
  bool in_bounds(CellAddress a) const {
    return a.row >= 0 && a.row < geom.rows && a.col >= 0 && a.col < geom.cols;
  }
  DeviceState& device(CellAddress a) { return devices[index(a)]; }
  const DeviceState& device(CellAddress a) const { return devices[index(a)]; }
  const DeviceParams& device_params(CellAddress a) const {
    return params[index(a)];
  }
  int logic(CellAddress a) const {
    return logic_of_resistance(device(a).resistance, device_params(a));
  }

  void float_all_lines();
};

/// All devices sampled deterministically (index = row*cols + col),
/// initialized to HRS, all lines floating.
CrossbarState build_array(ArrayGeometry geom, const VariabilitySpec& spec,
                          const DeviceParams& base = {},
                          const TransistorParams& transistor = {});

/// Instantaneous nodal solution. Branch current is positive in the
/// BL -> SL direction (TE-positive, SET direction); the device voltage is
/// the drop across the memristor alone, same sign convention.
struct NodeSolution {
  std::vector<double> wl_v, sl_v, bl_v;
  std::vector<char> sl_indeterminate, bl_indeterminate;
  std::vector<double> current;    // rows*cols, A
  std::vector<double> v_device;   // rows*cols, V
  std::vector<char> conducting;   // rows*cols
  std::vector<char> clamped;      // rows*cols, compliance clamp engaged
  double max_kcl_residual = 0.0;
  double max_branch_current = 0.0;
};

/// KCL solve at time t; optionally with one device resistance overridden
/// (used for hypothetical post-switch re-solves).
NodeSolution solve_instant(const CrossbarState& state, double t,
                           std::optional<CellAddress> override_cell = {},
                           double override_r = 0.0);

struct SwitchEvent {
  CellAddress cell;
  double r_from = 0.0;
  double r_to = 0.0;
  double t = 0.0;
  bool is_set = false;  // false: RESET
};

struct TraceSample {
  double t = 0.0;
  std::vector<double> wl_v, sl_v, bl_v;
  std::vector<double> current;   // rows*cols
  std::vector<double> v_device;  // rows*cols
};

struct ExecutionTrace {
  ArrayGeometry geom;
  double duration = 0.0;
  double dt = 0.0;
  std::vector<DriveKind> wl_kind, sl_kind, bl_kind;
  std::vector<TraceSample> samples;
  std::vector<SwitchEvent> events;

  /// Total power delivered by all driven lines at sample k (W).
  double source_power(std::size_t k) const;
  /// Power dissipated in the memristor of `cell` at sample k (W).
  double device_power(std::size_t k, CellAddress cell) const;
};

/// Time-stepped transient with event-driven switching: at most one switch
/// event is committed per step (largest relative margin wins), with a
/// re-solve after the commit. C2C jitter is applied to each committed
/// transition.
ExecutionTrace run_transient(CrossbarState& state, double duration, double dt);

/// One row per sample: t, WL/SL/BL voltages, then current and device
/// voltage of every device that conducts at any sample.
void write_trace_csv(const ExecutionTrace& trace, std::ostream& os);

/// Sidecar event list: [{"cell": ..., "from": ..., "to": ..., "t": ...}].
void write_events_json(const ExecutionTrace& trace, std::ostream& os);

}  // namespace magicsim
