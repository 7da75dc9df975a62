#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace magicsim {

/// Sampled HRS resistances are clipped to this window (ohms).
inline constexpr double kHrsMinOhm = 1e5;
inline constexpr double kHrsMaxOhm = 1e6;

/// Nominal HRS/LRS ratio; the sampler preserves it exactly per device.
inline constexpr double kHrsLrsRatio = 10.0;

/// Behavioral parameters of one memristor. The switching model is abrupt
/// and event-based: a SET commits only if the network can sustain i_hold
/// through the freshly switched device, a RESET only if the pre-switch
/// current reaches i_reset_min.
struct DeviceParams {
  double r_hrs = 200e3;        // ohm
  double r_lrs = 20e3;         // ohm
  double v_set_th = 1.1;       // V, TE-positive
  double v_reset_th = 1.7;     // V, TE-negative magnitude
  double i_hold = 32e-6;       // A, post-switch sustaining current for SET
  double i_reset_min = 80e-6;  // A, pre-switch current for RESET

  /// Geometric-mean read threshold; resistances below it read as logic 1.
  double read_threshold() const { return std::sqrt(r_hrs * r_lrs); }

  void validate() const;  // throws std::invalid_argument
};

/// Access transistor: ideal switch + on-resistance + gate-voltage-dependent
/// compliance current (linearly interpolated between the given points).
struct TransistorParams {
  double v_gate_on = 0.7;  // V, channel is open-circuit below this
  double r_on = 1e3;       // ohm
  std::vector<std::pair<double, double>> compliance = {{1.6, 500e-6},
                                                       {5.0, 2e-3}};

  double compliance_at(double v_gate) const;

  void validate() const;
};

/// Lognormal device-to-device HRS sampling plus multiplicative
/// cycle-to-cycle jitter. Sampling is a pure function of (seed, index),
/// jitter of (seed, index, cycle).
struct VariabilitySpec {
  double hrs_log_mean = std::log(2e5);
  double hrs_log_sigma = 0.6;
  double c2c_sigma = 0.05;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Zero-variance spec centered on the nominal HRS of `base`; every sampled
/// device is exactly nominal and no C2C jitter is applied.
inline VariabilitySpec nominal_spec(const DeviceParams& base,
                                    std::uint64_t seed = 1) {
  VariabilitySpec s;
  s.hrs_log_mean = std::log(base.r_hrs);
  s.hrs_log_sigma = 0.0;
  s.c2c_sigma = 0.0;
  s.seed = seed;
  return s;
}

/// Mutable per-device state. Logic value is always derived from the
/// resistance via logic_of_resistance, never stored.
struct DeviceState {
  double resistance = 200e3;  // ohm
  int cycle_count = 0;        // completed SET/RESET transitions
};

/// 1 iff r < sqrt(r_hrs * r_lrs); the tie resolves to HRS (logic 0).
int logic_of_resistance(double r, const DeviceParams& params);

/// SET commits iff the TE-positive device voltage reaches v_set_th and the
/// hypothetical post-switch current reaches i_hold.
bool set_event_check(double v_device, double i_post_switch,
                     const DeviceParams& params);

/// RESET commits iff the TE-negative magnitude reaches v_reset_th and the
/// pre-switch current reaches i_reset_min.
bool reset_event_check(double v_device_mag, double i_pre_switch,
                       const DeviceParams& params);

/// Deterministic lognormal draw for device `index`; r_hrs clipped to
/// [kHrsMinOhm, kHrsMaxOhm], r_lrs = r_hrs / 10. Thresholds come from
/// `base` unchanged.
DeviceParams sample_device(const VariabilitySpec& spec, std::size_t index,
                           const DeviceParams& base = {});

/// Multiplicative lognormal(0, c2c_sigma) factor applied to the resistance
/// of a freshly committed transition.
double c2c_jitter_factor(const VariabilitySpec& spec, std::size_t index,
                         int cycle);

/// One (r_hrs, r_lrs) pair per SET/RESET cycle of device `index`; the two
/// values of a cycle share the jitter factor so their ratio stays 10.
std::vector<std::pair<double, double>> cycle_resistances(
    const VariabilitySpec& spec, std::size_t index, int cycles,
    const DeviceParams& base = {});

}  // namespace magicsim
