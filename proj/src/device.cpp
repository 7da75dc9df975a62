#include "magicsim/device.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace magicsim {

namespace {

// splitmix64, used to fold (seed, index, cycle) into one engine seed.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Hand-rolled Box-Muller on top of mt19937_64 so that draws are
// bit-reproducible across standard libraries (std::normal_distribution is
// implementation-defined).
double standard_normal(std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  double u1 = 0.0;
  while (u1 == 0.0) {
    u1 = static_cast<double>(eng() >> 11) * 0x1.0p-53;
  }
  const double u2 = static_cast<double>(eng() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
}

}  // namespace

void DeviceParams::validate() const {
  if (!(r_hrs > 0.0) || !(r_lrs > 0.0)) {
    throw std::invalid_argument("device resistances must be positive");
  }
  if (!(v_set_th > 0.0) || !(v_reset_th > 0.0) || !(i_hold > 0.0) ||
      !(i_reset_min > 0.0)) {
    throw std::invalid_argument("device thresholds must be positive");
  }
}

double TransistorParams::compliance_at(double v_gate) const {
  if (compliance.empty()) {
    throw std::logic_error("compliance table is empty");
  }
  if (v_gate <= compliance.front().first) return compliance.front().second;
  if (v_gate >= compliance.back().first) return compliance.back().second;
  for (std::size_t i = 1; i < compliance.size(); ++i) {
    if (v_gate <= compliance[i].first) {
      const auto& [v0, i0] = compliance[i - 1];
      const auto& [v1, i1] = compliance[i];
      const double a = (v_gate - v0) / (v1 - v0);
      return i0 + a * (i1 - i0);
    }
  }
  return compliance.back().second;
}

void TransistorParams::validate() const {
  if (!(r_on > 0.0)) throw std::invalid_argument("r_on must be positive");
  if (compliance.empty()) {
    throw std::invalid_argument("compliance table must not be empty");
  }
  for (std::size_t i = 0; i < compliance.size(); ++i) {
    if (!(compliance[i].second > 0.0)) {
      throw std::invalid_argument("compliance currents must be positive");
    }
    if (i > 0 && (compliance[i].first <= compliance[i - 1].first ||
                  compliance[i].second < compliance[i - 1].second)) {
      throw std::invalid_argument(
          "compliance must be monotonically non-decreasing in gate voltage");
    }
  }
}

void VariabilitySpec::validate() const {
  if (hrs_log_sigma < 0.0 || c2c_sigma < 0.0) {
    throw std::invalid_argument("variability sigmas must be non-negative");
  }
  const double median = std::exp(hrs_log_mean);
  if (!(median > 0.0) || !std::isfinite(median)) {
    throw std::invalid_argument("hrs_log_mean out of range");
  }
}

int logic_of_resistance(double r, const DeviceParams& params) {
  if (!(r > 0.0)) {
    throw std::invalid_argument("resistance must be positive");
  }
  return r < params.read_threshold() ? 1 : 0;
}

bool set_event_check(double v_device, double i_post_switch,
                     const DeviceParams& params) {
  return v_device >= params.v_set_th && i_post_switch >= params.i_hold;
}

bool reset_event_check(double v_device_mag, double i_pre_switch,
                       const DeviceParams& params) {
  return v_device_mag >= params.v_reset_th &&
         i_pre_switch >= params.i_reset_min;
}

DeviceParams sample_device(const VariabilitySpec& spec, std::size_t index,
                           const DeviceParams& base) {
  spec.validate();
  DeviceParams p = base;
  double r_hrs = std::exp(spec.hrs_log_mean);
  if (spec.hrs_log_sigma > 0.0) {
    const std::uint64_t s = mix64(spec.seed) ^ mix64(0x5d2d ^ index);
    r_hrs *= std::exp(spec.hrs_log_sigma * standard_normal(s));
  }
  p.r_hrs = std::clamp(r_hrs, kHrsMinOhm, kHrsMaxOhm);
  p.r_lrs = p.r_hrs / kHrsLrsRatio;
  return p;
}

double c2c_jitter_factor(const VariabilitySpec& spec, std::size_t index,
                         int cycle) {
  if (spec.c2c_sigma <= 0.0) return 1.0;
  const std::uint64_t s = mix64(spec.seed ^ 0xc2cULL) ^ mix64(index) ^
                          mix64(static_cast<std::uint64_t>(cycle) + 0x9d7);
  return std::exp(spec.c2c_sigma * standard_normal(s));
}

std::vector<std::pair<double, double>> cycle_resistances(
    const VariabilitySpec& spec, std::size_t index, int cycles,
    const DeviceParams& base) {
  const DeviceParams p = sample_device(spec, index, base);
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(std::max(cycles, 0)));
  for (int k = 0; k < cycles; ++k) {
    const double f = c2c_jitter_factor(spec, index, k);
    const double r_hrs = std::clamp(p.r_hrs * f, kHrsMinOhm, kHrsMaxOhm);
    out.emplace_back(r_hrs, r_hrs / kHrsLrsRatio);
  }
  return out;
}

}  // namespace magicsim
