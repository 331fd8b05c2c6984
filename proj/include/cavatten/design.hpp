#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "cavatten/modes.hpp"

// Order-of-magnitude design estimators for dissipative cavity attenuators:
// skin depth, internal Q from the gap geometry, half-wave frequency, cryogenic
// shifts, and a checker for the three design requirements (centering,
// on-resonance attenuation, bandwidth).
//
// These are estimate-level tools. The Q model is claimed good to a factor of
// about 3; the frequency estimate to ~15% unless its correction factor is
// calibrated against a measured device. The skin depth is the classical one;
// at low temperature the mean free path can exceed it (anomalous regime) and
// the classical formula overestimates the conductivity gain.
namespace cavatten::design {

struct MaterialSpec {
  std::string name;
  double resistivity_ohm_m = 0;         // at reference_temperature_k
  double reference_temperature_k = 296;
  // kappa_i(room) / kappa_i(cold) when known from measurement
  std::optional<double> cryo_linewidth_ratio;
};

// Built-in handbook materials ("copper", "brass"); empty when unknown.
std::optional<MaterialSpec> lookup_material(std::string_view name);

struct AttenuatorGeometry {
  double gap_m = 0;     // smallest dimension; sets the surface-to-volume ratio
  double length_m = 0;  // longest dimension; sets the fundamental frequency
  double geometry_factor = 1.0;              // Q = G * gap / delta
  double effective_length_correction = 1.0;  // calibrates the half-wave estimate
  void validate() const;
};

// Classical skin depth sqrt(rho / (pi f mu0)).
double skin_depth(double resistivity_ohm_m, double f_hz);

struct QEstimate {
  double q_internal = 0;
  double kappa_i_hz = 0;
};

// Internal quality factor from the parallel-plate surface-to-volume picture,
// Q = G * gap / delta, and the implied kappa_i = f / Q. Order-of-magnitude
// only. Throws std::invalid_argument when delta >= gap (model invalid).
QEstimate q_estimate(const AttenuatorGeometry& geom, double skin_depth_m, double f_hz);

// Conductivity gain on cooldown inferred from the linewidth change:
// sigma_cold/sigma_rt = (kappa_rt/kappa_cold)^2, since Q ~ 1/delta ~ sqrt(sigma).
double conductivity_ratio_from_linewidths(double kappa_rt_hz, double kappa_cold_hz);

// Fundamental frequency c / (2 L * correction) of the half-wave mode. The
// default correction 1 underpredicts real devices with coupling apertures by
// roughly 10-15%; calibrate effective_length_correction per design family.
double halfwave_frequency(const AttenuatorGeometry& geom);

// Resonant frequency after cooling, f / (1 - epsilon) for fractional length
// contraction epsilon in [0, 1). Measured shifts exceed bulk thermal
// contraction, so epsilon is a fit-to-data parameter, not a prediction.
double contracted_frequency(double f_rt_hz, double contraction);

struct RequirementWindow {
  double center_tolerance_hz = 25e6;
  double attenuation_min_db = 10;
  double attenuation_max_db = 20;
  double bandwidth_min_hz = 10e6;
  double bandwidth_max_hz = 50e6;
};

struct RequirementReport {
  double f_hz = 0;
  double target_f_hz = 0;
  double insertion_loss_db = 0;
  double bandwidth_hz = 0;  // total linewidth kappa_i + kappa_c1 + kappa_c2
  bool centered = false;
  bool attenuation_ok = false;
  bool bandwidth_ok = false;
  bool all_ok() const { return centered && attenuation_ok && bandwidth_ok; }
};

// Checks an attenuator design against the three requirements: centered on the
// target within tolerance, 10-20 dB attenuation on resonance, 10-50 MHz
// bandwidth (window configurable).
RequirementReport check_requirements(const modes::ResonatorSpec& spec, double target_f_hz,
                                     const RequirementWindow& window = {});

}  // namespace cavatten::design
