#pragma once

#include <optional>

// Thermal-photon dephasing, coherence-time algebra, and the inversion from
// measured times to photon-number and effective-temperature bounds.
//
// The dephasing rate of a dispersively coupled qubit due to a small photon
// population n of the readout mode is
//
//   Gamma_phi = n * k * x^2 / (k^2 + x^2)   (angular rates k = 2pi kappa, x = 2pi chi)
//
// valid for n << 1. Throughout, kappa is the TOTAL dressed-mode linewidth
// (internal plus all external couplings): the photon correlation time that
// sets the dephasing filter is fixed by total decay, not internal loss alone.
namespace cavatten::dephasing {

// Above this occupation the linearized rate formula degrades; callers that
// sweep photon number emit a warning past it rather than erroring.
inline constexpr double dispersive_validity_limit = 0.1;

struct TransmonSpec {
  double f_ge_hz = 0;
  double anharmonicity_hz = 0;  // f_ge - f_ef
  double chi_hz = 0;            // dispersive shift /2pi
  double gamma1_per_s = 0;      // baseline energy relaxation rate 1/T1
  void validate() const;
};

// A value with a one-sigma uncertainty.
struct Measured {
  double value = 0;
  double err = 0;
};

// One coherence measurement point and its derived quantities. The derived
// uncertainties are first-order (delta-method) propagations; asymmetric
// intervals come from bootstrap analysis when point-level data exists.
struct CoherenceSet {
  Measured t1_s;
  Measured t2e_s;
  std::optional<double> t2r_s;

  Measured ratio;              // t2e / (2 t1), unity when relaxation-limited
  Measured gamma_phi_per_s;    // 1/t2e - 1/(2 t1)
  double t_phi_s = 0;          // +inf when relaxation-limited
  bool relaxation_limited = false;  // gamma_phi <= 0 at the point estimate
  bool inconsistent = false;        // t2e exceeds 2 t1 by more than 3 sigma
};

// d(Gamma_phi)/dn at fixed kappa, chi; the Gamma_phi-per-photon conversion.
double dephasing_slope_per_s(double kappa_hz, double chi_hz);

// Dephasing rate in 1/s for occupation nbar of a mode with total linewidth
// kappa and dispersive shift chi (both ordinary Hz; converted to angular
// internally). Throws std::invalid_argument on negative inputs or when both
// rates are zero.
double thermal_dephasing_rate(double nbar, double kappa_hz, double chi_hz);

// Pure-dephasing rate and time from measured T1 and echo T2. A non-positive
// rate within uncertainty is reported as relaxation-limited (t_phi = +inf);
// more than 3 sigma below zero is flagged as inconsistent data, not rejected.
CoherenceSet pure_dephasing_from_times(Measured t1_s, Measured t2e_s,
                                       std::optional<double> t2r_s = std::nullopt);

struct PhotonBound {
  double nbar = 0;
  double t_eff_k = 0;
  bool below_sensitivity = false;  // no resolvable pure dephasing
  CoherenceSet coherence;
};

// Upper bounds on the residual photon number and its effective temperature,
// attributing ALL pure dephasing to thermal photons. These are bounds, not
// estimates: any non-photon dephasing inflates them.
PhotonBound photon_bound_from_coherence(Measured t1_s, Measured t2e_s, double kappa_hz,
                                        double chi_hz, double f_ro_hz);

// Forward model: 1/T2e = 1/(2 T1) + Gamma_phi(nbar) + gamma_extra, where
// gamma_extra lumps all non-photon echo dephasing. Never yields T2e > 2 T1.
CoherenceSet predict_coherence(double t1_s, double nbar, double kappa_hz, double chi_hz,
                               double gamma_extra_per_s);

}  // namespace cavatten::dephasing
