#include "cavatten/dephasing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cavatten/thermal.hpp"

namespace cavatten::dephasing {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();
}  // namespace

void TransmonSpec::validate() const {
  if (!(f_ge_hz > 0)) throw std::invalid_argument("TransmonSpec: f_ge must be > 0");
  if (gamma1_per_s < 0) throw std::invalid_argument("TransmonSpec: gamma1 must be >= 0");
}

double dephasing_slope_per_s(double kappa_hz, double chi_hz) {
  if (kappa_hz < 0 || chi_hz < 0)
    throw std::invalid_argument("dephasing_slope_per_s: rates must be >= 0");
  if (kappa_hz == 0 && chi_hz == 0)
    throw std::invalid_argument("dephasing_slope_per_s: kappa and chi cannot both be zero");
  const double k = two_pi * kappa_hz;
  const double x = two_pi * chi_hz;
  return k * x * x / (k * k + x * x);
}

double thermal_dephasing_rate(double nbar, double kappa_hz, double chi_hz) {
  if (nbar < 0) throw std::invalid_argument("thermal_dephasing_rate: occupation must be >= 0");
  return nbar * dephasing_slope_per_s(kappa_hz, chi_hz);
}

CoherenceSet pure_dephasing_from_times(Measured t1, Measured t2e, std::optional<double> t2r) {
  if (!(t1.value > 0) || !(t2e.value > 0))
    throw std::invalid_argument("pure_dephasing_from_times: times must be > 0");
  if (t1.err < 0 || t2e.err < 0)
    throw std::invalid_argument("pure_dephasing_from_times: uncertainties must be >= 0");

  CoherenceSet cs;
  cs.t1_s = t1;
  cs.t2e_s = t2e;
  cs.t2r_s = t2r;

  const double r = t2e.value / (2.0 * t1.value);
  const double r_err = r * std::hypot(t2e.err / t2e.value, t1.err / t1.value);
  cs.ratio = {r, r_err};

  const double gamma = 1.0 / t2e.value - 1.0 / (2.0 * t1.value);
  const double gamma_err = std::hypot(t2e.err / (t2e.value * t2e.value),
                                      t1.err / (2.0 * t1.value * t1.value));
  cs.gamma_phi_per_s = {gamma, gamma_err};

  cs.relaxation_limited = gamma <= 0;
  cs.inconsistent = gamma < -3.0 * gamma_err;
  cs.t_phi_s = gamma > 0 ? 1.0 / gamma : inf;
  return cs;
}

PhotonBound photon_bound_from_coherence(Measured t1, Measured t2e, double kappa_hz,
                                        double chi_hz, double f_ro_hz) {
  PhotonBound bound;
  bound.coherence = pure_dephasing_from_times(t1, t2e);
  const double gamma = bound.coherence.gamma_phi_per_s.value;
  if (gamma <= 0) {
    bound.below_sensitivity = true;
    return bound;
  }
  bound.nbar = gamma / dephasing_slope_per_s(kappa_hz, chi_hz);
  bound.t_eff_k = thermal::effective_temperature(f_ro_hz, bound.nbar);
  return bound;
}

CoherenceSet predict_coherence(double t1_s, double nbar, double kappa_hz, double chi_hz,
                               double gamma_extra_per_s) {
  if (!(t1_s > 0)) throw std::invalid_argument("predict_coherence: t1 must be > 0");
  if (gamma_extra_per_s < 0)
    throw std::invalid_argument("predict_coherence: gamma_extra must be >= 0");

  const double gamma_phi = thermal_dephasing_rate(nbar, kappa_hz, chi_hz) + gamma_extra_per_s;
  double t2e;
  if (gamma_phi == 0) {
    t2e = 2.0 * t1_s;
  } else {
    // min() guards the one-ulp reciprocal round-off at the relaxation limit
    t2e = std::min(1.0 / (1.0 / (2.0 * t1_s) + gamma_phi), 2.0 * t1_s);
  }
  return pure_dephasing_from_times({t1_s, 0.0}, {t2e, 0.0});
}

}  // namespace cavatten::dephasing
