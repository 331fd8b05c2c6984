#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cavatten/experiment.hpp"

// Fitting and extraction: exponential trace fits, the dephasing-vs-n_add
// linear regression, asymmetric bootstrap confidence intervals, and
// coherence report tables.
namespace cavatten::analysis {

// A point estimate with a confidence interval. Intervals come either from
// the fit covariance (trace fits; symmetric) or from a seeded nonparametric
// bootstrap (n_th extraction; asymmetric), recorded in n_bootstrap/seed.
struct FitResult {
  double estimate = 0;
  double ci_low = 0;
  double ci_high = 0;
  double coverage = 0.95;
  double residual_norm = 0;  // sqrt of the weighted sum of squared residuals
  int n_bootstrap = 0;       // 0 when the interval is covariance-based
  std::uint64_t seed = 0;
};

class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExponentialFit {
  FitResult rate_per_s;
  FitResult amplitude;
  FitResult baseline;
  bool converged = false;
  int iterations = 0;
  std::string method;  // "gauss-newton", "nelder-mead", or "degenerate"
  double chi2 = 0;
};

// Weighted least squares of baseline + amplitude * exp(-rate t) on a trace.
// Damped Gauss-Newton with the analytic Jacobian (initial rate from a
// log-linear regression of baseline-subtracted data; convergence when the
// relative step drops below 1e-10, at most 200 iterations), falling back to
// Nelder-Mead simplex when Gauss-Newton stalls. Perfectly flat data returns
// rate 0 with an unbounded CI rather than failing. Confidence intervals are
// covariance-based with the trace sigmas taken as known.
// Throws std::invalid_argument for traces with fewer than 5 points and
// NonConvergenceError (with diagnostics) when both solvers fail.
ExponentialFit fit_exponential(const experiment::Trace& trace);

struct ExtractionOptions {
  // false: fit the slope A and absorb the intercept into n_th = B/A.
  // true: pin A to the analytic Eq.-1 slope; n_th = (B - gamma_offset)/A so a
  // known non-photon dephasing offset does not bias the extraction.
  bool fix_slope = false;
  double gamma_offset_per_s = 0;  // used only when fix_slope is true
  int n_bootstrap = 1000;
  double coverage = 0.95;
  std::uint64_t seed = 0;
};

struct NthExtraction {
  FitResult n_th;             // raw estimate: may be negative, floored only in reports
  FitResult slope_per_s;      // per-photon dephasing rate A
  double analytic_slope_per_s = 0;
  double intercept_per_s = 0;
  bool slope_fixed = false;
  bool indeterminate = false;  // fitted slope consistent with zero
  int n_points = 0;
  int bootstrap_kept = 0;      // resamples that produced a usable fit
};

// Residual photon number from a noise-injection sweep: recomputes the pure
// dephasing rate per point from (T1, T2e) and their errors, fits
// Gamma_phi = A (n_th + n_add) weighted by the propagated per-point errors
// (unweighted when any error is zero), and builds asymmetric confidence
// intervals by a seeded nonparametric bootstrap over points. Duplicate
// axis values are allowed and treated as independent points.
// Throws std::invalid_argument for fewer than 3 points.
NthExtraction extract_nth(std::span<const experiment::SweepPoint> points, double kappa_hz,
                          double chi_hz, const ExtractionOptions& opts = {});

struct ReportRow {
  std::string label;
  experiment::DeviceConfig config;
  dephasing::CoherenceSet coherence;
};

struct CoherenceReportRow {
  std::string label;
  double f_ro_ghz = 0;
  double kappa_i_mhz = 0;
  double kappa_c_mhz = 0;  // sum of both external couplings
  double chi_mhz = 0;
  double t1_us = 0;
  double t2e_us = 0;
  double ratio = 0;
  double ratio_err = 0;
  double t_phi_us = 0;     // +inf when relaxation-limited
  double nbar_bound = 0;   // 0 when below sensitivity
  double t_eff_mk = 0;     // 0 when below sensitivity
  bool below_sensitivity = false;
};

struct CoherenceReport {
  std::vector<CoherenceReportRow> rows;
  std::string text;  // aligned human-readable table
  std::string csv;
};

// Per-device coherence summary: frequency, linewidths, dispersive shift,
// echo ratio, and the photon-number / effective-temperature upper bounds
// implied by attributing all pure dephasing to thermal photons.
CoherenceReport coherence_report(std::span<const ReportRow> rows);

}  // namespace cavatten::analysis
