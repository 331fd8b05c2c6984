#include "cavatten/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <sstream>

#include "cavatten/format.hpp"
#include "cavatten/rng.hpp"

namespace cavatten::analysis {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double z95 = 1.959963984540054;  // two-sided 95% normal quantile

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

// Solves M x = b by Gaussian elimination with partial pivoting; false when
// the pivot collapses (singular system).
bool solve3(Mat3 m, Vec3 b, Vec3& x) {
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    if (std::abs(m[pivot][col]) < 1e-300) return false;
    std::swap(m[col], m[pivot]);
    std::swap(b[col], b[pivot]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 3; ++c) m[r][c] -= f * m[col][c];
      b[r] -= f * b[col];
    }
  }
  for (int row = 2; row >= 0; --row) {
    double acc = b[row];
    for (int c = row + 1; c < 3; ++c) acc -= m[row][c] * x[c];
    x[row] = acc / m[row][row];
  }
  return std::isfinite(x[0]) && std::isfinite(x[1]) && std::isfinite(x[2]);
}

// Exponential model in parameter order (rate, amplitude, baseline).
struct ExpProblem {
  std::span<const double> t;
  std::span<const double> y;
  std::span<const double> sigma;

  double ssr(const Vec3& p) const {
    double acc = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double f = p[2] + p[1] * std::exp(-p[0] * t[i]);
      const double r = (y[i] - f) / sigma[i];
      acc += r * r;
    }
    return std::isfinite(acc) ? acc : inf;
  }

  // Normal-equation pieces J^T J and J^T res at p, with weights folded in.
  void normal_equations(const Vec3& p, Mat3& jtj, Vec3& jtr) const {
    jtj = {{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}};
    jtr = {0, 0, 0};
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double e = std::exp(-p[0] * t[i]);
      const double f = p[2] + p[1] * e;
      const double w = 1.0 / sigma[i];
      const Vec3 row = {-p[1] * t[i] * e * w, e * w, w};
      const double res = (y[i] - f) * w;
      for (int a = 0; a < 3; ++a) {
        jtr[a] += row[a] * res;
        for (int b = 0; b < 3; ++b) jtj[a][b] += row[a] * row[b];
      }
    }
  }
};

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

// Damped Gauss-Newton; returns true on convergence and leaves the best point
// in p either way.
bool gauss_newton(const ExpProblem& prob, Vec3& p, int& iterations, double& ssr_out) {
  double ssr = prob.ssr(p);
  for (int it = 0; it < 200; ++it) {
    iterations = it + 1;
    Mat3 jtj;
    Vec3 jtr, step{};
    prob.normal_equations(p, jtj, jtr);
    double ridge = 0;
    bool solved = solve3(jtj, jtr, step);
    while (!solved && ridge < 1e8) {
      ridge = ridge == 0 ? 1e-12 : ridge * 100;
      Mat3 damped = jtj;
      const double scale = (jtj[0][0] + jtj[1][1] + jtj[2][2]) / 3 + 1e-300;
      for (int a = 0; a < 3; ++a) damped[a][a] += ridge * scale;
      solved = solve3(damped, jtr, step);
    }
    if (!solved) return false;

    bool accepted = false;
    for (int half = 0; half < 40; ++half) {
      const Vec3 trial = {p[0] + step[0], p[1] + step[1], p[2] + step[2]};
      const double trial_ssr = prob.ssr(trial);
      if (trial_ssr < ssr || (trial_ssr == ssr && half == 0)) {
        const double rel = norm3(step) / (norm3(p) + 1e-300);
        p = trial;
        ssr = trial_ssr;
        accepted = true;
        if (rel < 1e-10 || ssr == 0) {
          ssr_out = ssr;
          return true;
        }
        break;
      }
      for (double& s : step) s *= 0.5;
    }
    if (!accepted) {
      ssr_out = ssr;
      // No descent along the Gauss-Newton direction: either we are at the
      // minimum (tiny gradient) or genuinely stalled.
      return norm3(jtr) < 1e-8 * (1.0 + ssr);
    }
  }
  ssr_out = ssr;
  return false;
}

// Derivative-free fallback: standard Nelder-Mead on the same objective.
bool nelder_mead(const ExpProblem& prob, Vec3& p, double& ssr_out, int& iterations) {
  std::array<Vec3, 4> simplex;
  std::array<double, 4> val;
  simplex[0] = p;
  for (int k = 0; k < 3; ++k) {
    Vec3 v = p;
    const double scale = std::abs(v[k]) > 1e-12 ? 0.1 * std::abs(v[k]) : 1e-4;
    v[k] += scale;
    simplex[k + 1] = v;
  }
  for (int k = 0; k < 4; ++k) val[k] = prob.ssr(simplex[k]);

  auto order = [&] {
    std::array<int, 4> idx = {0, 1, 2, 3};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return val[a] < val[b]; });
    std::array<Vec3, 4> s2;
    std::array<double, 4> v2;
    for (int k = 0; k < 4; ++k) {
      s2[k] = simplex[idx[k]];
      v2[k] = val[idx[k]];
    }
    simplex = s2;
    val = v2;
  };

  for (int it = 0; it < 2000; ++it) {
    iterations = it + 1;
    order();
    if ((val[3] - val[0]) <= 1e-12 * (std::abs(val[0]) + 1e-300)) {
      p = simplex[0];
      ssr_out = val[0];
      return true;
    }
    Vec3 centroid{};
    for (int k = 0; k < 3; ++k)
      for (int a = 0; a < 3; ++a) centroid[a] += simplex[k][a] / 3.0;
    auto blend = [&](double coef) {
      Vec3 v;
      for (int a = 0; a < 3; ++a) v[a] = centroid[a] + coef * (simplex[3][a] - centroid[a]);
      return v;
    };
    const Vec3 refl = blend(-1.0);
    const double f_refl = prob.ssr(refl);
    if (f_refl < val[0]) {
      const Vec3 expd = blend(-2.0);
      const double f_expd = prob.ssr(expd);
      if (f_expd < f_refl) {
        simplex[3] = expd;
        val[3] = f_expd;
      } else {
        simplex[3] = refl;
        val[3] = f_refl;
      }
      continue;
    }
    if (f_refl < val[2]) {
      simplex[3] = refl;
      val[3] = f_refl;
      continue;
    }
    const Vec3 contr = blend(f_refl < val[3] ? -0.5 : 0.5);
    const double f_contr = prob.ssr(contr);
    if (f_contr < std::min(f_refl, val[3])) {
      simplex[3] = contr;
      val[3] = f_contr;
      continue;
    }
    for (int k = 1; k < 4; ++k) {
      for (int a = 0; a < 3; ++a) simplex[k][a] = simplex[0][a] + 0.5 * (simplex[k][a] - simplex[0][a]);
      val[k] = prob.ssr(simplex[k]);
    }
  }
  order();
  p = simplex[0];
  ssr_out = val[0];
  return false;
}

// Covariance of (rate, amplitude, baseline) as the inverse of J^T J; false on
// a singular system.
bool covariance3(const ExpProblem& prob, const Vec3& p, Mat3& cov) {
  Mat3 jtj;
  Vec3 jtr;
  prob.normal_equations(p, jtj, jtr);
  for (int col = 0; col < 3; ++col) {
    Vec3 e{}, x{};
    e[col] = 1.0;
    if (!solve3(jtj, e, x)) return false;
    for (int row = 0; row < 3; ++row) cov[row][col] = x[row];
  }
  return true;
}

FitResult make_covariance_result(double estimate, double variance, double residual_norm) {
  FitResult r;
  r.estimate = estimate;
  const double half = variance > 0 ? z95 * std::sqrt(variance) : inf;
  r.ci_low = estimate - half;
  r.ci_high = estimate + half;
  r.residual_norm = residual_norm;
  return r;
}

struct LinFit {
  double slope = 0;
  double intercept = 0;
  double slope_var = 0;
  double intercept_var = 0;
  double cov_ab = 0;
  bool ok = false;
};

// Weighted straight-line fit y = a x + b; weights are 1/sigma^2 (all 1 when
// unweighted, in which case variances are scaled by the residual variance).
LinFit weighted_linfit(std::span<const double> x, std::span<const double> y,
                       std::span<const double> w, bool scale_by_residuals) {
  LinFit fit;
  double s = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
    sxx += w[i] * x[i] * x[i];
    sxy += w[i] * x[i] * y[i];
  }
  const double d = s * sxx - sx * sx;
  if (!(std::abs(d) > 1e-30 * (std::abs(s * sxx) + sx * sx + 1e-300))) return fit;
  fit.slope = (s * sxy - sx * sy) / d;
  fit.intercept = (sxx * sy - sx * sxy) / d;
  fit.slope_var = s / d;
  fit.intercept_var = sxx / d;
  fit.cov_ab = -sx / d;
  if (scale_by_residuals && x.size() > 2) {
    double chi2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.slope * x[i] - fit.intercept;
      chi2 += w[i] * r * r;
    }
    const double s2 = chi2 / static_cast<double>(x.size() - 2);
    fit.slope_var *= s2;
    fit.intercept_var *= s2;
    fit.cov_ab *= s2;
  }
  fit.ok = true;
  return fit;
}

double percentile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0;
  const double f = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(f);
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (f - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

ExponentialFit fit_exponential(const experiment::Trace& trace) {
  trace.validate();
  if (trace.times_s.size() < 5)
    throw std::invalid_argument("fit_exponential: at least 5 points required");

  const auto& t = trace.times_s;
  const auto& y = trace.populations;
  const std::size_t n = t.size();

  const auto [y_min_it, y_max_it] = std::minmax_element(y.begin(), y.end());
  ExponentialFit out;
  if (*y_min_it == *y_max_it) {
    // Perfectly flat data: the rate is unidentifiable, not a fit failure.
    out.method = "degenerate";
    out.converged = true;
    out.rate_per_s = {0.0, 0.0, inf, 0.95, 0.0, 0, 0};
    out.amplitude = {0.0, -inf, inf, 0.95, 0.0, 0, 0};
    out.baseline = make_covariance_result(*y_min_it, 0.0, 0.0);
    out.baseline.ci_low = out.baseline.ci_high = *y_min_it;
    return out;
  }

  // Initial guess: baseline from the tail, amplitude from the first point,
  // rate from a log-linear regression of baseline-subtracted data.
  const std::size_t tail = std::max<std::size_t>(1, n / 5);
  double b0 = 0;
  for (std::size_t i = n - tail; i < n; ++i) b0 += y[i] / static_cast<double>(tail);
  double a0 = y.front() - b0;
  const double t_span = t.back() - t.front();
  double r0 = 3.0 / t_span;
  if (a0 == 0) a0 = *y_max_it - *y_min_it;
  double sz = 0, st = 0, szt = 0, stt = 0, cnt = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (y[i] - b0) / a0;
    if (u > 0.02) {
      const double z = std::log(u);
      sz += z;
      st += t[i];
      szt += z * t[i];
      stt += t[i] * t[i];
      cnt += 1;
    }
  }
  if (cnt >= 2) {
    const double denom = cnt * stt - st * st;
    if (std::abs(denom) > 0) {
      const double slope = (cnt * szt - st * sz) / denom;
      if (slope < 0 && std::isfinite(slope)) r0 = -slope;
    }
  }

  const ExpProblem prob{t, y, trace.sigmas};
  Vec3 p = {r0, a0, b0};
  int iterations = 0;
  double ssr = prob.ssr(p);
  bool ok = gauss_newton(prob, p, iterations, ssr);
  std::string method = "gauss-newton";
  if (!ok) {
    int nm_iter = 0;
    ok = nelder_mead(prob, p, ssr, nm_iter);
    iterations += nm_iter;
    method = "nelder-mead";
    if (ok) {
      // Polish so the covariance is evaluated at a stationary point.
      int polish_iter = 0;
      if (gauss_newton(prob, p, polish_iter, ssr)) iterations += polish_iter;
    }
  }
  if (!ok) {
    std::ostringstream msg;
    msg << "fit_exponential failed to converge after " << iterations
        << " iterations (best chi2 " << fmt::number(ssr) << ", rate " << fmt::number(p[0])
        << ", amplitude " << fmt::number(p[1]) << ", baseline " << fmt::number(p[2]) << ")";
    throw NonConvergenceError(msg.str());
  }

  Mat3 cov;
  const bool have_cov = covariance3(prob, p, cov);
  const double rnorm = std::sqrt(ssr);
  out.rate_per_s = make_covariance_result(p[0], have_cov ? cov[0][0] : -1, rnorm);
  out.amplitude = make_covariance_result(p[1], have_cov ? cov[1][1] : -1, rnorm);
  out.baseline = make_covariance_result(p[2], have_cov ? cov[2][2] : -1, rnorm);
  out.converged = true;
  out.iterations = iterations;
  out.method = method;
  out.chi2 = ssr;
  return out;
}

NthExtraction extract_nth(std::span<const experiment::SweepPoint> points, double kappa_hz,
                          double chi_hz, const ExtractionOptions& opts) {
  if (points.size() < 3)
    throw std::invalid_argument("extract_nth: at least 3 sweep points required");
  if (opts.n_bootstrap < 0) throw std::invalid_argument("extract_nth: n_bootstrap must be >= 0");
  if (!(opts.coverage > 0) || !(opts.coverage < 1))
    throw std::invalid_argument("extract_nth: coverage must be in (0, 1)");
  if (opts.gamma_offset_per_s < 0)
    throw std::invalid_argument("extract_nth: gamma_offset must be >= 0");

  const std::size_t n = points.size();
  std::vector<double> x(n), g(n), w(n);
  bool weighted = true;
  for (std::size_t i = 0; i < n; ++i) {
    const auto cs =
        dephasing::pure_dephasing_from_times(points[i].coherence.t1_s, points[i].coherence.t2e_s);
    x[i] = points[i].axis_value;
    g[i] = cs.gamma_phi_per_s.value;
    if (!(cs.gamma_phi_per_s.err > 0)) weighted = false;
    w[i] = cs.gamma_phi_per_s.err;
  }
  for (std::size_t i = 0; i < n; ++i) w[i] = weighted ? 1.0 / (w[i] * w[i]) : 1.0;

  const double analytic = dephasing::dephasing_slope_per_s(kappa_hz, chi_hz);

  // Full-data fit.
  auto fit_once = [&](std::span<const double> xs, std::span<const double> ys,
                      std::span<const double> ws, double& a, double& b) -> bool {
    if (opts.fix_slope) {
      a = analytic;
      double sw = 0, sr = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sw += ws[i];
        sr += ws[i] * (ys[i] - a * xs[i]);
      }
      if (!(sw > 0)) return false;
      b = sr / sw;
      return true;
    }
    const LinFit lf = weighted_linfit(xs, ys, ws, !weighted);
    a = lf.slope;
    b = lf.intercept;
    return lf.ok;
  };

  double a_fit = 0, b_fit = 0;
  if (!fit_once(x, g, w, a_fit, b_fit))
    throw std::invalid_argument("extract_nth: axis values are degenerate (no spread)");

  NthExtraction out;
  out.analytic_slope_per_s = analytic;
  out.intercept_per_s = b_fit;
  out.slope_fixed = opts.fix_slope;
  out.n_points = static_cast<int>(n);

  const double n_th_est =
      opts.fix_slope ? (b_fit - opts.gamma_offset_per_s) / a_fit : b_fit / a_fit;

  double rnorm = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g[i] - a_fit * x[i] - b_fit;
    rnorm += w[i] * r * r;
  }
  rnorm = std::sqrt(rnorm);

  // Slope significance against zero from the linear-fit covariance.
  if (!opts.fix_slope) {
    const LinFit lf = weighted_linfit(x, g, w, !weighted);
    out.indeterminate = std::abs(a_fit) < z95 * std::sqrt(std::max(lf.slope_var, 0.0));
  }

  out.n_th = {n_th_est, n_th_est, n_th_est, opts.coverage, rnorm, opts.n_bootstrap, opts.seed};
  out.slope_per_s = {a_fit, a_fit, a_fit, opts.coverage, rnorm, opts.n_bootstrap, opts.seed};

  if (opts.n_bootstrap == 0) {
    // Covariance-based fallback intervals (delta method for the ratio).
    const LinFit lf = weighted_linfit(x, g, w, !weighted);
    const double var_n = lf.intercept_var / (a_fit * a_fit) +
                         b_fit * b_fit * lf.slope_var / std::pow(a_fit, 4) -
                         2.0 * b_fit * lf.cov_ab / std::pow(a_fit, 3);
    const double half_n = var_n > 0 ? z95 * std::sqrt(var_n) : inf;
    out.n_th.ci_low = n_th_est - half_n;
    out.n_th.ci_high = n_th_est + half_n;
    const double half_a = lf.slope_var > 0 ? z95 * std::sqrt(lf.slope_var) : 0;
    out.slope_per_s.ci_low = a_fit - half_a;
    out.slope_per_s.ci_high = a_fit + half_a;
    return out;
  }

  std::vector<double> boot_n, boot_a;
  boot_n.reserve(static_cast<std::size_t>(opts.n_bootstrap));
  boot_a.reserve(static_cast<std::size_t>(opts.n_bootstrap));
  std::vector<double> rx(n), rg(n), rw(n);
  for (int rep = 0; rep < opts.n_bootstrap; ++rep) {
    auto eng = rng::engine_for(opts.seed, rng::stream_bootstrap, static_cast<std::uint64_t>(rep));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = pick(eng);
      rx[i] = x[j];
      rg[i] = g[j];
      rw[i] = w[j];
    }
    double a_r = 0, b_r = 0;
    if (!fit_once(rx, rg, rw, a_r, b_r)) continue;  // degenerate resample: all one x
    boot_a.push_back(a_r);
    boot_n.push_back(opts.fix_slope ? (b_r - opts.gamma_offset_per_s) / a_r : b_r / a_r);
  }
  out.bootstrap_kept = static_cast<int>(boot_n.size());

  const double p_lo = (1.0 - opts.coverage) / 2.0;
  auto fill_ci = [&](FitResult& fr, std::vector<double>& samples) {
    if (samples.empty()) return;  // keep the point-estimate interval
    std::sort(samples.begin(), samples.end());
    fr.ci_low = std::min(percentile(samples, p_lo), fr.estimate);
    fr.ci_high = std::max(percentile(samples, 1.0 - p_lo), fr.estimate);
  };
  fill_ci(out.n_th, boot_n);
  fill_ci(out.slope_per_s, boot_a);
  return out;
}

CoherenceReport coherence_report(std::span<const ReportRow> rows) {
  CoherenceReport report;
  report.rows.reserve(rows.size());
  for (const auto& row : rows) {
    row.config.validate();
    // Rows only need the measured times filled in; everything derived
    // (ratio, gamma_phi, t_phi, flags) is recomputed here.
    const auto cs = dephasing::pure_dephasing_from_times(row.coherence.t1_s, row.coherence.t2e_s,
                                                         row.coherence.t2r_s);
    const double kappa_total = row.config.readout.kappa_total_hz();
    const auto bound = dephasing::photon_bound_from_coherence(
        cs.t1_s, cs.t2e_s, kappa_total, row.config.transmon.chi_hz, row.config.readout.f_hz);

    CoherenceReportRow r;
    r.label = row.label;
    r.f_ro_ghz = row.config.readout.f_hz / 1e9;
    r.kappa_i_mhz = row.config.readout.kappa_i_hz / 1e6;
    r.kappa_c_mhz = (row.config.readout.kappa_c1_hz + row.config.readout.kappa_c2_hz) / 1e6;
    r.chi_mhz = row.config.transmon.chi_hz / 1e6;
    r.t1_us = cs.t1_s.value * 1e6;
    r.t2e_us = cs.t2e_s.value * 1e6;
    r.ratio = cs.ratio.value;
    r.ratio_err = cs.ratio.err;
    r.t_phi_us = cs.t_phi_s * 1e6;
    r.below_sensitivity = bound.below_sensitivity;
    r.nbar_bound = bound.nbar;
    r.t_eff_mk = bound.t_eff_k * 1e3;
    report.rows.push_back(std::move(r));
  }

  const std::vector<std::string> headers = {"label",    "f_ro_ghz", "kappa_i_mhz", "kappa_c_mhz",
                                            "chi_mhz",  "t1_us",    "t2e_us",      "ratio",
                                            "ratio_err", "t_phi_us", "nbar_bound",  "t_eff_mk",
                                            "below_sensitivity"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : report.rows) {
    cells.push_back({r.label, fmt::number(r.f_ro_ghz), fmt::number(r.kappa_i_mhz),
                     fmt::number(r.kappa_c_mhz), fmt::number(r.chi_mhz), fmt::number(r.t1_us),
                     fmt::number(r.t2e_us), fmt::number(r.ratio), fmt::number(r.ratio_err),
                     fmt::number(r.t_phi_us), fmt::number(r.nbar_bound), fmt::number(r.t_eff_mk),
                     r.below_sensitivity ? "1" : "0"});
  }

  std::ostringstream csv;
  for (std::size_t c = 0; c < headers.size(); ++c)
    csv << headers[c] << (c + 1 < headers.size() ? "," : "\n");
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c) csv << row[c] << (c + 1 < row.size() ? "," : "\n");
  report.csv = csv.str();

  std::vector<std::size_t> width(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) width[c] = headers[c].size();
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream text;
  auto emit_row = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      text << row[c] << std::string(width[c] - row[c].size(), ' ');
      text << (c + 1 < row.size() ? "  " : "\n");
    }
  };
  emit_row(headers);
  for (const auto& row : cells) emit_row(row);
  report.text = text.str();
  return report;
}

}  // namespace cavatten::analysis
