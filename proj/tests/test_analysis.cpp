#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cavatten/analysis.hpp"
#include "cavatten/dephasing.hpp"
#include "cavatten/experiment.hpp"

using namespace cavatten;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return v;
}

experiment::DeviceConfig sweep_config(double jitter) {
  experiment::DeviceConfig cfg;
  cfg.transmon.f_ge_hz = 4.75e9;
  cfg.transmon.anharmonicity_hz = 0.25e9;
  cfg.transmon.chi_hz = 1.2e6;
  cfg.transmon.gamma1_per_s = 1.0 / 102e-6;
  cfg.readout.f_hz = 7.573e9;
  cfg.readout.kappa_i_hz = 11.4e6;
  cfg.readout.kappa_c1_hz = 1.9e6;
  cfg.readout.kappa_c2_hz = 0.0;
  cfg.environment.ports = {{"internal", 11.4e6, 0.0}, {"input", 1.9e6, 2.8e-3}};
  cfg.t1_jitter = jitter;
  return cfg;
}

// A sweep point with exact forward-model coherence times and zero errors.
experiment::SweepPoint exact_point(double axis, double nbar, double t1_s, double kappa_hz,
                                   double chi_hz, double gamma_extra) {
  experiment::SweepPoint p;
  p.axis_value = axis;
  p.coherence = dephasing::predict_coherence(t1_s, nbar, kappa_hz, chi_hz, gamma_extra);
  return p;
}

}  // namespace

TEST_CASE("fit_exponential recovers an exact T1 trace") {
  const double rate = 1.0 / 120e-6;
  const auto times = linspace(0.0, 400e-6, 25);
  const auto tr = experiment::simulate_trace(experiment::TraceKind::t1, rate, times, 1000, 1,
                                             std::nullopt, /*exact=*/true);
  const auto fit = analysis::fit_exponential(tr);
  CHECK(fit.converged);
  CHECK(fit.method == "gauss-newton");
  CHECK(fit.rate_per_s.estimate == doctest::Approx(rate).epsilon(1e-8));
  CHECK(fit.amplitude.estimate == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(fit.baseline.estimate) < 1e-8);
  CHECK(fit.chi2 < 1e-10);
  CHECK(fit.rate_per_s.ci_low <= rate);
  CHECK(fit.rate_per_s.ci_high >= rate);
}

TEST_CASE("fit_exponential recovers an exact Ramsey trace") {
  const double rate = 1.0 / 150e-6;
  const auto times = linspace(0.0, 500e-6, 20);
  const auto tr = experiment::simulate_trace(experiment::TraceKind::ramsey, rate, times, 1000, 1,
                                             std::nullopt, /*exact=*/true);
  const auto fit = analysis::fit_exponential(tr);
  CHECK(fit.converged);
  CHECK(fit.rate_per_s.estimate == doctest::Approx(rate).epsilon(1e-7));
  CHECK(fit.amplitude.estimate == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(fit.baseline.estimate == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("fit_exponential round-trips a sampled trace within its interval") {
  const double rate = 1e4;
  const auto times = linspace(0.0, 400e-6, 30);
  const auto tr =
      experiment::simulate_trace(experiment::TraceKind::t1, rate, times, 2000, 42);
  const auto fit = analysis::fit_exponential(tr);
  CHECK(fit.converged);
  CHECK(std::abs(fit.rate_per_s.estimate - rate) < 0.05 * rate);
  CHECK(fit.rate_per_s.ci_low <= rate);
  CHECK(fit.rate_per_s.ci_high >= rate);
  CHECK(fit.rate_per_s.ci_low < fit.rate_per_s.estimate);
  CHECK(fit.rate_per_s.ci_high > fit.rate_per_s.estimate);
}

TEST_CASE("fit_exponential reports flat data as degenerate instead of failing") {
  experiment::Trace tr;
  tr.times_s = linspace(0.0, 70e-6, 8);
  tr.populations.assign(8, 0.37);
  tr.sigmas.assign(8, 0.02);
  tr.shots = 100;
  const auto fit = analysis::fit_exponential(tr);
  CHECK(fit.method == "degenerate");
  CHECK(fit.rate_per_s.estimate == 0.0);
  CHECK(fit.rate_per_s.ci_low == 0.0);
  CHECK(std::isinf(fit.rate_per_s.ci_high));
  CHECK(fit.amplitude.estimate == 0.0);
  CHECK(fit.baseline.estimate == 0.37);
}

TEST_CASE("fit_exponential rejects traces with fewer than 5 points") {
  experiment::Trace tr;
  tr.times_s = {0.0, 1e-6, 2e-6, 3e-6};
  tr.populations = {1.0, 0.9, 0.8, 0.7};
  tr.sigmas = {0.01, 0.01, 0.01, 0.01};
  tr.shots = 100;
  CHECK_THROWS_AS(analysis::fit_exponential(tr), std::invalid_argument);
}

TEST_CASE("extract_nth on exact forward-model points") {
  const double kappa = 8e6, chi = 1.1e6, t1 = 100e-6, n_th = 2e-4;
  const double analytic = dephasing::dephasing_slope_per_s(kappa, chi);
  std::vector<experiment::SweepPoint> pts;
  for (double n : {0.0, 1e-3, 2e-3, 4e-3, 8e-3}) {
    pts.push_back(exact_point(n, n_th + n, t1, kappa, chi, 0.0));
  }
  analysis::ExtractionOptions opts;
  opts.n_bootstrap = 0;
  const auto ex = analysis::extract_nth(pts, kappa, chi, opts);
  CHECK(ex.n_points == 5);
  CHECK_FALSE(ex.slope_fixed);
  CHECK_FALSE(ex.indeterminate);
  CHECK(ex.analytic_slope_per_s == analytic);
  CHECK(ex.slope_per_s.estimate == doctest::Approx(analytic).epsilon(1e-9));
  CHECK(ex.n_th.estimate == doctest::Approx(n_th).epsilon(1e-9));
}

TEST_CASE("extract_nth with a pinned slope removes a known dephasing offset") {
  const double kappa = 8e6, chi = 1.1e6, t1 = 100e-6, n_th = 2e-4, offset = 300.0;
  const double analytic = dephasing::dephasing_slope_per_s(kappa, chi);
  std::vector<experiment::SweepPoint> pts;
  for (double n : {0.0, 1e-3, 2e-3, 4e-3, 8e-3}) {
    pts.push_back(exact_point(n, n_th + n, t1, kappa, chi, offset));
  }
  analysis::ExtractionOptions opts;
  opts.n_bootstrap = 0;
  opts.fix_slope = true;

  // Without declaring the offset, it is mistaken for photons.
  const auto biased = analysis::extract_nth(pts, kappa, chi, opts);
  CHECK(biased.slope_fixed);
  CHECK(biased.slope_per_s.estimate == analytic);
  CHECK(biased.n_th.estimate == doctest::Approx(n_th + offset / analytic).epsilon(1e-6));

  // Declaring it recovers the true residual occupation.
  opts.gamma_offset_per_s = offset;
  const auto corrected = analysis::extract_nth(pts, kappa, chi, opts);
  CHECK(corrected.n_th.estimate == doctest::Approx(n_th).epsilon(1e-9));
}

TEST_CASE("extract_nth reports a negative intercept as a negative n_th") {
  const double kappa = 8e6, chi = 1.1e6, n_true = -1e-4;
  const double analytic = dephasing::dephasing_slope_per_s(kappa, chi);
  std::vector<experiment::SweepPoint> pts;
  for (double n : {1e-3, 2e-3, 4e-3, 8e-3}) {
    experiment::SweepPoint p;
    p.axis_value = n;
    const double gphi = analytic * (n + n_true);
    p.coherence.t1_s = {100e-6, 0.0};
    p.coherence.t2e_s = {1.0 / (5000.0 + gphi), 0.0};
    pts.push_back(p);
  }
  analysis::ExtractionOptions opts;
  opts.n_bootstrap = 0;
  const auto ex = analysis::extract_nth(pts, kappa, chi, opts);
  CHECK(ex.n_th.estimate == doctest::Approx(n_true).epsilon(1e-6));
}

TEST_CASE("extract_nth flags a slope consistent with zero as indeterminate") {
  // Dephasing that does not respond to the injection axis: fixed nbar 4e-3.
  const double kappa = 8e6, chi = 1.1e6;
  std::vector<experiment::SweepPoint> pts;
  for (double n : {0.0, 2e-3, 4e-3, 8e-3}) {
    auto p = exact_point(n, 4e-3, 100e-6, kappa, chi, 0.0);
    p.coherence.t1_s.err = 2e-6;
    p.coherence.t2e_s.err = 2e-6;
    pts.push_back(p);
  }
  analysis::ExtractionOptions opts;
  opts.n_bootstrap = 0;
  const auto ex = analysis::extract_nth(pts, kappa, chi, opts);
  CHECK(ex.indeterminate);
}

TEST_CASE("extract_nth input validation") {
  const double kappa = 8e6, chi = 1.1e6;
  std::vector<experiment::SweepPoint> two = {exact_point(0.0, 1e-3, 1e-4, kappa, chi, 0),
                                             exact_point(1e-3, 2e-3, 1e-4, kappa, chi, 0)};
  CHECK_THROWS_AS(analysis::extract_nth(two, kappa, chi), std::invalid_argument);
  std::vector<experiment::SweepPoint> flat_axis = {exact_point(2e-3, 1e-3, 1e-4, kappa, chi, 0),
                                                   exact_point(2e-3, 1e-3, 1e-4, kappa, chi, 0),
                                                   exact_point(2e-3, 1e-3, 1e-4, kappa, chi, 0)};
  CHECK_THROWS_AS(analysis::extract_nth(flat_axis, kappa, chi), std::invalid_argument);
}

TEST_CASE("extract_nth bootstrap intervals on a noisy sweep") {
  const auto cfg = sweep_config(0.03);
  const std::vector<double> n_add = {0.0, 1e-3, 2e-3, 4e-3, 8e-3, 1.6e-2};
  const auto ds = experiment::simulate_noise_injection_sweep(cfg, n_add, 10, 21);
  const double kappa = 13.3e6, chi = 1.2e6;
  analysis::ExtractionOptions opts;
  opts.n_bootstrap = 200;
  opts.seed = 9;
  const auto ex = analysis::extract_nth(ds.points, kappa, chi, opts);
  CHECK_FALSE(ex.indeterminate);
  CHECK(ex.n_th.n_bootstrap == 200);
  CHECK(ex.n_th.seed == 9);
  CHECK(ex.bootstrap_kept > 100);
  CHECK(ex.bootstrap_kept <= 200);
  CHECK(ex.n_th.ci_low < ex.n_th.ci_high);
  CHECK(ex.n_th.ci_low <= ex.n_th.estimate);
  CHECK(ex.n_th.ci_high >= ex.n_th.estimate);
  // Truth is 4e-4; a 3% T1 scatter over 10 repeats localizes it loosely.
  CHECK(std::abs(ex.n_th.estimate - 4e-4) < 5e-4);
  CHECK(ex.slope_per_s.estimate ==
        doctest::Approx(dephasing::dephasing_slope_per_s(kappa, chi)).epsilon(0.15));
}

TEST_CASE("coherence_report summarizes measured devices") {
  struct Spec {
    const char* label;
    double f_ghz, ki_mhz, kc_mhz, chi_mhz, t1_us, t2e_us;
    double ratio, teff_mk, nbar, teff_reported_mk;
  };
  // t2e values are the forward model evaluated at the quoted nbar, so the
  // report's inversion must land back on (nbar, t_eff).
  const Spec specs[] = {
      {"none", 7.573, 15.0, 1.5, 1.5, 58.3, 83.504311, 0.716160, 65.776811774, 4e-3, 65.0},
      {"al-75", 7.847, 0.14, 0.10, 1.1, 115.0, 172.793093, 0.751274, 54.510055140, 1e-3, 55.0},
      {"brass-300", 7.573, 11.4, 1.9, 1.2, 102.0, 193.353385, 0.947811, 46.450148823, 4e-4, 46.0},
      {"cu-75", 7.857, 7.1, 0.9, 1.1, 100.0, 192.806780, 0.964034, 44.271354003, 2e-4, 44.0},
  };
  std::vector<analysis::ReportRow> rows;
  for (const auto& s : specs) {
    analysis::ReportRow r;
    r.label = s.label;
    r.config.transmon.f_ge_hz = 5e9;
    r.config.transmon.anharmonicity_hz = 0.25e9;
    r.config.transmon.chi_hz = s.chi_mhz * 1e6;
    r.config.transmon.gamma1_per_s = 1.0 / (s.t1_us * 1e-6);
    r.config.readout.f_hz = s.f_ghz * 1e9;
    r.config.readout.kappa_i_hz = s.ki_mhz * 1e6;
    r.config.readout.kappa_c1_hz = s.kc_mhz * 1e6;
    r.config.environment.ports = {{"internal", s.ki_mhz * 1e6, 0.0},
                                  {"input", s.kc_mhz * 1e6, 0.0}};
    r.coherence.t1_s = {s.t1_us * 1e-6, 2e-6};
    r.coherence.t2e_s = {s.t2e_us * 1e-6, 3e-6};
    rows.push_back(std::move(r));
  }
  const auto rep = analysis::coherence_report(rows);
  REQUIRE(rep.rows.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& row = rep.rows[i];
    const auto& s = specs[i];
    CHECK(row.label == s.label);
    CHECK(row.f_ro_ghz == doctest::Approx(s.f_ghz).epsilon(1e-12));
    CHECK(row.kappa_i_mhz == doctest::Approx(s.ki_mhz).epsilon(1e-12));
    CHECK(row.kappa_c_mhz == doctest::Approx(s.kc_mhz).epsilon(1e-12));
    CHECK(row.chi_mhz == doctest::Approx(s.chi_mhz).epsilon(1e-12));
    CHECK(row.t1_us == doctest::Approx(s.t1_us).epsilon(1e-12));
    CHECK(row.t2e_us == doctest::Approx(s.t2e_us).epsilon(1e-12));
    CHECK(row.ratio == doctest::Approx(s.ratio).epsilon(1e-6));
    CHECK(row.ratio_err > 0.0);
    CHECK(row.nbar_bound == doctest::Approx(s.nbar).epsilon(1e-6));
    CHECK(row.t_eff_mk == doctest::Approx(s.teff_mk).epsilon(1e-6));
    CHECK(std::abs(row.t_eff_mk - s.teff_reported_mk) < 2.0);
    CHECK_FALSE(row.below_sensitivity);
    CHECK(std::isfinite(row.t_phi_us));
    CHECK(rep.text.find(s.label) != std::string::npos);
    CHECK(rep.csv.find(s.label) != std::string::npos);
  }
  // Attenuated devices bound colder effective temperatures than the bare one.
  CHECK(rep.rows[3].t_eff_mk < rep.rows[0].t_eff_mk);
}

TEST_CASE("coherence_report edge rows") {
  SUBCASE("empty input gives a header-only table") {
    const auto rep = analysis::coherence_report({});
    CHECK(rep.rows.empty());
    const auto non_empty_lines = [](const std::string& text) {
      std::size_t n = 0, pos = 0;
      while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        if (nl > pos) ++n;
        pos = nl + 1;
      }
      return n;
    };
    CHECK(non_empty_lines(rep.csv) == 1);
  }
  SUBCASE("relaxation-limited device prints inf and zero bounds") {
    analysis::ReportRow r;
    r.label = "limited";
    r.config.transmon.f_ge_hz = 5e9;
    r.config.transmon.anharmonicity_hz = 0.25e9;
    r.config.transmon.chi_hz = 1.1e6;
    r.config.transmon.gamma1_per_s = 1e4;
    r.config.readout.f_hz = 7.6e9;
    r.config.readout.kappa_i_hz = 7e6;
    r.config.readout.kappa_c1_hz = 1e6;
    r.config.environment.ports = {{"internal", 7e6, 0.0}};
    r.coherence.t1_s = {100e-6, 2e-6};
    r.coherence.t2e_s = {200e-6, 3e-6};  // exactly 2 T1
    const std::vector<analysis::ReportRow> rows = {r};
    const auto rep = analysis::coherence_report(rows);
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].below_sensitivity);
    CHECK(rep.rows[0].nbar_bound == 0.0);
    CHECK(rep.rows[0].t_eff_mk == 0.0);
    CHECK(std::isinf(rep.rows[0].t_phi_us));
    CHECK(rep.text.find("inf") != std::string::npos);
  }
}
