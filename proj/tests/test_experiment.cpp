#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cavatten/dephasing.hpp"
#include "cavatten/experiment.hpp"
#include "cavatten/thermal.hpp"

using namespace cavatten;

namespace {

// Brass-attenuator-style device: readout at 7.573 GHz with 11.4 MHz internal
// and 1.9 MHz external linewidth; the input port carries 2.8e-3 photons so the
// rate-weighted residual occupation lands at 4e-4.
experiment::DeviceConfig make_config(double jitter = 0.0) {
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

double kappa_total(const experiment::DeviceConfig& cfg) {
  return cfg.readout.kappa_i_hz + cfg.readout.kappa_c1_hz + cfg.readout.kappa_c2_hz;
}

}  // namespace

TEST_CASE("simulate_trace exact mode reproduces the model") {
  const std::vector<double> times = {0.0, 20e-6, 50e-6, 100e-6, 200e-6, 400e-6};
  const double rate = 1.0 / 100e-6;
  const auto tr = experiment::simulate_trace(experiment::TraceKind::t1, rate, times, 500, 1,
                                             std::nullopt, /*exact=*/true);
  REQUIRE(tr.times_s.size() == times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(tr.populations[i] == std::exp(-rate * times[i]));
    CHECK(tr.sigmas[i] > 0.0);
  }
  const auto ramsey = experiment::simulate_trace(experiment::TraceKind::ramsey, rate, times, 500,
                                                 1, std::nullopt, /*exact=*/true);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(ramsey.populations[i] ==
          doctest::Approx(0.5 + 0.5 * std::exp(-rate * times[i])).epsilon(1e-15));
  }
}

TEST_CASE("simulate_trace sampling is seeded and Laplace-smoothed") {
  const std::vector<double> times = {0.0, 10e-6, 30e-6, 60e-6, 120e-6, 250e-6, 500e-6};
  const double rate = 1.0 / 80e-6;
  const auto a = experiment::simulate_trace(experiment::TraceKind::t1, rate, times, 1000, 42);
  const auto b = experiment::simulate_trace(experiment::TraceKind::t1, rate, times, 1000, 42);
  const auto c = experiment::simulate_trace(experiment::TraceKind::t1, rate, times, 1000, 43);
  CHECK(a.populations == b.populations);
  CHECK(a.sigmas == b.sigmas);
  CHECK(a.populations != c.populations);

  // At t = 0 the excited population is exactly 1: every shot succeeds, and
  // the Laplace-smoothed error stays finite instead of collapsing to zero.
  CHECK(a.populations[0] == 1.0);
  const double p_smooth = (1000.0 + 1.0) / (1000.0 + 2.0);
  CHECK(a.sigmas[0] ==
        doctest::Approx(std::sqrt(p_smooth * (1.0 - p_smooth) / 1000.0)).epsilon(1e-12));
  for (double s : a.sigmas) CHECK(s > 0.0);
  for (double p : a.populations) {
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
}

TEST_CASE("simulate_trace validates its inputs") {
  const std::vector<double> good = {0.0, 1e-6, 2e-6, 3e-6, 4e-6};
  const std::vector<double> unsorted = {0.0, 2e-6, 1e-6};
  const std::vector<double> duplicated = {0.0, 1e-6, 1e-6};
  const std::vector<double> negative = {-1e-6, 1e-6};
  using experiment::TraceKind;
  CHECK_THROWS_AS(experiment::simulate_trace(TraceKind::t1, 1e4, unsorted, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(experiment::simulate_trace(TraceKind::t1, 1e4, duplicated, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(experiment::simulate_trace(TraceKind::t1, 1e4, negative, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(experiment::simulate_trace(TraceKind::t1, 1e4, good, 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(experiment::simulate_trace(TraceKind::t1, -1e4, good, 100, 1),
                  std::invalid_argument);
  // amplitude + baseline above 1 would put the model outside [0, 1]
  experiment::TraceModel bad{0.8, 0.5};
  CHECK_THROWS_AS(experiment::simulate_trace(TraceKind::t1, 1e4, good, 100, 1, bad),
                  std::invalid_argument);
}

TEST_CASE("Trace::validate") {
  experiment::Trace tr;
  tr.times_s = {0.0, 1e-6};
  tr.populations = {1.0, 0.5};
  tr.sigmas = {0.01, 0.01};
  tr.shots = 100;
  CHECK_NOTHROW(tr.validate());
  tr.populations = {1.0};
  CHECK_THROWS_AS(tr.validate(), std::invalid_argument);
  tr.populations = {1.0, 1.5};
  CHECK_THROWS_AS(tr.validate(), std::invalid_argument);
  tr.populations = {1.0, 0.5};
  tr.sigmas = {0.01, 0.0};
  CHECK_THROWS_AS(tr.validate(), std::invalid_argument);
}

TEST_CASE("noise-injection sweep at zero jitter is the forward model exactly") {
  const auto cfg = make_config(0.0);
  const double t1_base = 1.0 / cfg.transmon.gamma1_per_s;
  const double n_th = cfg.thermal_occupation();
  CHECK(n_th == doctest::Approx(4e-4).epsilon(1e-12));

  const std::vector<double> n_add = {0.0, 1e-3, 2e-3, 4e-3, 8e-3, 1.6e-2};
  const auto ds = experiment::simulate_noise_injection_sweep(cfg, n_add, 10, 5);
  CHECK(ds.axis == experiment::SweepAxis::n_add);
  CHECK(ds.seed == 5);
  CHECK(ds.warnings.empty());
  REQUIRE(ds.points.size() == n_add.size());
  for (std::size_t i = 0; i < n_add.size(); ++i) {
    const auto& pt = ds.points[i];
    CHECK(pt.axis_value == n_add[i]);
    // No jitter: every repeat draws exp(0) = 1, so the mean is the baseline
    // bit for bit and the spread is exactly zero.
    CHECK(pt.coherence.t1_s.value == t1_base);
    CHECK(pt.coherence.t1_s.err == 0.0);
    CHECK(pt.coherence.t2e_s.err == 0.0);
    const auto expect = dephasing::predict_coherence(t1_base, n_th + n_add[i], kappa_total(cfg),
                                                     cfg.transmon.chi_hz, cfg.gamma_extra_per_s);
    CHECK(pt.coherence.t2e_s.value == expect.t2e_s.value);
    CHECK_FALSE(pt.coherence.t2r_s.has_value());
  }
  // More injected photons, less coherence.
  for (std::size_t i = 1; i < ds.points.size(); ++i) {
    CHECK(ds.points[i].coherence.t2e_s.value < ds.points[i - 1].coherence.t2e_s.value);
  }
}

TEST_CASE("noise-injection sweep warns past the dispersive validity limit") {
  const auto cfg = make_config(0.0);
  const std::vector<double> n_add = {0.0, 0.05, 0.15};
  const auto ds = experiment::simulate_noise_injection_sweep(cfg, n_add, 3, 5);
  REQUIRE(ds.warnings.size() == 1);
  CHECK(ds.warnings[0].find("dispersive validity") != std::string::npos);
}

TEST_CASE("noise-injection sweep with jitter: seeded scatter") {
  const auto cfg = make_config(0.05);
  const double t1_base = 1.0 / cfg.transmon.gamma1_per_s;
  const std::vector<double> n_add = {0.0, 2e-3, 4e-3, 8e-3};
  const auto a = experiment::simulate_noise_injection_sweep(cfg, n_add, 20, 7);
  const auto b = experiment::simulate_noise_injection_sweep(cfg, n_add, 20, 7);
  const auto c = experiment::simulate_noise_injection_sweep(cfg, n_add, 20, 8);
  bool any_differs = false;
  for (std::size_t i = 0; i < n_add.size(); ++i) {
    CHECK(a.points[i].coherence.t1_s.value == b.points[i].coherence.t1_s.value);
    CHECK(a.points[i].coherence.t2e_s.value == b.points[i].coherence.t2e_s.value);
    CHECK(a.points[i].coherence.t1_s.err == b.points[i].coherence.t1_s.err);
    any_differs |= a.points[i].coherence.t2e_s.value != c.points[i].coherence.t2e_s.value;
    CHECK(a.points[i].coherence.t1_s.err > 0.0);
    CHECK(a.points[i].coherence.t2e_s.err > 0.0);
    // 5% lognormal scatter over 20 repeats stays well within 30% of baseline.
    CHECK(std::abs(a.points[i].coherence.t1_s.value - t1_base) < 0.3 * t1_base);
  }
  CHECK(any_differs);
}

TEST_CASE("noise-injection sweep fills T2R only when slow dephasing is configured") {
  auto cfg = make_config(0.0);
  cfg.gamma_slow_per_s = 500.0;
  const std::vector<double> n_add = {0.0, 4e-3};
  const auto ds = experiment::simulate_noise_injection_sweep(cfg, n_add, 5, 3);
  const double t1_base = 1.0 / cfg.transmon.gamma1_per_s;
  const double n_th = cfg.thermal_occupation();
  for (std::size_t i = 0; i < n_add.size(); ++i) {
    const auto& pt = ds.points[i];
    REQUIRE(pt.coherence.t2r_s.has_value());
    CHECK(*pt.coherence.t2r_s < pt.coherence.t2e_s.value);
    const double gphi = dephasing::thermal_dephasing_rate(n_th + n_add[i], kappa_total(cfg),
                                                          cfg.transmon.chi_hz);
    const double expected = 1.0 / (1.0 / (2.0 * t1_base) + gphi + cfg.gamma_slow_per_s);
    CHECK(*pt.coherence.t2r_s == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("noise-injection sweep validates its inputs") {
  const auto cfg = make_config(0.0);
  const std::vector<double> dup = {0.0, 1e-3, 1e-3};
  const std::vector<double> neg = {-1e-3, 1e-3};
  const std::vector<double> ok = {0.0, 1e-3, 2e-3};
  CHECK_THROWS_AS(experiment::simulate_noise_injection_sweep(cfg, dup, 5, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(experiment::simulate_noise_injection_sweep(cfg, neg, 5, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(experiment::simulate_noise_injection_sweep(cfg, ok, 0, 1),
                  std::invalid_argument);
  auto bad = make_config(0.9);  // jitter cap is 0.5
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(experiment::simulate_noise_injection_sweep(bad, ok, 5, 1),
                  std::invalid_argument);
}

TEST_CASE("temperature sweep tracks Bose-Einstein occupation on internal ports") {
  const auto cfg = make_config(0.0);
  const std::vector<double> temps = {0.013, 0.025, 0.05, 0.08, 0.12};
  const auto ds = experiment::simulate_temperature_sweep(cfg, temps, 11, 5);
  CHECK(ds.axis == experiment::SweepAxis::temperature);
  REQUIRE(ds.points.size() == temps.size());
  for (std::size_t i = 0; i < temps.size(); ++i) {
    const auto& pt = ds.points[i];
    CHECK(pt.axis_value == temps[i]);
    // Reconstruct the expected bath mix: internal ports follow the mode's
    // black-body occupation at this stage temperature, the input port holds
    // its configured value.
    auto ports = cfg.environment.ports;
    for (auto& p : ports) {
      if (p.label == "internal") {
        p.occupation = thermal::bose_einstein_occupation(cfg.readout.f_hz, temps[i]);
      }
    }
    const double n_exp = thermal::mixed_bath_occupation(ports);
    const double gphi_exp =
        dephasing::thermal_dephasing_rate(n_exp, kappa_total(cfg), cfg.transmon.chi_hz);
    const double implied =
        1.0 / pt.coherence.t2e_s.value - 1.0 / (2.0 * pt.coherence.t1_s.value);
    CHECK(implied == doctest::Approx(gphi_exp).epsilon(1e-9));
  }
  // Cold: nearly relaxation-limited. Hot: photon dephasing dominates.
  CHECK(ds.points.front().coherence.ratio.value >= 0.9);
  CHECK(ds.points.back().coherence.ratio.value <= 0.5);
  for (std::size_t i = 1; i < ds.points.size(); ++i) {
    CHECK(ds.points[i].coherence.ratio.value < ds.points[i - 1].coherence.ratio.value);
  }
}

TEST_CASE("temperature sweep leaves non-internal ports pinned") {
  experiment::DeviceConfig cfg = make_config(0.0);
  cfg.environment.ports = {{"input", 13.3e6, 4e-4}};  // nothing tracks temperature
  const std::vector<double> temps = {0.02, 0.06, 0.15};
  const auto ds = experiment::simulate_temperature_sweep(cfg, temps, 11, 4);
  for (const auto& pt : ds.points) {
    CHECK(pt.coherence.t2e_s.value == ds.points[0].coherence.t2e_s.value);
  }
}

TEST_CASE("temperature sweep validates its range") {
  const auto cfg = make_config(0.0);
  const std::vector<double> too_cold = {0.005, 0.05};
  const std::vector<double> too_hot = {0.05, 0.25};
  const std::vector<double> unsorted = {0.05, 0.03};
  const std::vector<double> ok = {0.02, 0.05};
  CHECK_THROWS_AS(experiment::simulate_temperature_sweep(cfg, too_cold, 1, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(experiment::simulate_temperature_sweep(cfg, too_hot, 1, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(experiment::simulate_temperature_sweep(cfg, unsorted, 1, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(experiment::simulate_temperature_sweep(cfg, ok, 1, 0), std::invalid_argument);
}

TEST_CASE("DeviceConfig validation") {
  auto cfg = make_config(0.0);
  CHECK_NOTHROW(cfg.validate());
  cfg.t1_jitter = -0.01;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = make_config(0.0);
  cfg.gamma_extra_per_s = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = make_config(0.0);
  cfg.transmon.chi_hz = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
