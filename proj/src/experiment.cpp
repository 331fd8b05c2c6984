#include "cavatten/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "cavatten/rng.hpp"

namespace cavatten::experiment {

namespace {

// Mean that is exactly v[0] when all elements are equal (centered
// accumulation), so zero-jitter sweeps reproduce the forward model bitwise.
double centered_mean(std::span<const double> v) {
  const double v0 = v[0];
  double acc = 0;
  for (double x : v) acc += x - v0;
  return v0 + acc / static_cast<double>(v.size());
}

double sample_std(std::span<const double> v, double mean) {
  if (v.size() < 2) return 0.0;
  double acc = 0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

void require_strictly_increasing(std::span<const double> v, const char* what) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) {
      throw std::invalid_argument(std::string(what) + " must be strictly increasing");
    }
  }
}

// One sweep point: `repeats` simulated measurements at fixed total
// occupation, aggregated as mean +/- sample standard deviation.
SweepPoint simulate_point(const DeviceConfig& cfg, double axis_value, double nbar_total,
                          int repeats, std::mt19937_64& eng) {
  const double t1_0 = 1.0 / cfg.transmon.gamma1_per_s;
  const double kappa = cfg.readout.kappa_total_hz();
  const double chi = cfg.transmon.chi_hz;

  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> t1_meas(static_cast<std::size_t>(repeats));
  std::vector<double> t2e_meas(static_cast<std::size_t>(repeats));
  std::vector<double> t2r_meas(static_cast<std::size_t>(repeats));
  for (int r = 0; r < repeats; ++r) {
    const double z1 = normal(eng);
    const double z2 = normal(eng);
    // T1 fluctuates between measurements: independent draws for the T1
    // measurement and for the T1 that sets the echo decay.
    const double t1_m = t1_0 * std::exp(cfg.t1_jitter * z1);
    const double t1_e = t1_0 * std::exp(cfg.t1_jitter * z2);
    const auto cs = dephasing::predict_coherence(t1_e, nbar_total, kappa, chi,
                                                 cfg.gamma_extra_per_s);
    t1_meas[static_cast<std::size_t>(r)] = t1_m;
    t2e_meas[static_cast<std::size_t>(r)] = cs.t2e_s.value;
    t2r_meas[static_cast<std::size_t>(r)] =
        1.0 / (1.0 / (2.0 * t1_e) + cs.gamma_phi_per_s.value + cfg.gamma_slow_per_s);
  }

  const double t1_mean = centered_mean(t1_meas);
  const double t2e_mean = centered_mean(t2e_meas);
  std::optional<double> t2r;
  if (cfg.gamma_slow_per_s > 0) t2r = centered_mean(t2r_meas);

  SweepPoint pt;
  pt.axis_value = axis_value;
  pt.coherence = dephasing::pure_dephasing_from_times({t1_mean, sample_std(t1_meas, t1_mean)},
                                                      {t2e_mean, sample_std(t2e_meas, t2e_mean)},
                                                      t2r);
  return pt;
}

}  // namespace

TraceModel default_trace_model(TraceKind kind) {
  if (kind == TraceKind::t1) return {1.0, 0.0};
  return {0.5, 0.5};
}

void Trace::validate() const {
  if (times_s.empty()) throw std::invalid_argument("Trace: no points");
  if (times_s.size() != populations.size() || times_s.size() != sigmas.size())
    throw std::invalid_argument("Trace: column lengths differ");
  if (times_s.front() < 0) throw std::invalid_argument("Trace: times must be >= 0");
  require_strictly_increasing(times_s, "Trace: times");
  for (double p : populations)
    if (!(p >= 0) || !(p <= 1)) throw std::invalid_argument("Trace: population outside [0, 1]");
  for (double s : sigmas)
    if (!(s > 0)) throw std::invalid_argument("Trace: sigma must be > 0");
  if (shots < 1) throw std::invalid_argument("Trace: shots must be >= 1");
}

void DeviceConfig::validate() const {
  transmon.validate();
  readout.validate();
  environment.validate();
  if (!(transmon.gamma1_per_s > 0))
    throw std::invalid_argument("DeviceConfig: transmon needs a finite baseline T1 (t1_us > 0)");
  if (!(transmon.chi_hz > 0))
    throw std::invalid_argument("DeviceConfig: dispersive readout needs chi_mhz > 0");
  if (gamma_extra_per_s < 0)
    throw std::invalid_argument("DeviceConfig: gamma_extra_per_s must be >= 0");
  if (gamma_slow_per_s < 0)
    throw std::invalid_argument("DeviceConfig: gamma_slow_per_s must be >= 0");
  if (!(t1_jitter >= 0) || t1_jitter > 0.5)
    throw std::invalid_argument("DeviceConfig: t1_jitter must be in [0, 0.5]");
}

double DeviceConfig::thermal_occupation() const {
  return thermal::mixed_bath_occupation(environment.ports);
}

Trace simulate_trace(TraceKind kind, double true_rate_per_s, std::span<const double> times_s,
                     std::int64_t shots, std::uint64_t seed, std::optional<TraceModel> model,
                     bool exact) {
  if (true_rate_per_s < 0) throw std::invalid_argument("simulate_trace: rate must be >= 0");
  if (shots < 1) throw std::invalid_argument("simulate_trace: shots must be >= 1");
  if (times_s.empty()) throw std::invalid_argument("simulate_trace: no time points");
  if (times_s.front() < 0) throw std::invalid_argument("simulate_trace: times must be >= 0");
  require_strictly_increasing(times_s, "simulate_trace: times");

  const TraceModel m = model.value_or(default_trace_model(kind));
  // The exponential is monotone in t, so endpoint checks bound p(t).
  for (double edge : {m.baseline, m.baseline + m.amplitude}) {
    if (!(edge >= 0) || !(edge <= 1))
      throw std::invalid_argument("simulate_trace: model population outside [0, 1]");
  }

  Trace tr;
  tr.kind = kind;
  tr.shots = shots;
  tr.times_s.assign(times_s.begin(), times_s.end());
  tr.populations.resize(times_s.size());
  tr.sigmas.resize(times_s.size());

  const double n = static_cast<double>(shots);
  for (std::size_t i = 0; i < times_s.size(); ++i) {
    const double p = m.baseline + m.amplitude * std::exp(-true_rate_per_s * times_s[i]);
    double k;  // observed excited count (expected count in exact mode)
    if (exact) {
      k = p * n;
      tr.populations[i] = p;
    } else {
      auto eng = rng::engine_for(seed, rng::stream_trace, i);
      std::binomial_distribution<std::int64_t> binom(shots, std::clamp(p, 0.0, 1.0));
      k = static_cast<double>(binom(eng));
      tr.populations[i] = k / n;
    }
    const double p_smooth = (k + 1.0) / (n + 2.0);
    tr.sigmas[i] = std::sqrt(p_smooth * (1.0 - p_smooth) / n);
  }
  tr.validate();
  return tr;
}

SweepDataset simulate_noise_injection_sweep(const DeviceConfig& cfg,
                                            std::span<const double> n_add, int repeats,
                                            std::uint64_t seed) {
  cfg.validate();
  if (repeats < 1) throw std::invalid_argument("simulate_noise_injection_sweep: repeats >= 1");
  if (n_add.empty()) throw std::invalid_argument("simulate_noise_injection_sweep: no points");
  if (n_add.front() < 0)
    throw std::invalid_argument("simulate_noise_injection_sweep: n_add must be >= 0");
  require_strictly_increasing(n_add, "simulate_noise_injection_sweep: n_add");

  const double n_th = cfg.thermal_occupation();

  SweepDataset ds;
  ds.axis = SweepAxis::n_add;
  ds.seed = seed;
  ds.config = cfg;
  if (n_th + n_add.back() > dephasing::dispersive_validity_limit) {
    ds.warnings.push_back(
        "total occupation n_th + n_add exceeds the dispersive validity limit 0.1; "
        "the linear dephasing model degrades");
  }
  ds.points.reserve(n_add.size());
  for (std::size_t i = 0; i < n_add.size(); ++i) {
    auto eng = rng::engine_for(seed, rng::stream_sweep, i);
    ds.points.push_back(simulate_point(cfg, n_add[i], n_th + n_add[i], repeats, eng));
  }
  return ds;
}

SweepDataset simulate_temperature_sweep(const DeviceConfig& cfg,
                                        std::span<const double> temperatures_k,
                                        std::uint64_t seed, int repeats) {
  cfg.validate();
  if (repeats < 1) throw std::invalid_argument("simulate_temperature_sweep: repeats >= 1");
  if (temperatures_k.empty()) throw std::invalid_argument("simulate_temperature_sweep: no points");
  for (double t : temperatures_k) {
    if (!(t >= 0.01) || !(t <= 0.2)) {
      throw std::invalid_argument(
          "simulate_temperature_sweep: temperatures must lie in [0.01, 0.2] K");
    }
  }
  require_strictly_increasing(temperatures_k, "simulate_temperature_sweep: temperatures");

  SweepDataset ds;
  ds.axis = SweepAxis::temperature;
  ds.seed = seed;
  ds.config = cfg;
  ds.points.reserve(temperatures_k.size());
  for (std::size_t i = 0; i < temperatures_k.size(); ++i) {
    auto ports = cfg.environment.ports;
    for (auto& port : ports) {
      if (port.label == "internal") {
        port.occupation = thermal::bose_einstein_occupation(cfg.readout.f_hz, temperatures_k[i]);
      }
    }
    const double n_th = thermal::mixed_bath_occupation(ports);
    if (n_th > dephasing::dispersive_validity_limit) {
      ds.warnings.push_back("n_th exceeds the dispersive validity limit 0.1 at T = " +
                            std::to_string(temperatures_k[i] * 1e3) + " mK");
    }
    auto eng = rng::engine_for(seed, rng::stream_sweep, i);
    ds.points.push_back(simulate_point(cfg, temperatures_k[i], n_th, repeats, eng));
  }
  return ds;
}

}  // namespace cavatten::experiment
