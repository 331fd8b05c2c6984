#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cavatten/dephasing.hpp"
#include "cavatten/modes.hpp"
#include "cavatten/thermal.hpp"

// Seeded stochastic generation of synthetic measurement data: decay traces,
// temperature sweeps, and noise-injection sweeps.
//
// RNG contract: every routine takes one master seed and derives a child seed
// per work unit (trace point, sweep point) via rng::child_seed, so sweep
// points are independent and may be evaluated in any order or in parallel;
// the implementation assembles results in axis order either way. Same seed
// and same config give a bit-identical dataset.
namespace cavatten::experiment {

enum class TraceKind { t1, ramsey, echo };

// population(t) = baseline + amplitude * exp(-rate t). Defaults per kind:
// t1 decays 1 -> 0 (amplitude 1, baseline 0); ramsey/echo decay toward the
// mixed state at 1/2 (amplitude 0.5, baseline 0.5).
struct TraceModel {
  double amplitude = 1.0;
  double baseline = 0.0;
};
TraceModel default_trace_model(TraceKind kind);

struct Trace {
  TraceKind kind = TraceKind::t1;
  std::vector<double> times_s;      // strictly increasing, >= 0
  std::vector<double> populations;  // in [0, 1]
  std::vector<double> sigmas;       // > 0 per point
  std::int64_t shots = 0;
  void validate() const;
};

// One simulated device: transmon, dressed readout mode, and the thermal
// baths the readout couples to. The environment's attenuation chain is a
// design tool and is NOT applied implicitly here; port occupations are taken
// as configured.
struct DeviceConfig {
  dephasing::TransmonSpec transmon;
  modes::ResonatorSpec readout;
  thermal::ThermalEnvironment environment;
  double gamma_extra_per_s = 0;  // white pure dephasing, survives echo
  double gamma_slow_per_s = 0;   // slow dephasing, refocused by echo (Ramsey only)
  double t1_jitter = 0;          // fractional sigma of multiplicative T1 scatter, [0, 0.5]

  void validate() const;
  // Rate-weighted mean occupation of the configured ports: the residual n_th.
  double thermal_occupation() const;
};

enum class SweepAxis { n_add, temperature };

struct SweepPoint {
  double axis_value = 0;  // added photons (dimensionless) or temperature (K)
  dephasing::CoherenceSet coherence;
};

struct SweepDataset {
  SweepAxis axis = SweepAxis::n_add;
  std::vector<SweepPoint> points;  // axis values strictly increasing
  std::uint64_t seed = 0;
  DeviceConfig config;                 // snapshot of the generating config
  std::vector<std::string> warnings;   // e.g. dispersive-validity exceedances
};

// Binomially sampled decay trace: at each time the excited-state population
// baseline + amplitude*exp(-rate t) is estimated from `shots` two-outcome
// measurements; sigma is the Laplace-smoothed binomial standard error
// sqrt(p~(1-p~)/shots), p~ = (k+1)/(shots+2), which keeps every point's
// weight finite. `exact` switches to the infinite-shots limit: populations
// equal the model exactly (sigma keeps the finite-shots scale so weighted
// fits stay defined). Deterministic per (seed, inputs); each time point uses
// its own child seed.
Trace simulate_trace(TraceKind kind, double true_rate_per_s, std::span<const double> times_s,
                     std::int64_t shots, std::uint64_t seed,
                     std::optional<TraceModel> model = std::nullopt, bool exact = false);

// Noise-injection sweep: for each added occupation n_add (strictly
// increasing, >= 0), per repeat draws T1 = T1_baseline * exp(jitter * Z)
// independently for the T1 measurement and for the echo measurement, then
//   1/T2e = 1/(2 T1_echo) + Gamma_extra + Gamma_phi(n_th + n_add).
// Each point reports mean and sample standard deviation over `repeats`.
// Warns (dataset.warnings) when n_th + max(n_add) exceeds the dispersive
// validity limit. T1 has no n_add dependence (not modeled).
SweepDataset simulate_noise_injection_sweep(const DeviceConfig& cfg,
                                            std::span<const double> n_add, int repeats,
                                            std::uint64_t seed);

// Temperature sweep over 10 mK..200 mK (strictly increasing): ports labeled
// "internal" follow bose_einstein_occupation(f_ro, T); every other port holds
// its configured occupation; n_th is the rate-weighted mix. T1 is held at
// baseline apart from jitter (its temperature dependence is not modeled).
SweepDataset simulate_temperature_sweep(const DeviceConfig& cfg,
                                        std::span<const double> temperatures_k,
                                        std::uint64_t seed, int repeats = 10);

}  // namespace cavatten::experiment
