#include "cavatten/modes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cavatten::modes {

std::optional<double> ResonatorSpec::q_internal() const {
  if (kappa_i_hz > 0) return f_hz / kappa_i_hz;
  return std::nullopt;
}

void ResonatorSpec::validate() const {
  if (!(f_hz > 0)) throw std::invalid_argument("ResonatorSpec: frequency must be > 0");
  if (kappa_i_hz < 0 || kappa_c1_hz < 0 || kappa_c2_hz < 0)
    throw std::invalid_argument("ResonatorSpec: rates must be >= 0");
  if (!(kappa_total_hz() > 0))
    throw std::invalid_argument("ResonatorSpec: at least one rate must be > 0");
}

HybridizedPair hybridize(double f_a_hz, double f_b_hz, double g_hz,
                         std::string_view label_a, std::string_view label_b) {
  if (!(f_a_hz > 0) || !(f_b_hz > 0))
    throw std::invalid_argument("hybridize: bare frequencies must be > 0");
  if (g_hz < 0) throw std::invalid_argument("hybridize: coupling must be >= 0");

  const double delta = f_b_hz - f_a_hz;
  const double mean = 0.5 * (f_a_hz + f_b_hz);
  const double split = std::hypot(0.5 * delta, g_hz);

  double p_lower_in_a;
  if (g_hz == 0) {
    p_lower_in_a = delta >= 0 ? 1.0 : 0.0;
  } else {
    // R - delta/2 via g^2/(R + delta/2) when delta >= 0 to avoid cancellation.
    const double q = delta >= 0 ? g_hz * g_hz / (split + 0.5 * delta) : split - 0.5 * delta;
    p_lower_in_a = g_hz * g_hz / (g_hz * g_hz + q * q);
  }

  HybridizedPair pair;
  pair.lower.f_hz = mean - split;
  pair.lower.participations = {{std::string(label_a), p_lower_in_a},
                               {std::string(label_b), 1.0 - p_lower_in_a}};
  pair.upper.f_hz = mean + split;
  pair.upper.participations = {{std::string(label_a), 1.0 - p_lower_in_a},
                               {std::string(label_b), p_lower_in_a}};
  return pair;
}

BareModes infer_coupling(double f_minus_hz, double f_plus_hz, double p_lower_in_a) {
  if (!(f_plus_hz > f_minus_hz))
    throw std::invalid_argument("infer_coupling: needs f_plus > f_minus");
  if (!(p_lower_in_a > 0) || !(p_lower_in_a < 1))
    throw std::invalid_argument("infer_coupling: participation must lie in (0, 1)");

  const double s = f_plus_hz - f_minus_hz;
  const double delta = s * (2.0 * p_lower_in_a - 1.0);
  const double g = s * std::sqrt(p_lower_in_a * (1.0 - p_lower_in_a));
  const double mid = 0.5 * (f_plus_hz + f_minus_hz);
  return {mid - 0.5 * delta, mid + 0.5 * delta, g};
}

double effective_rate(const HybridizedMode& mode,
                      std::span<const std::pair<std::string, double>> bare_rates_hz) {
  double acc = 0;
  for (const auto& part : mode.participations) {
    auto it = std::find_if(bare_rates_hz.begin(), bare_rates_hz.end(),
                           [&](const auto& kv) { return kv.first == part.label; });
    if (it == bare_rates_hz.end())
      throw std::invalid_argument("effective_rate: no bare rate for label \"" + part.label + "\"");
    acc += part.fraction * it->second;
  }
  return acc;
}

namespace {
double participation_in(const HybridizedMode& mode, std::string_view label) {
  for (const auto& p : mode.participations)
    if (p.label == label) return p.fraction;
  throw std::invalid_argument("readout_mode: no participation labeled \"" + std::string(label) + "\"");
}
}  // namespace

const HybridizedMode& readout_mode(const HybridizedPair& pair, std::string_view cavity_label) {
  const double p_lo = participation_in(pair.lower, cavity_label);
  const double p_hi = participation_in(pair.upper, cavity_label);
  if (p_lo == p_hi) return pair.lower;
  return p_lo > p_hi ? pair.lower : pair.upper;
}

Transmission two_port_transmission(double kappa_i_hz, double kappa_c1_hz, double kappa_c2_hz) {
  if (kappa_i_hz < 0 || kappa_c1_hz < 0 || kappa_c2_hz < 0)
    throw std::invalid_argument("two_port_transmission: rates must be >= 0");
  const double total = kappa_i_hz + kappa_c1_hz + kappa_c2_hz;
  if (!(total > 0)) throw std::invalid_argument("two_port_transmission: all rates are zero");
  const double ratio = 4.0 * kappa_c1_hz * kappa_c2_hz / (total * total);
  const double il = ratio > 0 ? -10.0 * std::log10(ratio)
                              : std::numeric_limits<double>::infinity();
  return {ratio, il};
}

double insertion_loss_to_coupling(double insertion_loss_db, double kappa_i_hz) {
  if (!(insertion_loss_db > 0))
    throw std::invalid_argument("insertion_loss_to_coupling: no solution for IL <= 0 dB");
  if (!(kappa_i_hz > 0))
    throw std::invalid_argument("insertion_loss_to_coupling: kappa_i must be > 0");
  const double amp = std::pow(10.0, -insertion_loss_db / 20.0);  // sqrt of the power ratio
  return amp * kappa_i_hz / (2.0 * (1.0 - amp));
}

std::complex<double> reflection_response(const ResonatorSpec& spec, double detuning_hz) {
  spec.validate();
  if (!(spec.kappa_c1_hz > 0) || spec.kappa_c2_hz != 0)
    throw std::invalid_argument("reflection_response: needs a single-port spec (kappa_c1 > 0, kappa_c2 = 0)");
  const std::complex<double> two_i_delta(0.0, 2.0 * detuning_hz);
  return (spec.kappa_c1_hz - spec.kappa_i_hz - two_i_delta) /
         (spec.kappa_c1_hz + spec.kappa_i_hz + two_i_delta);
}

}  // namespace cavatten::modes
