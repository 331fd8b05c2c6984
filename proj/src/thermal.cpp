#include "cavatten/thermal.hpp"

#include <cmath>
#include <stdexcept>

#include "cavatten/constants.hpp"

namespace cavatten::thermal {

namespace {
constexpr double h = constants::planck_j_s;
constexpr double kb = constants::boltzmann_j_per_k;
}  // namespace

void ThermalEnvironment::validate() const {
  if (ports.empty()) throw std::invalid_argument("ThermalEnvironment: needs at least one port");
  for (const auto& p : ports) {
    if (!(p.rate_hz > 0))
      throw std::invalid_argument("ThermalEnvironment: port \"" + p.label + "\" rate must be > 0");
    if (p.occupation < 0)
      throw std::invalid_argument("ThermalEnvironment: port \"" + p.label + "\" occupation must be >= 0");
  }
  for (const auto& e : chain) {
    if (e.attenuation_db < 0)
      throw std::invalid_argument("ThermalEnvironment: chain attenuation must be >= 0 dB");
    if (!(e.temperature_k > 0))
      throw std::invalid_argument("ThermalEnvironment: chain element temperature must be > 0");
  }
  if (!(source_temperature_k > 0))
    throw std::invalid_argument("ThermalEnvironment: source temperature must be > 0");
}

double bose_einstein_occupation(double f_hz, double t_k) {
  if (!(f_hz > 0)) throw std::domain_error("bose_einstein_occupation: frequency must be > 0");
  if (!(t_k > 0)) throw std::domain_error("bose_einstein_occupation: temperature must be > 0");
  const double x = h * f_hz / (kb * t_k);
  // expm1 keeps the high-temperature limit accurate; for large x it overflows
  // to inf and the occupation underflows cleanly to 0.
  return 1.0 / std::expm1(x);
}

double effective_temperature(double f_hz, double occupation) {
  if (!(f_hz > 0)) throw std::domain_error("effective_temperature: frequency must be > 0");
  if (!(occupation > 0)) throw std::domain_error("effective_temperature: occupation must be > 0");
  return h * f_hz / (kb * std::log1p(1.0 / occupation));
}

double mixed_bath_occupation(std::span<const BathPort> ports) {
  if (ports.empty()) throw std::invalid_argument("mixed_bath_occupation: empty port list");
  double num = 0, den = 0;
  for (const auto& p : ports) {
    if (!(p.rate_hz > 0)) throw std::invalid_argument("mixed_bath_occupation: port rates must be > 0");
    num += p.rate_hz * p.occupation;
    den += p.rate_hz;
  }
  return num / den;
}

double propagate_chain(double n_in, std::span<const ChainElement> chain, double f_hz) {
  double n = n_in;
  for (const auto& e : chain) {
    const double transmitted = std::pow(10.0, -e.attenuation_db / 10.0);
    n = n * transmitted + (1.0 - transmitted) * bose_einstein_occupation(f_hz, e.temperature_k);
  }
  return n;
}

double attenuation_chain_occupation(const ThermalEnvironment& env, double f_hz) {
  env.validate();
  const double n_source = bose_einstein_occupation(f_hz, env.source_temperature_k);
  return propagate_chain(n_source, env.chain, f_hz);
}

}  // namespace cavatten::thermal
