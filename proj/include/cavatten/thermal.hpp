#pragma once

#include <span>
#include <string>
#include <vector>

// Bose-Einstein thermometry, multi-bath steady-state photon occupation, and
// photon flux propagation down a cryogenic attenuation chain.
//
// Unit convention (project-wide): all rates are ordinary frequencies in Hz,
// i.e. the kappa/2pi values quoted for microwave resonators. Temperatures in
// kelvin, times in seconds.
namespace cavatten::thermal {

// One dissipation channel seen by a resonator mode: its coupling rate and the
// mean photon number of the bath behind it.
struct BathPort {
  std::string label;
  double rate_hz = 0;
  double occupation = 0;
};

// One lossy element of an input line, e.g. a 20 dB attenuator thermalized to
// the still plate. Attenuation is power attenuation in dB.
struct ChainElement {
  double attenuation_db = 0;
  double temperature_k = 0;
};

// The thermal surroundings of one resonator mode: the set of baths it couples
// to, plus the attenuation chain feeding its external port, ordered from the
// room-temperature source down to the device.
//
// The chain model (each element re-emits black-body photons at its own
// temperature) is a standard cascaded-attenuator noise budget; it is an
// extension of this toolkit, not something the underlying experiments
// resolve, and the per-element photon bookkeeping should be read as a design
// estimate.
struct ThermalEnvironment {
  std::vector<BathPort> ports;
  std::vector<ChainElement> chain;
  double source_temperature_k = 300.0;

  // Throws std::invalid_argument when any field invariant is violated.
  void validate() const;
};

// Mean photon number 1/(exp(hf/kT) - 1) of a mode at frequency f in contact
// with a bath at temperature T. Underflows to exactly 0 when the exponent
// exceeds the representable range (deep cryogenic limit) instead of erroring.
// Throws std::domain_error unless f > 0 and t > 0.
double bose_einstein_occupation(double f_hz, double t_k);

// Exact inverse of bose_einstein_occupation:  T = hf / (k ln(1 + 1/n)).
// Throws std::domain_error unless f > 0 and occupation > 0.
double effective_temperature(double f_hz, double occupation);

// Rate-weighted mean occupation sum(k_j n_j) / sum(k_j) of several baths;
// the steady-state photon number of a mode coupled to all of them.
// Throws std::invalid_argument on an empty list or a non-positive rate.
double mixed_bath_occupation(std::span<const BathPort> ports);

// Propagates a photon flux through the chain: each element transmits
// n * 10^(-A/10) and adds (1 - 10^(-A/10)) of its own thermal occupation.
double propagate_chain(double n_in, std::span<const ChainElement> chain, double f_hz);

// Occupation arriving at the device input: the source's black-body occupation
// pushed through the whole chain. A zero-length chain returns the source
// occupation unchanged.
double attenuation_chain_occupation(const ThermalEnvironment& env, double f_hz);

}  // namespace cavatten::thermal
