#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Two-mode hybridization (forward and inverse), participation-weighted
// effective rates, and one/two-port resonator response formulas.
//
// Hybridization diagonalizes the lossless 2x2 frequency matrix; dissipation
// enters only through participation weighting of the bare rates. Frequencies
// are ordinary (Hz); participations are invariant under the choice of
// ordinary vs angular units.
namespace cavatten::modes {

struct ResonatorSpec {
  double f_hz = 0;
  double kappa_i_hz = 0;   // internal dissipation rate /2pi
  double kappa_c1_hz = 0;  // external coupling rate of port 1 /2pi
  double kappa_c2_hz = 0;  // external coupling rate of port 2 /2pi

  double kappa_total_hz() const { return kappa_i_hz + kappa_c1_hz + kappa_c2_hz; }
  // Internal quality factor f/kappa_i; empty when kappa_i = 0.
  std::optional<double> q_internal() const;
  void validate() const;
};

struct Participation {
  std::string label;
  double fraction = 0;  // in [0, 1]; a mode's fractions sum to 1
};

struct HybridizedMode {
  double f_hz = 0;
  std::vector<Participation> participations;
  double kappa_i_eff_hz = 0;  // filled by effective_rate when bare rates are known
  double kappa_c_eff_hz = 0;
};

struct HybridizedPair {
  HybridizedMode lower;
  HybridizedMode upper;
};

// Dressed modes of two coupled resonators with bare frequencies f_a, f_b and
// coupling g:  f_pm = (f_a+f_b)/2 +- sqrt((delta/2)^2 + g^2).  The lower
// mode's participation in cavity a is g^2 / (g^2 + (R - delta/2)^2); at g = 0
// the bare modes come back with participation exactly 1 (degenerate g = 0,
// delta = 0 labels the lower mode as cavity a).
HybridizedPair hybridize(double f_a_hz, double f_b_hz, double g_hz,
                         std::string_view label_a = "a", std::string_view label_b = "b");

struct BareModes {
  double f_a_hz = 0;
  double f_b_hz = 0;
  double g_hz = 0;
};

// Closed-form inverse of hybridize from the two dressed frequencies and the
// lower mode's participation p in cavity a:
//   S = f_plus - f_minus,  delta = S (2p - 1),  g = S sqrt(p (1-p)).
// hybridize(infer_coupling(...)) reproduces the inputs to 1e-9 relative.
// Throws std::invalid_argument unless f_plus > f_minus and 0 < p < 1.
BareModes infer_coupling(double f_minus_hz, double f_plus_hz, double p_lower_in_a);

// Participation-weighted rate sum(p_m kappa_m) over the mode's constituents.
// Every participation label must appear in bare_rates (label, rate) pairs.
double effective_rate(const HybridizedMode& mode,
                      std::span<const std::pair<std::string, double>> bare_rates_hz);

// Picks the mode to use for qubit readout: the one participating more in the
// named cavity, the lower-frequency one on an exact tie.
const HybridizedMode& readout_mode(const HybridizedPair& pair, std::string_view cavity_label);

struct Transmission {
  double power_ratio = 0;
  double insertion_loss_db = 0;  // -10 log10(power_ratio); +inf at zero transmission
};

// On-resonance power transmission 4 k_c1 k_c2 / (k_i + k_c1 + k_c2)^2 of a
// two-port resonator. Throws std::invalid_argument on negative or all-zero rates.
Transmission two_port_transmission(double kappa_i_hz, double kappa_c1_hz, double kappa_c2_hz);

// Symmetric-coupler inverse of two_port_transmission: the kappa_c that gives
// the stated insertion loss for a given kappa_i,
//   kappa_c = sqrt(t) kappa_i / (2 (1 - sqrt(t))),  t = 10^(-IL/10).
// Diverges as IL -> 0 (a lossless response is out of model when kappa_i > 0);
// throws std::invalid_argument unless IL > 0 and kappa_i > 0.
double insertion_loss_to_coupling(double insertion_loss_db, double kappa_i_hz);

// One-port reflection S11(delta) = (k_c - k_i - 2i delta) / (k_c + k_i + 2i delta)
// for a spec with kappa_c1 > 0 and kappa_c2 = 0. |S11| <= 1, minimized on resonance.
std::complex<double> reflection_response(const ResonatorSpec& spec, double detuning_hz);

}  // namespace cavatten::modes
