#include "cavatten/design.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cavatten/constants.hpp"

namespace cavatten::design {

std::optional<MaterialSpec> lookup_material(std::string_view name) {
  if (name == "copper" || name == "cu") {
    return MaterialSpec{"copper", 1.7e-8, 296, std::nullopt};
  }
  if (name == "brass") {
    return MaterialSpec{"brass", 6.9e-8, 296, std::nullopt};
  }
  return std::nullopt;
}

void AttenuatorGeometry::validate() const {
  if (!(gap_m > 0)) throw std::invalid_argument("geometry: gap must be positive");
  if (!(length_m > 0)) throw std::invalid_argument("geometry: length must be positive");
  if (!(geometry_factor > 0)) throw std::invalid_argument("geometry: geometry_factor must be positive");
  if (!(effective_length_correction > 0)) {
    throw std::invalid_argument("geometry: effective_length_correction must be positive");
  }
}

double skin_depth(double resistivity_ohm_m, double f_hz) {
  if (!(resistivity_ohm_m > 0)) throw std::invalid_argument("skin_depth: resistivity must be positive");
  if (!(f_hz > 0)) throw std::invalid_argument("skin_depth: frequency must be positive");
  return std::sqrt(resistivity_ohm_m /
                   (std::numbers::pi * f_hz * constants::vacuum_permeability_h_per_m));
}

QEstimate q_estimate(const AttenuatorGeometry& geom, double skin_depth_m, double f_hz) {
  if (!(geom.gap_m > 0)) throw std::invalid_argument("q_estimate: gap must be positive");
  if (!(geom.geometry_factor > 0)) {
    throw std::invalid_argument("q_estimate: geometry_factor must be positive");
  }
  if (!(skin_depth_m > 0)) throw std::invalid_argument("q_estimate: skin depth must be positive");
  if (!(f_hz > 0)) throw std::invalid_argument("q_estimate: frequency must be positive");
  if (skin_depth_m >= geom.gap_m) {
    throw std::invalid_argument("q_estimate: skin depth >= gap, surface-loss model invalid");
  }
  QEstimate est;
  est.q_internal = geom.geometry_factor * geom.gap_m / skin_depth_m;
  est.kappa_i_hz = f_hz / est.q_internal;
  return est;
}

double conductivity_ratio_from_linewidths(double kappa_rt_hz, double kappa_cold_hz) {
  if (!(kappa_rt_hz > 0) || !(kappa_cold_hz > 0)) {
    throw std::invalid_argument("conductivity_ratio: linewidths must be positive");
  }
  double r = kappa_rt_hz / kappa_cold_hz;
  return r * r;
}

double halfwave_frequency(const AttenuatorGeometry& geom) {
  if (!(geom.length_m > 0)) throw std::invalid_argument("halfwave: length must be positive");
  if (!(geom.effective_length_correction > 0)) {
    throw std::invalid_argument("halfwave: effective_length_correction must be positive");
  }
  return constants::speed_of_light_m_per_s /
         (2.0 * geom.length_m * geom.effective_length_correction);
}

double contracted_frequency(double f_rt_hz, double contraction) {
  if (!(f_rt_hz > 0)) throw std::invalid_argument("contracted_frequency: frequency must be positive");
  if (!(contraction >= 0) || contraction >= 1) {
    throw std::invalid_argument("contracted_frequency: contraction must be in [0, 1)");
  }
  return f_rt_hz / (1.0 - contraction);
}

RequirementReport check_requirements(const modes::ResonatorSpec& spec, double target_f_hz,
                                     const RequirementWindow& window) {
  spec.validate();
  if (!(target_f_hz > 0)) throw std::invalid_argument("check_requirements: target must be positive");
  RequirementReport rep;
  rep.f_hz = spec.f_hz;
  rep.target_f_hz = target_f_hz;
  auto tx = modes::two_port_transmission(spec.kappa_i_hz, spec.kappa_c1_hz, spec.kappa_c2_hz);
  rep.insertion_loss_db = tx.insertion_loss_db;
  rep.bandwidth_hz = spec.kappa_total_hz();
  rep.centered = std::abs(spec.f_hz - target_f_hz) <= window.center_tolerance_hz;
  rep.attenuation_ok = rep.insertion_loss_db >= window.attenuation_min_db &&
                       rep.insertion_loss_db <= window.attenuation_max_db;
  rep.bandwidth_ok = rep.bandwidth_hz >= window.bandwidth_min_hz &&
                     rep.bandwidth_hz <= window.bandwidth_max_hz;
  return rep;
}

}  // namespace cavatten::design
