#pragma once

// Physical constants. h, k_B and c are the CODATA 2018 exact defined values;
// they are fixed here rather than configurable so results are reproducible.
namespace cavatten::constants {

inline constexpr double planck_j_s = 6.62607015e-34;
inline constexpr double boltzmann_j_per_k = 1.380649e-23;
inline constexpr double vacuum_permeability_h_per_m = 1.25663706e-6;
inline constexpr double speed_of_light_m_per_s = 2.99792458e8;

}  // namespace cavatten::constants
