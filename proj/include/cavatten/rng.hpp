#pragma once

#include <cstdint>
#include <random>

// Seed-splitting contract: every stochastic routine takes one master seed and
// derives an independent child seed per work unit as
//
//   child = splitmix64(splitmix64(master ^ splitmix64(stream)) + index)
//
// where `stream` names the consumer (sweep point, trace point, bootstrap
// resample) and `index` is the unit's position. Work units can therefore be
// evaluated in any order, or in parallel, without changing the result.
namespace cavatten::rng {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t stream_trace = 0x7472616365ull;      // "trace"
inline constexpr std::uint64_t stream_sweep = 0x7377656570ull;      // "sweep"
inline constexpr std::uint64_t stream_bootstrap = 0x626f6f74ull;    // "boot"

inline constexpr std::uint64_t child_seed(std::uint64_t master, std::uint64_t stream,
                                          std::uint64_t index) {
  return splitmix64(splitmix64(master ^ splitmix64(stream)) + index);
}

inline std::mt19937_64 engine_for(std::uint64_t master, std::uint64_t stream,
                                  std::uint64_t index) {
  return std::mt19937_64(child_seed(master, stream, index));
}

}  // namespace cavatten::rng
