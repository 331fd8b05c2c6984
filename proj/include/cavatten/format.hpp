#pragma once

#include <cmath>
#include <cstdio>
#include <string>

// Shared display formatting. Human-readable output and JSON output must carry
// the same numeric values (round-trip parse equality), so every displayed
// number goes through the same 10-significant-digit rounding; JSON stores the
// re-parsed rounded double. Full precision is reserved for data files (CSV).
namespace cavatten::fmt {

inline std::string number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

// The double a reader obtains by parsing number(x); used for JSON payloads.
inline double display_round(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(number(x).c_str(), nullptr);
}

}  // namespace cavatten::fmt
