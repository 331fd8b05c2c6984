#pragma once

#include <span>
#include <string>
#include <vector>

// The acceptance gate: every release-blocking check, each with its tolerance
// pinned in code. The same suite backs the `reproduce` subcommand and the
// acceptance test binary, so CI and the CLI can never disagree.
namespace cavatten::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured values and the pinned windows
};

// Known suites: "all", "dephasing", "devices", "thermal", "transmission",
// "hybridization", "design", "extraction", "coherence", "properties".
// Throws std::invalid_argument for an unknown suite name.
std::vector<CriterionResult> run_suite(const std::string& suite = "all");

bool all_passed(std::span<const CriterionResult> results);

}  // namespace cavatten::acceptance
