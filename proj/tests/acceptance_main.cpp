// Acceptance gate runner: one pass/fail line per release-blocking criterion,
// nonzero exit when any fails. Run under ctest as the `acceptance` test.
#include <cstdio>

#include "cavatten/acceptance.hpp"

int main() {
  const auto results = cavatten::acceptance::run_suite("all");
  int failures = 0;
  for (const auto& r : results) {
    std::printf("[%2d] %s %s: %s\n", r.id, r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
    if (!r.pass) ++failures;
  }
  std::printf("%zu criteria, %d failed\n", results.size(), failures);
  return failures == 0 ? 0 : 1;
}
