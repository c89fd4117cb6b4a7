#include "volterra/acceptance.hpp"

#include <iostream>

int main() {
  bool ok = true;
  for (const auto& key : volterra::acceptance_keys()) {
    const auto report = volterra::run_acceptance(key);
    for (const auto& c : report.criteria) {
      std::cout << volterra::summary_line(c) << std::endl;
      ok = ok && c.passed;
    }
  }
  std::cout << (ok ? "acceptance: all criteria passed" : "acceptance: FAILED") << std::endl;
  return ok ? 0 : 1;
}
