#pragma once

// The verification suite behind `volterra verify` and the acceptance test
// binary. Each criterion is deterministic for a given seed; wall-clock limits
// are checked and printed but kept out of the JSON report so reports stay
// byte-identical across runs and thread counts.

#include "volterra/scenario.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace volterra {

struct CriterionResult {
  int id = 0;
  std::string key;
  std::string title;
  bool passed = false;
  Json measured = Json::object();
  std::string summary;  // one human-readable line, may include timings
  std::vector<std::string> warnings;
  double seconds = 0.0;
};

struct AcceptanceReport {
  std::uint64_t seed = 0;
  std::string selector;
  std::vector<CriterionResult> criteria;
  bool passed() const;
};

inline constexpr std::uint64_t kDefaultSeed = 20240607;

/// Criterion keys in suite order.
const std::vector<std::string>& acceptance_keys();

/// "all", a key from acceptance_keys(), or a criterion number.
bool is_acceptance_selector(const std::string& selector);

/// Throws std::invalid_argument for an unknown selector.
AcceptanceReport run_acceptance(const std::string& selector, std::uint64_t seed = kDefaultSeed);

Json to_json(const AcceptanceReport& report);

/// "[PASS] 3 empty-sigma: ..." style line.
std::string summary_line(const CriterionResult& result);

}  // namespace volterra
