#pragma once

// The acceptance suite: twelve numbered criteria, each producing one
// PASS/FAIL line. The summary text is a pure function of the options.

#include <cstdint>
#include <string>
#include <vector>

namespace jamesgeo {

struct AcceptanceOptions {
  std::uint64_t seed = 0;
  // Certificate gap demanded of dual-norm solves in criteria 4 and 5; zero
  // keeps the defaults (1e-2 for the pins, the solver's 1e-3 otherwise).
  double dual_tolerance = 0.0;
  bool rerun_for_determinism = true; // criterion 12 reruns 1..11
};

struct CriterionResult {
  int index = 0;
  std::string name;
  bool passed = false;
  std::string detail;

  std::string line() const;
};

struct AcceptanceSummary {
  std::vector<CriterionResult> criteria;

  bool passed() const;
  std::string text() const;
};

constexpr int kCriterionCount = 12;

/// Criteria 1..11 by index; 12 needs the whole suite and is only available
/// through run_acceptance.
CriterionResult run_criterion(int index, const AcceptanceOptions& opts);

AcceptanceSummary run_acceptance(const AcceptanceOptions& opts);

}  // namespace jamesgeo
