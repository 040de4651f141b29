#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace sq {

/// Outcome of one sampled check: worst residual seen and where.
struct CheckResult {
  std::string name;
  bool passed = true;
  double worst_residual = 0.0;
  double tolerance = 0.0;
  std::vector<double> witness;
  std::string detail;

  /// Folds one sample in; a residual above tolerance fails the check.
  void observe(double residual, const std::vector<double>& at) {
    if (witness.empty() || residual > worst_residual || std::isnan(residual)) {
      worst_residual = residual;
      witness = at;
    }
    if (!(residual <= tolerance)) passed = false;
  }
};

struct CheckReport {
  std::vector<CheckResult> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }
  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
  void append(const CheckReport& other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }
};

}  // namespace sq
