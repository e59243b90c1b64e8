#pragma once

#include <string>
#include <vector>

namespace riesz {

/// Outcome of one named check inside a ValidationReport.
struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;  // first violation, empty when passed
};

/// Ordered list of checks. Violations are reported, never repaired.
struct ValidationReport {
  std::vector<CheckResult> checks;

  bool ok() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }

  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

}  // namespace riesz
