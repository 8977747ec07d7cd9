#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace motzkin {

/// One named check. Exact checks leave `residual` at 0 or 1; numeric checks
/// record the achieved residual next to the tolerance.
struct CheckResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct Report {
  std::string title;
  std::vector<CheckResult> checks;

  void add(CheckResult c) { checks.push_back(std::move(c)); }

  void add_exact(std::string name, bool ok, std::string detail = {}) {
    checks.push_back({std::move(name), ok, ok ? 0.0 : 1.0, 0.0, std::move(detail)});
  }

  void add_numeric(std::string name, double residual, double tolerance, std::string detail = {}) {
    checks.push_back({std::move(name), residual < tolerance, residual, tolerance, std::move(detail)});
  }

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }

  double max_residual() const {
    double m = 0;
    for (const auto& c : checks) m = std::max(m, c.residual);
    return m;
  }

  std::vector<const CheckResult*> failures() const {
    std::vector<const CheckResult*> out;
    for (const auto& c : checks)
      if (!c.passed) out.push_back(&c);
    return out;
  }
};

}  // namespace motzkin
