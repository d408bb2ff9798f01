#pragma once

// Structured pass/fail record of a property suite with per-case residuals.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace ncfree {

struct CheckCase {
  std::string description;
  double residual = 0.0;
};

struct CheckReport {
  std::string name;
  double tolerance = 1e-10;
  std::vector<CheckCase> cases;

  void add(std::string description, double residual) {
    cases.push_back({std::move(description), residual});
  }
  // A case that must FAIL its own bound (negative controls report the margin
  // by which they failed as a negative residual, so pass() still means
  // "everything behaved as asserted").
  void add_must_exceed(std::string description, double residual, double bound) {
    // Stored residual is bound - residual: <= tolerance iff residual >= bound.
    cases.push_back({std::move(description), bound - residual});
  }

  double max_residual() const {
    double m = 0.0;
    for (const auto& c : cases) m = std::max(m, c.residual);
    return m;
  }
  bool pass() const {
    return std::all_of(cases.begin(), cases.end(), [this](const CheckCase& c) {
      return c.residual <= tolerance;
    });
  }
};

}  // namespace ncfree
