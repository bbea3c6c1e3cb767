#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mixroute/equilibrium.hpp"

namespace mixroute::cli {

enum class Comparison { kNear, kAtMost, kHolds };

/// One measured-versus-expected comparison of the acceptance suite.
struct Check {
  int criterion = 0;
  std::string tag;    // matched by --filter
  std::string label;
  Comparison comparison = Comparison::kNear;
  double measured = 0.0;
  double expected = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string detail;
};

struct SuiteOptions {
  /// Only checks whose tag contains this substring run.
  std::string filter;
  /// Expected values of kNear checks are multiplied by (1 + perturb).
  double perturb = 0.0;
  /// Criteria to run (1..9); empty runs all.
  std::vector<int> criteria;
  SolverOptions solver;
};

inline constexpr int kCriterionCount = 9;

std::vector<Check> run_suite(const SuiteOptions& opts);

std::string format_check(const Check& check);

/// Per-check lines, one line per criterion, and a total. Returns the number
/// of failed checks.
int print_suite(std::ostream& os, const std::vector<Check>& checks, const SuiteOptions& opts);

int cmd_verify(const SuiteOptions& opts, std::ostream& out);

}  // namespace mixroute::cli
