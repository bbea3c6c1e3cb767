#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mixroute/bounds.hpp"
#include "mixroute/equilibrium.hpp"
#include "mixroute/instance.hpp"
#include "mixroute/optimum.hpp"

namespace mixroute {

inline constexpr double kBoundSlack = 1e-6;
inline constexpr double kExpectationTol = 1e-6;

struct BoundCheck {
  BoundReport report;
  bool poa_satisfied = false;
  bool bicriteria_satisfied = false;
};

struct ExpectationCheck {
  std::string quantity;
  double measured = 0.0;
  double expected = 0.0;
  bool pass = false;
};

struct AnalysisReport {
  std::string name;
  SolverOptions options;
  SeparabilityClass separability = SeparabilityClass::kNonseparable;
  bool elementwise_monotone = false;
  bool monotone_operator = false;
  std::optional<double> k;

  EquilibriumResult worst;
  EquilibriumResult found;
  OptimumResult optimum;
  std::optional<double> poa;
  std::optional<BicriteriaResult> bicriteria;
  std::optional<BetaValue> beta;
  std::vector<BoundCheck> bounds;
  std::vector<ExpectationCheck> expectations;
  /// Reasons a quantity is missing or a bound does not apply.
  std::vector<std::string> notes;

  bool converged() const { return worst.converged && found.converged; }
};

/// Worst and found equilibria, optimum, PoA, bicriteria, asymmetry, beta at
/// the worst equilibrium, every applicable bound and the instance's expected
/// values. Recoverable numeric failures become notes.
AnalysisReport analyze(const Instance& instance, const SolverOptions& opts = {});

std::string render_text(const AnalysisReport& report);
std::string render_json(const AnalysisReport& report);

/// Shortest round-trip decimal for finite values, "inf"/"-inf"/"nan" otherwise.
std::string format_number(double value);

}  // namespace mixroute
