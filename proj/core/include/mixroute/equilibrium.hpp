#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mixroute/cost.hpp"
#include "mixroute/network.hpp"

namespace mixroute {

/// Knobs shared by the equilibrium and optimum solvers.
struct SolverOptions {
  double vi_tol = 1e-8;
  int max_iterations = 20000;
  double step_scale = 0.5;  // extragradient step = step_scale / |F|_F
  int multistart_count = 20;
  std::uint64_t random_seed = 1;
  int grid_steps = 200;
  double bisection_tol = 1e-8;
  std::size_t max_paths = kDefaultMaxPaths;
  std::size_t max_support_paths = 12;      // per OD and class
  std::size_t support_budget = 1u << 22;   // active sets examined, all patterns
  std::size_t face_budget = 1u << 20;      // active sets for the exact optimum
  double feasibility_tol = kDefaultFeasibilityTol;
};

struct EquilibriumCandidate {
  FlowVector flow;
  double social_cost = 0.0;
};

struct EquilibriumResult {
  FlowVector flow;
  double social_cost = 0.0;
  double vi_residual = 0.0;
  /// Every enumerated path of every OD and class, with its mass and delay.
  std::vector<PathFlow> path_flows;
  bool converged = false;
  /// True when support enumeration ran to completion.
  bool exhaustive = false;
  int iterations = 0;
  std::size_t patterns_explored = 0;
  std::string method;
  /// Distinct equilibria met during support enumeration, by cost descending.
  std::vector<EquilibriumCandidate> candidates;

  /// (od, class, path) triples carrying more than `tol` mass.
  std::vector<PathFlow> support(double tol = 1e-9) const;
};

/// max over feasible z' of <c(z), z - z'>, using per-OD shortest paths under
/// the fixed delays c(z). Throws kInfeasibleFlow.
double vi_residual(const CostMatrix& cost, const Network& network, const FlowVector& z,
                   double feasibility_tol = kDefaultFeasibilityTol);

/// Extragradient on the path-flow VI, then best-response averaging; if the
/// residual is still above vi_tol, the best iterate is projected onto the
/// nearest support-pattern equilibrium polytope.
EquilibriumResult solve_equilibrium(const Network& network, const CostMatrix& cost,
                                    const SolverOptions& opts = {});

/// Maximizes the social cost over every support pattern's equilibrium
/// polytope. Falls back to solve_equilibrium (exhaustive = false) when the
/// pattern count exceeds the budget.
EquilibriumResult worst_equilibrium(const Network& network, const CostMatrix& cost,
                                    const SolverOptions& opts = {});

}  // namespace mixroute
