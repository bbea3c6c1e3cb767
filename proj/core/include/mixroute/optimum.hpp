#pragma once

#include <string>
#include <vector>

#include "mixroute/cost.hpp"
#include "mixroute/equilibrium.hpp"
#include "mixroute/network.hpp"

namespace mixroute {

/// How the reported optimum was obtained.
enum class Certificate {
  kExhaustiveFaces,  // every face of the path polytope examined; exact
  kExhaustiveGrid,   // full grid plus local descent; gap bounded by resolution
  kMultistartLocal,  // heuristic; no optimality guarantee
};

const char* to_string(Certificate c);

enum class OptimumMethod { kAuto, kFaces, kGrid, kMultistart };

struct OptimumResult {
  FlowVector flow;
  double cost = 0.0;
  Certificate certificate = Certificate::kMultistartLocal;
  /// Upper bound on cost - C^OPT; 0 for face enumeration, +inf for multistart.
  double gap_estimate = 0.0;
  std::vector<PathFlow> path_flows;
};

/// Minimizes <A z + b, z> over the path-flow polytope. kAuto uses face
/// enumeration when it fits `opts.face_budget` and multistart otherwise.
OptimumResult social_optimum(const Network& network, const CostMatrix& cost,
                             const SolverOptions& opts = {},
                             OptimumMethod method = OptimumMethod::kAuto);

struct PriceOfAnarchy {
  double value = 0.0;
  EquilibriumResult worst;
  OptimumResult optimum;
};

/// Worst equilibrium cost over optimal cost. Throws kZeroOptimalCost.
PriceOfAnarchy price_of_anarchy(const Network& network, const CostMatrix& cost,
                                const SolverOptions& opts = {});

struct BicriteriaResult {
  double scale = 0.0;        // p
  double scaled_cost = 0.0;  // C^OPT with demands times p
  double target_cost = 0.0;
  int iterations = 0;
  double bracket_high = 0.0;
};

/// Demand multiplier p (both classes) at which the optimal cost equals
/// `target_cost`, by bisection. Throws kBracketFailure, kNonMonotoneScaling.
BicriteriaResult empirical_bicriteria(const Network& network, const CostMatrix& cost,
                                      double target_cost, const SolverOptions& opts = {});

}  // namespace mixroute
