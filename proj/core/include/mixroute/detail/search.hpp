#pragma once

#include <cstddef>
#include <vector>

#include "mixroute/detail/path_space.hpp"
#include "mixroute/equilibrium.hpp"

namespace mixroute::detail {

/// What to optimize over each support pattern's equilibrium polytope.
struct SearchObjective {
  enum class Kind { kMaxSocialCost, kMinSocialCost, kNearest };
  Kind kind = Kind::kMaxSocialCost;
  Vector target;  // kNearest only

  static SearchObjective max_social_cost() { return {Kind::kMaxSocialCost, {}}; }
  static SearchObjective min_social_cost() { return {Kind::kMinSocialCost, {}}; }
  static SearchObjective nearest(Vector h) { return {Kind::kNearest, std::move(h)}; }
};

struct SearchPoint {
  Vector h;
  double social_cost = 0.0;
  double score = 0.0;  // objective value, lower is better
};

struct SearchResult {
  /// Distinct equilibria (path space) at KKT points of the objective,
  /// best score first; ties broken by the lexicographically smallest link flow.
  std::vector<SearchPoint> points;
  std::size_t patterns_explored = 0;
  bool exhaustive = true;
};

/// Enumerates support patterns (nonempty path subsets per positive-demand
/// group). With fixed support the Wardrop conditions are linear in h, so each
/// pattern's equilibria form a polytope, searched exactly for KKT points.
SearchResult search_equilibria(const PathSpace& space, const Matrix& path_operator,
                               const Vector& path_offset, const SearchObjective& objective,
                               const SolverOptions& opts);

/// Lexicographic order on vectors, entries within `tol` count as equal.
bool lexicographically_less(const Vector& a, const Vector& b, double tol = 1e-12);

}  // namespace mixroute::detail
