#pragma once

#include <limits>
#include <string>
#include <vector>

#include "mixroute/cost.hpp"
#include "mixroute/linalg.hpp"
#include "mixroute/network.hpp"

namespace mixroute {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Worst-case normalized deviation gain at a reference flow v:
///   max over z >= 0 of <c(v) - c(z), z> / <c(v), v>   (0/0 = 0).
struct BetaValue {
  double value = 0.0;        // denominator <A v + b, v>
  double proof_ratio = 0.0;  // denominator <A v, v>
  double numerator = 0.0;
  double denominator = 0.0;
  double proof_denominator = 0.0;
  bool unbounded = false;
  /// Per-link numerator maxima (closed form) or per-component maxima (oracle).
  std::vector<double> per_link_terms;
  std::string method;
  /// Upper bound on how far the oracle's numerator may sit below the true max.
  double error_bar = 0.0;
};

/// Exact per-link maximization for 2x2 block-diagonal costs whose two block
/// rows coincide. Throws kNotPairwiseSeparable, kUnequalBlockRows,
/// kDegenerateBlock, kDimensionMismatch.
BetaValue beta_closed_form(const CostMatrix& cost, const FlowVector& v);

/// Grid search over a finite box that provably contains the maximizer
/// (nonnegative A), followed by projected ascent. Each connected component of
/// the sparsity pattern of A is searched separately; components of dimension
/// above two get a coarser grid so the point count stays bounded. Reports
/// `unbounded` when a ray of unbounded growth exists.
BetaValue beta_grid_oracle(const CostMatrix& cost, const FlowVector& v, int grid_steps = 200);

/// 1 / (1 - beta), +inf for beta >= 1.
double poa_bound_from_beta(double beta);
/// 1 + beta
double bicriteria_bound_from_beta(double beta);

enum class BoundKind { kBeta, kPairwise, kSplit };
const char* to_string(BoundKind kind);

struct BoundReport {
  BoundKind kind = BoundKind::kPairwise;
  double k = 0.0;
  double poa_bound = kUnbounded;
  double bicriteria_bound = kUnbounded;
  double eta_squared = 0.0;  // kSplit only
  bool applicable = false;
  std::string reason;
};

/// poa 4/(4-k) (+inf for k >= 4), bicriteria 1 + k/4.
/// Throws kNotPairwiseSeparable, kDegenerateBlock.
BoundReport bounds_pairwise(const CostMatrix& cost);

/// A = Q + P with Q 2x2 block diagonal with positive blocks and P having a
/// positive definite symmetric part.
struct MatrixSplit {
  Matrix q;
  Matrix p;
  double k_q = 0.0;
  double eta_squared = 0.0;
};

/// Checks, in order: A = Q + P entrywise within 1e-12 (kSplitMismatch),
/// Q block diagonal (kQNotBlockDiagonal), Q blocks strictly positive
/// (kQNonPositiveBlock), symmetric part of P with min eigenvalue > 1e-10
/// (kPNotPositiveDefinite). Throws kDimensionMismatch on shape errors.
MatrixSplit validate_split(const Matrix& a, const Matrix& q, const Matrix& p);

/// P = off-block part of A plus a diagonal D making P diagonally dominant,
/// D_ii = 1/2 sum_{j outside i's block} |A_ij + A_ji| + margin; Q = A - P.
/// `margin` < 0 selects 1e-2 * max |A_ij|. The result is validated.
MatrixSplit default_split(const Matrix& a, double margin = -1.0);

/// lambda_max(S^-1/2 P^T S^-1 P S^-1/2), S = (P + P^T)/2, via Jacobi
/// eigendecompositions. Always >= 1. Throws kPNotPositiveDefinite.
double eta_squared(const Matrix& p);

/// poa 4/(4-k_Q) + eta^2 (+inf for k_Q >= 4), bicriteria 2 + k_Q/4.
BoundReport bounds_nonseparable(const MatrixSplit& split);

struct DominanceRow {
  int row = 0;  // 1-based
  double diagonal = 0.0;
  double off_block_half_sum = 0.0;
  bool holds = false;
};

struct DominanceReport {
  bool holds = false;
  std::vector<DominanceRow> rows;
};

/// Row-wise diagonal dominance of A over entries outside each row's own
/// 2x2 block; sufficient (not necessary) for default_split to be valid.
DominanceReport dominance_sufficient_conditions(const Matrix& a);

}  // namespace mixroute
