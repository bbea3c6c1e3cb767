#include "mixroute/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mixroute/errors.hpp"

namespace mixroute {

namespace {

bool same_block(Eigen::Index i, Eigen::Index j) { return i / 2 == j / 2; }

void require_square_even(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() % 2 != 0 || a.rows() == 0) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + " must be square with even, nonzero size");
  }
}

bool block_diagonal(const Matrix& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (!same_block(i, j) && a(i, j) != 0.0) return false;
  return true;
}

double safe_ratio(double num, double den) {
  if (den == 0.0) return num == 0.0 ? 0.0 : kUnbounded;
  return num / den;
}

void finish_beta(BetaValue& out, const CostMatrix& cost, const FlowVector& v) {
  const Vector av = cost.coefficients() * v.values();
  out.proof_denominator = av.dot(v.values());
  out.denominator = out.proof_denominator + cost.offset().dot(v.values());
  if (out.unbounded) {
    out.value = out.proof_ratio = kUnbounded;
    out.numerator = kUnbounded;
    return;
  }
  out.value = safe_ratio(out.numerator, out.denominator);
  out.proof_ratio = safe_ratio(out.numerator, out.proof_denominator);
}

// Solver output may carry entries like -1e-17; those are clamped to zero.
FlowVector check_reference(const CostMatrix& cost, const FlowVector& v) {
  if (v.size() != cost.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "reference flow has length " +
                                                   std::to_string(v.size()) + ", expected " +
                                                   std::to_string(cost.dimension()));
  }
  if ((v.values().array() < -1e-9).any()) {
    throw Error(ErrorCode::kValidationError, "reference flow has negative entries");
  }
  return FlowVector(Vector(v.values().cwiseMax(0.0)));
}

// Connected components of the symmetric sparsity pattern.
std::vector<std::vector<Eigen::Index>> components(const Matrix& a) {
  const Eigen::Index n = a.rows();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (a(i, j) != 0.0 || a(j, i) != 0.0) parent[find(i)] = find(j);
  std::vector<std::vector<Eigen::Index>> out;
  std::vector<long> slot(static_cast<std::size_t>(n), -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(out.size());
      out.emplace_back();
    }
    out[static_cast<std::size_t>(slot[r])].push_back(i);
  }
  return out;
}

struct Piece {
  Matrix a;  // component block of A
  Vector w;  // component of A v
  double value(const Vector& z) const { return w.dot(z) - z.dot(a * z); }
  Vector gradient(const Vector& z) const { return w - (a + a.transpose()) * z; }
};

// Returns false when a ray of unbounded growth is found; otherwise fills the
// box. `exact` reports whether the box is a proven enclosure.
bool piece_box(const Piece& pc, Vector& box, bool& exact) {
  const Eigen::Index d = pc.w.size();
  box = Vector::Zero(d);
  const double scale = std::max(1.0, pc.a.cwiseAbs().maxCoeff());
  if ((pc.a.array() >= 0.0).all()) {
    exact = true;
    Vector peak = Vector::Zero(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      if (pc.a(j, j) == 0.0) {
        if (pc.w(j) > 0.0) return false;
      } else if (pc.w(j) > 0.0) {
        peak(j) = pc.w(j) * pc.w(j) / (4.0 * pc.a(j, j));
      }
    }
    const double total = peak.sum();
    for (Eigen::Index j = 0; j < d; ++j) {
      const double ajj = pc.a(j, j);
      if (ajj == 0.0) continue;  // w_j <= 0: z_j = 0 is optimal
      const double rest = total - peak(j);
      box(j) = (pc.w(j) + std::sqrt(pc.w(j) * pc.w(j) + 4.0 * ajj * rest)) / (2.0 * ajj);
    }
    return true;
  }

  // Mixed signs: probe rays d >= 0 for d'Ad < 0, or d'Ad = 0 with w'd > 0.
  exact = false;
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double min_curv = kUnbounded;
  auto probe = [&](const Vector& dir) {
    const Vector u = dir / dir.norm();
    const double curv = u.dot(pc.a * u);
    if (curv < -1e-12 * scale || (curv <= 1e-12 * scale && pc.w.dot(u) > 1e-12)) return false;
    min_curv = std::min(min_curv, curv);
    return true;
  };
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index l = j; l < d; ++l) {
      Vector dir = Vector::Zero(d);
      dir(j) += 1.0;
      dir(l) += 1.0;
      if (!probe(dir)) return false;
    }
  }
  for (int s = 0; s < 4000; ++s) {
    Vector dir(d);
    for (Eigen::Index j = 0; j < d; ++j) dir(j) = unif(rng);
    if (dir.norm() > 0.0 && !probe(dir)) return false;
  }
  const double radius = min_curv > 0.0 ? 2.0 * pc.w.cwiseMax(0.0).norm() / min_curv : 0.0;
  box.setConstant(radius);
  return true;
}

Vector ascend(const Piece& pc, Vector z) {
  double value = pc.value(z);
  const double lip = std::max(1e-12, (pc.a + pc.a.transpose()).norm());
  for (int it = 0; it < 5000; ++it) {
    const Vector g = pc.gradient(z);
    double t = 1.0 / lip;
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt) {
      const Vector trial = (z + t * g).cwiseMax(0.0);
      const double v = pc.value(trial);
      if (v >= value + 1e-4 * g.dot(trial - z)) {
        moved = (trial - z).lpNorm<Eigen::Infinity>() > 1e-15;
        z = trial;
        value = v;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
  }
  return z;
}

}  // namespace

BetaValue beta_closed_form(const CostMatrix& cost, const FlowVector& reference) {
  const FlowVector v = check_reference(cost, reference);
  const Matrix& a = cost.coefficients();
  if (!block_diagonal(a)) {
    throw Error(ErrorCode::kNotPairwiseSeparable, "cost matrix has off-block entries");
  }
  BetaValue out;
  out.method = "closed-form";
  out.per_link_terms.assign(cost.link_count(), 0.0);
  for (std::size_t i = 0; i < cost.link_count(); ++i) {
    const Matrix blk = cost.block(i);
    if (blk.isZero(0.0)) continue;
    if (blk.row(0) != blk.row(1)) {
      throw Error(ErrorCode::kUnequalBlockRows,
                  "link " + std::to_string(i + 1) + " has class-dependent delays");
    }
    const double alpha = blk(0, 0), gamma = blk(0, 1);
    if (!(alpha > 0.0) || !(gamma > 0.0)) {
      throw Error(ErrorCode::kDegenerateBlock,
                  "link " + std::to_string(i + 1) + " has a nonpositive class coefficient");
    }
    // Gain (s - u)(x + y) with u = alpha x + gamma y; for fixed u the flow
    // x + y is largest on the cheaper class, giving u / min(alpha, gamma).
    const double s = alpha * v.regular(static_cast<int>(i) + 1) +
                     gamma * v.smart(static_cast<int>(i) + 1);
    out.per_link_terms[i] = s * s / (4.0 * std::min(alpha, gamma));
  }
  out.numerator = std::accumulate(out.per_link_terms.begin(), out.per_link_terms.end(), 0.0);
  finish_beta(out, cost, v);
  return out;
}

BetaValue beta_grid_oracle(const CostMatrix& cost, const FlowVector& reference,
                           int grid_steps) {
  const FlowVector v = check_reference(cost, reference);
  if (grid_steps < 1) throw Error(ErrorCode::kValidationError, "grid_steps must be >= 1");
  const Matrix& a = cost.coefficients();
  const Vector av = a * v.values();

  BetaValue out;
  out.method = "grid-oracle";
  for (const auto& comp : components(a)) {
    Piece pc;
    const auto d = static_cast<Eigen::Index>(comp.size());
    pc.a.resize(d, d);
    pc.w.resize(d);
    for (Eigen::Index r = 0; r < d; ++r) {
      pc.w(r) = av(comp[r]);
      for (Eigen::Index c = 0; c < d; ++c) pc.a(r, c) = a(comp[r], comp[c]);
    }
    Vector box;
    bool exact = true;
    if (!piece_box(pc, box, exact)) {
      out.unbounded = true;
      out.per_link_terms.push_back(kUnbounded);
      continue;
    }
    if (!exact) out.method = "grid-oracle (sampled box)";

    std::vector<Eigen::Index> live;
    for (Eigen::Index j = 0; j < d; ++j)
      if (box(j) > 0.0) live.push_back(j);
    if (live.empty()) {
      out.per_link_terms.push_back(0.0);
      continue;
    }
    const auto dims = static_cast<int>(live.size());
    int steps = grid_steps;
    if (dims > 2) {
      steps = std::max(8, static_cast<int>(std::floor(std::pow(4e6, 1.0 / dims))));
      steps = std::min(steps, grid_steps);
    }

    std::vector<int> idx(live.size(), 0);
    Vector z = Vector::Zero(d);
    Vector best_z = z;
    double best = 0.0;
    while (true) {
      for (std::size_t q = 0; q < live.size(); ++q)
        z(live[q]) = box(live[q]) * idx[q] / steps;
      const double val = pc.value(z);
      if (val > best) {
        best = val;
        best_z = z;
      }
      std::size_t q = 0;
      for (; q < idx.size(); ++q) {
        if (++idx[q] <= steps) break;
        idx[q] = 0;
      }
      if (q == idx.size()) break;
    }
    const Vector refined = ascend(pc, best_z);
    const double refined_value = std::max(best, pc.value(refined));

    double delta2 = 0.0;
    for (Eigen::Index j : live) delta2 += std::pow(box(j) / steps, 2);
    const double delta = std::sqrt(delta2);
    const double hess = (pc.a + pc.a.transpose()).operatorNorm();
    const double grad = pc.w.norm() + hess * box.norm();
    out.error_bar += grad * delta + 0.5 * hess * delta2;
    out.per_link_terms.push_back(refined_value);
  }
  if (!out.unbounded) {
    out.numerator = std::accumulate(out.per_link_terms.begin(), out.per_link_terms.end(), 0.0);
  }
  finish_beta(out, cost, v);
  return out;
}

double poa_bound_from_beta(double beta) { return beta < 1.0 ? 1.0 / (1.0 - beta) : kUnbounded; }

double bicriteria_bound_from_beta(double beta) { return 1.0 + beta; }

const char* to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::kBeta: return "beta";
    case BoundKind::kPairwise: return "pairwise";
    case BoundKind::kSplit: return "split";
  }
  return "unknown";
}

BoundReport bounds_pairwise(const CostMatrix& cost) {
  BoundReport out;
  out.kind = BoundKind::kPairwise;
  out.k = degree_of_asymmetry(cost);
  out.poa_bound = out.k < 4.0 ? 4.0 / (4.0 - out.k) : kUnbounded;
  out.bicriteria_bound = 1.0 + out.k / 4.0;
  out.applicable = true;
  return out;
}

double eta_squared(const Matrix& p) {
  if (p.rows() != p.cols() || p.rows() == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "P must be square and nonempty");
  }
  const Matrix s = symmetric_part(p);
  const SymmetricEigen eig = jacobi_eigen(s);
  if (!(eig.values(0) > 1e-10)) {
    throw Error(ErrorCode::kPNotPositiveDefinite,
                "symmetric part of P has eigenvalue " + std::to_string(eig.values(0)));
  }
  const Matrix s_inv_sqrt = symmetric_inverse_sqrt(s);
  const Matrix s_inv = symmetric_inverse(s);
  const Matrix m = s_inv_sqrt * p.transpose() * s_inv * p * s_inv_sqrt;
  return jacobi_eigen(symmetric_part(m)).values.maxCoeff();
}

MatrixSplit validate_split(const Matrix& a, const Matrix& q, const Matrix& p) {
  require_square_even(a, "A");
  if (q.rows() != a.rows() || q.cols() != a.cols() || p.rows() != a.rows() ||
      p.cols() != a.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "Q and P must match the shape of A");
  }
  const double mismatch = (a - q - p).cwiseAbs().maxCoeff();
  if (mismatch > 1e-12) {
    throw Error(ErrorCode::kSplitMismatch,
                "A - Q - P has an entry of size " + std::to_string(mismatch));
  }
  if (!block_diagonal(q)) {
    throw Error(ErrorCode::kQNotBlockDiagonal, "Q has nonzero entries outside its 2x2 blocks");
  }
  for (Eigen::Index i = 0; i < q.rows(); i += 2) {
    if (!(q.block(i, i, 2, 2).array() > 0.0).all()) {
      throw Error(ErrorCode::kQNonPositiveBlock,
                  "Q block of link " + std::to_string(i / 2 + 1) + " has a nonpositive entry");
    }
  }
  const double lambda = min_symmetric_eigenvalue(p);
  if (!(lambda > 1e-10)) {
    throw Error(ErrorCode::kPNotPositiveDefinite,
                "symmetric part of P has minimum eigenvalue " + std::to_string(lambda));
  }
  MatrixSplit out{q, p, 0.0, 0.0};
  out.k_q = degree_of_asymmetry(CostMatrix(q, Vector::Zero(q.rows())));
  out.eta_squared = eta_squared(p);
  return out;
}

MatrixSplit default_split(const Matrix& a, double margin) {
  require_square_even(a, "A");
  if (margin < 0.0) margin = 1e-2 * a.cwiseAbs().maxCoeff();
  Matrix p = Matrix::Zero(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double half = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (same_block(i, j)) continue;
      p(i, j) = a(i, j);
      half += 0.5 * std::abs(a(i, j) + a(j, i));
    }
    p(i, i) = half + margin;
  }
  return validate_split(a, a - p, p);
}

BoundReport bounds_nonseparable(const MatrixSplit& split) {
  BoundReport out;
  out.kind = BoundKind::kSplit;
  out.k = split.k_q;
  out.eta_squared = split.eta_squared;
  out.poa_bound = split.k_q < 4.0 ? 4.0 / (4.0 - split.k_q) + split.eta_squared : kUnbounded;
  out.bicriteria_bound = 2.0 + split.k_q / 4.0;
  out.applicable = true;
  return out;
}

DominanceReport dominance_sufficient_conditions(const Matrix& a) {
  require_square_even(a, "A");
  DominanceReport out;
  out.holds = true;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    DominanceRow row;
    row.row = static_cast<int>(i) + 1;
    row.diagonal = a(i, i);
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (!same_block(i, j)) row.off_block_half_sum += 0.5 * std::abs(a(i, j) + a(j, i));
    row.holds = row.diagonal > row.off_block_half_sum;
    out.holds = out.holds && row.holds;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace mixroute
