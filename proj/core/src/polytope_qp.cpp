#include "mixroute/detail/polytope_qp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace mixroute::detail {

bool Polytope::contains(const Vector& x, double tol) const {
  if (eq.rows() > 0) {
    const Vector r = eq * x - eq_rhs;
    for (Eigen::Index i = 0; i < r.size(); ++i)
      if (std::abs(r(i)) > tol * (1.0 + std::abs(eq_rhs(i)))) return false;
  }
  if (ineq.rows() > 0) {
    const Vector r = ineq * x - ineq_rhs;
    for (Eigen::Index i = 0; i < r.size(); ++i)
      if (r(i) < -tol * (1.0 + std::abs(ineq_rhs(i)))) return false;
  }
  return true;
}

namespace {

void add_unique(std::vector<KktPoint>& points, KktPoint candidate, double tol) {
  for (const auto& p : points)
    if ((p.x - candidate.x).lpNorm<Eigen::Infinity>() <= tol) return;
  points.push_back(std::move(candidate));
}

}  // namespace

KktEnumeration enumerate_kkt_points(const QuadraticObjective& objective,
                                    const Polytope& polytope,
                                    std::size_t subset_budget, double tol) {
  KktEnumeration out;
  const Eigen::Index d = polytope.dimension();
  const Eigen::Index m = polytope.ineq.rows();
  if (d == 0) return out;
  if (m >= 63) {
    out.budget_exhausted = true;
    return out;
  }

  int eq_rank = 0;
  if (polytope.eq.rows() > 0) {
    Eigen::JacobiSVD<Matrix> svd(polytope.eq);
    svd.setThreshold(1e-10);
    eq_rank = static_cast<int>(svd.rank());
  }
  const int max_active = static_cast<int>(d) - eq_rank;

  const std::uint64_t subset_count = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < subset_count; ++mask) {
    const int active = std::popcount(mask);
    if (active > max_active) continue;
    if (out.subsets_examined >= subset_budget) {
      out.budget_exhausted = true;
      break;
    }
    ++out.subsets_examined;

    const Eigen::Index rows = polytope.eq.rows() + active;
    Matrix k(rows, d);
    Vector rhs(rows);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < polytope.eq.rows(); ++i, ++r) {
      k.row(r) = polytope.eq.row(i);
      rhs(r) = polytope.eq_rhs(i);
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!(mask >> i & 1u)) continue;
      k.row(r) = polytope.ineq.row(i);
      rhs(r) = polytope.ineq_rhs(i);
      ++r;
    }

    Vector x0;
    Matrix null_basis;
    if (rows == 0) {
      x0 = Vector::Zero(d);
      null_basis = Matrix::Identity(d, d);
    } else {
      Eigen::JacobiSVD<Matrix> svd(k, Eigen::ComputeThinU | Eigen::ComputeFullV);
      svd.setThreshold(1e-10);
      x0 = svd.solve(rhs);
      const Vector residual = k * x0 - rhs;
      if (residual.lpNorm<Eigen::Infinity>() > tol * (1.0 + rhs.lpNorm<Eigen::Infinity>()))
        continue;  // inconsistent active set
      const Eigen::Index rank = svd.rank();
      // A smaller active set with the same span reaches this face.
      if (rank < rows && active > 0 &&
          rank - eq_rank < active)
        continue;
      null_basis = svd.matrixV().rightCols(d - rank);
    }

    Vector x = x0;
    if (null_basis.cols() > 0) {
      const Matrix reduced = null_basis.transpose() * objective.hessian * null_basis;
      Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (reduced + reduced.transpose()));
      const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
      if (eig.eigenvalues().minCoeff() <= 1e-10 * scale) continue;
      const Vector g = null_basis.transpose() * objective.gradient(x0);
      x = x0 - null_basis * eig.eigenvectors() *
                   (eig.eigenvectors().transpose() * g).cwiseQuotient(eig.eigenvalues());
    }
    if (!polytope.contains(x, tol)) continue;
    add_unique(out.points, KktPoint{x, objective.value(x)}, 1e-9);
  }
  return out;
}

Vector nnls(const Matrix& a, const Vector& b, int max_iterations) {
  const Eigen::Index n = a.cols();
  if (max_iterations <= 0) max_iterations = static_cast<int>(3 * n + 30);
  Vector x = Vector::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol = 1e-12 * std::max(1.0, a.norm() * std::max(1.0, b.norm()));

  auto solve_passive = [&](Vector& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    z = Vector::Zero(n);
    if (idx.empty()) return;
    Matrix sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = a.col(idx[c]);
    const Vector s = sub.colPivHouseholderQr().solve(b);
    for (std::size_t c = 0; c < idx.size(); ++c) z(idx[c]) = s(static_cast<Eigen::Index>(c));
  };

  for (int outer = 0; outer < max_iterations; ++outer) {
    const Vector w = a.transpose() * (b - a * x);
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;

    for (int inner = 0; inner <= n; ++inner) {
      Vector z;
      solve_passive(z);
      bool all_positive = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) all_positive = false;
      if (all_positive) {
        x = z;
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0)
          alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      }
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x(j) <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
    }
  }
  return x;
}

}  // namespace mixroute::detail
