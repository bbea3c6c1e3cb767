#pragma once

#include <cstddef>
#include <vector>

#include "mixroute/linalg.hpp"

namespace mixroute::detail {

/// { x : eq * x = eq_rhs, ineq * x >= ineq_rhs }, assumed bounded.
struct Polytope {
  Matrix eq;
  Vector eq_rhs;
  Matrix ineq;
  Vector ineq_rhs;

  Eigen::Index dimension() const { return eq.cols() > 0 ? eq.cols() : ineq.cols(); }
  bool contains(const Vector& x, double tol) const;
};

/// 1/2 x'Hx + f'x + constant
struct QuadraticObjective {
  Matrix hessian;
  Vector linear;
  double constant = 0.0;

  double value(const Vector& x) const {
    return 0.5 * x.dot(hessian * x) + linear.dot(x) + constant;
  }
  Vector gradient(const Vector& x) const { return hessian * x + linear; }
};

struct KktPoint {
  Vector x;
  double value = 0.0;
};

struct KktEnumeration {
  std::vector<KktPoint> points;  // deduplicated, feasible
  std::size_t subsets_examined = 0;
  bool budget_exhausted = false;
};

/// Enumerates every active set of inequality rows (up to the face dimension),
/// and on each face keeps the unique stationary point when the reduced
/// Hessian is positive definite (vertices always qualify). The global minimum
/// of the quadratic over the polytope is among the returned points.
KktEnumeration enumerate_kkt_points(const QuadraticObjective& objective,
                                    const Polytope& polytope,
                                    std::size_t subset_budget,
                                    double tol = 1e-9);

/// Nonnegative least squares (Lawson-Hanson active set).
Vector nnls(const Matrix& a, const Vector& b, int max_iterations = 0);

}  // namespace mixroute::detail
