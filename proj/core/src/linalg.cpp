#include "mixroute/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace mixroute {

Matrix symmetric_part(const Matrix& m) { return 0.5 * (m + m.transpose()); }

SymmetricEigen jacobi_eigen(const Matrix& m, double off_tol, int max_sweeps) {
  const Eigen::Index n = m.rows();
  Matrix a = symmetric_part(m);
  Matrix v = Matrix::Identity(n, n);

  auto off_norm = [&a, n] {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  const double scale = std::max(1.0, a.norm());
  int sweep = 0;
  for (; sweep < max_sweeps && off_norm() > off_tol * scale; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle that zeroes a(p,q); the smaller root of
        // t^2 + 2 theta t - 1 = 0 keeps the rotation well conditioned.
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&a](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = a(order[i], order[i]);
    out.vectors.col(i) = v.col(order[i]);
  }
  out.sweeps = sweep;
  return out;
}

double min_symmetric_eigenvalue(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return jacobi_eigen(m).values(0);
}

namespace {

template <typename F>
Matrix spectral_apply(const Matrix& s, F f, double floor) {
  const SymmetricEigen eig = jacobi_eigen(s);
  Vector mapped(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    mapped(i) = f(std::max(eig.values(i), floor));
  return eig.vectors * mapped.asDiagonal() * eig.vectors.transpose();
}

}  // namespace

Matrix symmetric_inverse_sqrt(const Matrix& s, double floor) {
  return spectral_apply(s, [](double x) { return 1.0 / std::sqrt(x); }, floor);
}

Matrix symmetric_inverse(const Matrix& s, double floor) {
  return spectral_apply(s, [](double x) { return 1.0 / x; }, floor);
}

}  // namespace mixroute
