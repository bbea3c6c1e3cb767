#pragma once

#include <Eigen/Dense>

namespace mixroute {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Eigenpairs of a symmetric matrix, eigenvalues ascending, eigenvectors as
/// columns in matching order.
struct SymmetricEigen {
  Vector values;
  Matrix vectors;
  int sweeps = 0;
};

/// Cyclic Jacobi rotations on the symmetric part of `m` until the
/// off-diagonal Frobenius norm drops below `off_tol` (relative to the norm of
/// the input) or `max_sweeps` is reached.
SymmetricEigen jacobi_eigen(const Matrix& m, double off_tol = 1e-12,
                            int max_sweeps = 100);

/// (m + m^T) / 2
Matrix symmetric_part(const Matrix& m);

/// Smallest eigenvalue of the symmetric part of `m`.
double min_symmetric_eigenvalue(const Matrix& m);

/// f(S) = V diag(f(lambda)) V^T for a symmetric S; eigenvalues are floored at
/// `floor` before the inverse square root / inverse is taken.
Matrix symmetric_inverse_sqrt(const Matrix& s, double floor = 1e-12);
Matrix symmetric_inverse(const Matrix& s, double floor = 1e-12);

}  // namespace mixroute
