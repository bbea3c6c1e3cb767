#include "mixroute/cost.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixroute/errors.hpp"

namespace mixroute {

const char* to_string(Orientation o) {
  return o == Orientation::kRegularHeavy ? "regular-heavy" : "smart-heavy";
}

const char* to_string(SeparabilityClass s) {
  switch (s) {
    case SeparabilityClass::kSeparable: return "separable";
    case SeparabilityClass::kPairwiseSeparable: return "pairwise-separable";
    case SeparabilityClass::kNonseparable: return "nonseparable";
  }
  return "unknown";
}

CostMatrix::CostMatrix(Matrix coefficients, Vector offset)
    : coefficients_(std::move(coefficients)), offset_(std::move(offset)) {
  const auto n = offset_.size();
  if (coefficients_.rows() != coefficients_.cols() || coefficients_.rows() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cost matrix is " + std::to_string(coefficients_.rows()) + "x" +
                    std::to_string(coefficients_.cols()) + " but offset has " +
                    std::to_string(n) + " entries");
  }
  if (n == 0 || n % 2 != 0) {
    throw Error(ErrorCode::kDimensionMismatch, "cost dimension must be even and positive");
  }
  for (Eigen::Index i = 0; i < n; i += 2) {
    if (offset_(i) != offset_(i + 1)) {
      throw Error(ErrorCode::kValidationError,
                  "offset entries of link " + std::to_string(i / 2 + 1) +
                      " differ; both classes share the free-flow time");
    }
  }
}

Matrix CostMatrix::block(std::size_t link_index) const {
  const auto i = static_cast<Eigen::Index>(2 * link_index);
  return coefficients_.block(i, i, 2, 2);
}

double capacity(const CapacityParams& p, double x, double y) {
  if (x + y == 0.0) throw Error(ErrorCode::kZeroFlow, "capacity is undefined at zero flow");
  const double m = p.regular_headway_rate;
  const double big_m = p.smart_headway_rate;
  return m * big_m * (x + y) / (big_m * x + m * y);
}

LinkCostParams from_capacity(const CapacityParams& p) {
  if (!(p.regular_headway_rate > 0.0) || !(p.smart_headway_rate > 0.0))
    throw Error(ErrorCode::kValidationError, "headway rates m and M must be positive");
  if (p.congestion_scale < 0.0 || p.free_flow_time < 0.0)
    throw Error(ErrorCode::kValidationError, "r and b must be nonnegative");
  if (p.congestion_scale == 0.0)
    throw Error(ErrorCode::kDegenerateCost, "congestion scale r = 0 gives a = 0");
  return LinkCostParams{
      p.free_flow_time,
      p.congestion_scale / p.smart_headway_rate,
      p.smart_headway_rate / p.regular_headway_rate,
      Orientation::kRegularHeavy,
  };
}

CostMatrix assemble_matrix(std::span<const LinkCostParams> links) {
  if (links.empty()) throw Error(ErrorCode::kValidationError, "no link costs given");
  const auto dim = static_cast<Eigen::Index>(2 * links.size());
  Matrix a = Matrix::Zero(dim, dim);
  Vector b(dim);
  for (std::size_t i = 0; i < links.size(); ++i) {
    const LinkCostParams& l = links[i];
    const auto r = static_cast<Eigen::Index>(2 * i);
    const double heavy = l.asymmetry * l.congestion;
    const double regular_coef =
        l.orientation == Orientation::kRegularHeavy ? heavy : l.congestion;
    const double smart_coef =
        l.orientation == Orientation::kRegularHeavy ? l.congestion : heavy;
    for (Eigen::Index row = r; row < r + 2; ++row) {
      a(row, r) = regular_coef;
      a(row, r + 1) = smart_coef;
    }
    b(r) = b(r + 1) = l.free_flow_time;
  }
  return CostMatrix(std::move(a), std::move(b));
}

namespace {

void check_dims(const CostMatrix& cost, const FlowVector& z) {
  if (z.size() != cost.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "flow has " + std::to_string(z.size()) + " entries, cost expects " +
                    std::to_string(cost.dimension()));
  }
}

bool is_block_diagonal(const Matrix& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i / 2 != j / 2 && a(i, j) != 0.0) return false;
  return true;
}

}  // namespace

Vector evaluate(const CostMatrix& cost, const FlowVector& z) {
  check_dims(cost, z);
  return cost.coefficients() * z.values() + cost.offset();
}

double social_cost(const CostMatrix& cost, const FlowVector& z) {
  return evaluate(cost, z).dot(z.values());
}

SeparabilityClass classify(const CostMatrix& cost) {
  const Matrix& a = cost.coefficients();
  if (a.isDiagonal(0.0)) return SeparabilityClass::kSeparable;
  if (is_block_diagonal(a)) return SeparabilityClass::kPairwiseSeparable;
  return SeparabilityClass::kNonseparable;
}

double degree_of_asymmetry(const CostMatrix& cost) {
  if (!is_block_diagonal(cost.coefficients())) {
    throw Error(ErrorCode::kNotPairwiseSeparable, "cost matrix has off-block entries");
  }
  double k = 0.0;
  for (std::size_t i = 0; i < cost.link_count(); ++i) {
    const Matrix blk = cost.block(i);
    if (blk.isZero(0.0)) continue;
    for (Eigen::Index row = 0; row < 2; ++row) {
      const double reg = blk(row, 0);
      const double smart = blk(row, 1);
      if (!(reg > 0.0) || !(smart > 0.0)) {
        throw Error(ErrorCode::kDegenerateBlock,
                    "link " + std::to_string(i + 1) +
                        " has a nonpositive class coefficient; its asymmetry is undefined");
      }
      const double ratio = reg / smart;
      k = std::max({k, ratio, 1.0 / ratio});
    }
  }
  if (k == 0.0) throw Error(ErrorCode::kDegenerateBlock, "no link has congestion coefficients");
  return k;
}

bool is_elementwise_monotone(const CostMatrix& cost) {
  return (cost.coefficients().array() >= 0.0).all();
}

bool is_monotone_operator(const CostMatrix& cost, double tol) {
  return min_symmetric_eigenvalue(cost.coefficients()) >= -tol;
}

double monotonicity_gap(const CostMatrix& cost, const FlowVector& u, const FlowVector& v) {
  return (evaluate(cost, u) - evaluate(cost, v)).dot(u.values() - v.values());
}

std::optional<std::pair<FlowVector, FlowVector>> monotonicity_witness(const CostMatrix& cost,
                                                                      double tol) {
  const SymmetricEigen eig = jacobi_eigen(cost.coefficients());
  if (eig.values(0) >= -tol) return std::nullopt;
  // u - v = d gives <A d, d> = lambda_min |d|^2 < 0; split d by sign.
  const Vector d = eig.vectors.col(0);
  return std::make_pair(FlowVector(Vector(d.cwiseMax(0.0))),
                        FlowVector(Vector((-d).cwiseMax(0.0))));
}

}  // namespace mixroute
