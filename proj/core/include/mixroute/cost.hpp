#pragma once

#include <optional>
#include <span>
#include <utility>

#include "mixroute/linalg.hpp"
#include "mixroute/network.hpp"

namespace mixroute {

/// Platooning capacity model inputs for one road. Headway rates are the
/// reciprocals of the time gap a vehicle needs (1/hours).
struct CapacityParams {
  double regular_headway_rate = 1.0;  // m
  double smart_headway_rate = 1.0;    // M
  double congestion_scale = 0.0;      // r
  double free_flow_time = 0.0;        // b
};

/// Which class carries the asymmetry factor k on a link.
enum class Orientation {
  kRegularHeavy,  // c = b + k a x + a y
  kSmartHeavy,    // c = b + a x + k a y
};

const char* to_string(Orientation o);

struct LinkCostParams {
  double free_flow_time = 0.0;  // b
  double congestion = 1.0;      // a
  double asymmetry = 1.0;       // k
  Orientation orientation = Orientation::kRegularHeavy;
};

/// c(z) = A z + b over interleaved (x_1, y_1, ..., x_n, y_n) flows.
class CostMatrix {
 public:
  CostMatrix() = default;
  /// Throws kDimensionMismatch unless A is square of even size matching
  /// `offset`, and kValidationError unless offset entries come in equal pairs.
  CostMatrix(Matrix coefficients, Vector offset);

  const Matrix& coefficients() const { return coefficients_; }
  const Vector& offset() const { return offset_; }
  std::size_t link_count() const { return static_cast<std::size_t>(offset_.size()) / 2; }
  std::size_t dimension() const { return static_cast<std::size_t>(offset_.size()); }

  /// 2x2 block of link `link_index` (0-based).
  Matrix block(std::size_t link_index) const;

 private:
  Matrix coefficients_;
  Vector offset_;
};

enum class SeparabilityClass { kSeparable, kPairwiseSeparable, kNonseparable };

const char* to_string(SeparabilityClass s);

/// m M (x + y) / (M x + m y). Throws kZeroFlow when x + y == 0.
double capacity(const CapacityParams& params, double x, double y);

/// (b, a = r/M, k = M/m, regular-heavy). Throws kDegenerateCost for r == 0
/// and kValidationError for non-positive headway rates.
LinkCostParams from_capacity(const CapacityParams& params);

CostMatrix assemble_matrix(std::span<const LinkCostParams> links);

/// Per-entry delays A z + b. Throws kDimensionMismatch.
Vector evaluate(const CostMatrix& cost, const FlowVector& z);

/// <A z + b, z>. Throws kDimensionMismatch.
double social_cost(const CostMatrix& cost, const FlowVector& z);

SeparabilityClass classify(const CostMatrix& cost);

/// max over links of max(k_i, 1/k_i), k_i the ratio of the regular to the
/// smart coefficient in each block row. All-zero blocks (constant-delay
/// links) impose no asymmetry and are skipped. Throws kNotPairwiseSeparable
/// and kDegenerateBlock (a row with exactly one zero coefficient, or no
/// link with congestion at all).
double degree_of_asymmetry(const CostMatrix& cost);

bool is_elementwise_monotone(const CostMatrix& cost);

/// Symmetric part of A is PSD to within `tol`.
bool is_monotone_operator(const CostMatrix& cost, double tol = 1e-9);

/// <c(u) - c(v), u - v>
double monotonicity_gap(const CostMatrix& cost, const FlowVector& u, const FlowVector& v);

/// Nonnegative (u, v) with negative monotonicity gap, built from the
/// eigenvector of the most negative eigenvalue of the symmetric part.
std::optional<std::pair<FlowVector, FlowVector>> monotonicity_witness(
    const CostMatrix& cost, double tol = 1e-9);

}  // namespace mixroute
