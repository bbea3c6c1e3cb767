#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "mixroute/bounds.hpp"
#include "mixroute/fixtures.hpp"
#include "test_support.hpp"

namespace mixroute {
namespace {

using testing::random_links;
using testing::random_nonnegative;
using testing::rng_for;
using testing::uniform;
using testing::uniform_int;

FlowVector flow(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const double x : values) v(i++) = x;
  return FlowVector(v);
}

// Generalized symmetric eigenproblem (P^T S^-1 P) x = lambda S x.
double eta_squared_oracle(const Matrix& p) {
  const Matrix s = 0.5 * (p + p.transpose());
  const Matrix lhs = p.transpose() * s.inverse() * p;
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(0.5 * (lhs + lhs.transpose()), s);
  return solver.eigenvalues().maxCoeff();
}

Matrix random_positive_definite_part(std::mt19937_64& rng, Eigen::Index n) {
  Matrix g(n, n), skew(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      g(i, j) = uniform(rng, -1, 1);
      skew(i, j) = uniform(rng, -3, 3);
    }
  return g * g.transpose() + 0.1 * Matrix::Identity(n, n) + (skew - skew.transpose());
}

TEST(BetaClosedForm, SingleLinkAttainsQuarterK) {
  const CostMatrix cost = assemble_matrix(std::vector<LinkCostParams>{{0.0, 1.0, 2.0}});
  const BetaValue b = beta_closed_form(cost, flow({1.0, 0.0}));
  EXPECT_NEAR(b.value, 0.5, 1e-15);
  EXPECT_NEAR(b.proof_ratio, 0.5, 1e-15);
}

TEST(BetaClosedForm, Example2WorstEquilibriumGivesQuarterK) {
  for (const double k : {1.0, 2.0, 3.0}) {
    const Instance ex = example2(k);
    const BetaValue b = beta_closed_form(ex.cost, flow({1.0, 0.0, 0.0, 1.0}));
    EXPECT_NEAR(b.value, k / 4.0, 1e-12);
  }
}

TEST(BetaClosedForm, ZeroReferenceFlowGivesZero) {
  const Instance ex = example2(2.0);
  const BetaValue b = beta_closed_form(ex.cost, FlowVector(2));
  EXPECT_EQ(b.value, 0.0);
  EXPECT_FALSE(b.unbounded);
}

TEST(BetaClosedForm, RejectsUnsupportedShapes) {
  EXPECT_THROW_CODE(beta_closed_form(mu_coupled(0.2).cost, FlowVector(2)),
                    ErrorCode::kNotPairwiseSeparable);
  Matrix unequal(2, 2);
  unequal << 2.0, 1.0, 2.0, 0.5;
  EXPECT_THROW_CODE(beta_closed_form(CostMatrix(unequal, Vector::Zero(2)), flow({1.0, 1.0})),
                    ErrorCode::kUnequalBlockRows);
  EXPECT_THROW_CODE(beta_closed_form(example1(2.0).cost, flow({0.0, 0.0, 0.25, 0.5})),
                    ErrorCode::kDegenerateBlock);
  Matrix a(2, 2);
  a << 1.0, 0.0, 1.0, 0.0;
  EXPECT_THROW_CODE(beta_closed_form(CostMatrix(a, Vector::Zero(2)), flow({1.0, 1.0})),
                    ErrorCode::kDegenerateBlock);
  EXPECT_THROW_CODE(beta_closed_form(example2(2.0).cost, flow({1.0, 1.0})),
                    ErrorCode::kDimensionMismatch);
}

TEST(BetaGridOracle, FootnoteMatchesClosedForm) {
  const Instance f = pigou_footnote();
  const FlowVector v = flow({1.0, 1.0});
  const BetaValue exact = beta_closed_form(f.cost, v);
  const BetaValue grid = beta_grid_oracle(f.cost, v, 400);
  ASSERT_FALSE(grid.unbounded);
  EXPECT_LE(grid.numerator, exact.numerator + 1e-9);
  EXPECT_GE(grid.numerator, exact.numerator - grid.error_bar - 1e-9);
}

TEST(BetaGridOracle, ZeroCoefficientWithPositivePriceIsUnbounded) {
  const Instance ex = example1(2.0);
  const BetaValue b = beta_grid_oracle(ex.cost, flow({0.0, 0.0, 0.25, 0.5}));
  EXPECT_TRUE(b.unbounded);
  EXPECT_EQ(poa_bound_from_beta(b.value), kUnbounded);
}

TEST(BetaProperties, NeverExceedsQuarterAsymmetry) {
  auto rng = rng_for(71);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = uniform_int(rng, 1, 4);
    const auto links = random_links(rng, n);
    const CostMatrix cost = assemble_matrix(links);
    const double k = degree_of_asymmetry(cost);
    const BetaValue b = beta_closed_form(cost, random_nonnegative(rng, static_cast<std::size_t>(n), 3.0));
    EXPECT_LE(b.value, b.proof_ratio + 1e-12);
    EXPECT_LE(b.proof_ratio, k / 4.0 + 1e-9);
  }
}

TEST(BetaProperties, OracleAgreesWithClosedForm) {
  auto rng = rng_for(72);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = uniform_int(rng, 1, 3);
    const CostMatrix cost = assemble_matrix(random_links(rng, n));
    const FlowVector v = random_nonnegative(rng, static_cast<std::size_t>(n), 2.0);
    const BetaValue exact = beta_closed_form(cost, v);
    const BetaValue grid = beta_grid_oracle(cost, v, 300);
    EXPECT_LE(grid.numerator, exact.numerator * (1 + 1e-9) + 1e-12);
    EXPECT_GE(grid.numerator, exact.numerator - grid.error_bar - 1e-9);
  }
}

TEST(BoundsFromBeta, Formulas) {
  EXPECT_DOUBLE_EQ(poa_bound_from_beta(0.0), 1.0);
  EXPECT_DOUBLE_EQ(poa_bound_from_beta(0.5), 2.0);
  EXPECT_EQ(poa_bound_from_beta(1.0), kUnbounded);
  EXPECT_DOUBLE_EQ(bicriteria_bound_from_beta(0.25), 1.25);
}

TEST(BoundsPairwise, DependOnlyOnAsymmetry) {
  const BoundReport k1 = bounds_pairwise(example2(1.0).cost);
  EXPECT_NEAR(k1.poa_bound, 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(k1.bicriteria_bound, 1.25, 1e-15);
  const BoundReport k2 = bounds_pairwise(example2(2.0).cost);
  EXPECT_NEAR(k2.poa_bound, 2.0, 1e-15);
  EXPECT_NEAR(k2.bicriteria_bound, 1.5, 1e-15);
  const BoundReport k4 = bounds_pairwise(example3(4.0).cost);
  EXPECT_EQ(k4.poa_bound, kUnbounded);
  EXPECT_NEAR(k4.bicriteria_bound, 2.0, 1e-15);
  EXPECT_EQ(k4.kind, BoundKind::kPairwise);
  EXPECT_THROW_CODE(bounds_pairwise(mu_coupled(0.2).cost), ErrorCode::kNotPairwiseSeparable);
}

TEST(ValidateSplit, AcceptsFootnoteSplit) {
  Matrix a(2, 2), q(2, 2), p(2, 2);
  a << 3, 1, 3, 1;
  q << 2, 1, 2, 0.5;
  p << 1, 0, 1, 0.5;
  const MatrixSplit s = validate_split(a, q, p);
  EXPECT_NEAR(s.k_q, 4.0, 1e-12);
  EXPECT_NEAR(s.eta_squared, eta_squared_oracle(p), 1e-9);
}

TEST(ValidateSplit, FailureModesInOrder) {
  const Matrix a = mu_coupled(0.2).cost.coefficients();
  const MatrixSplit good = default_split(a);
  EXPECT_THROW_CODE(validate_split(a, good.q, good.p + 1e-6 * Matrix::Ones(4, 4)),
                    ErrorCode::kSplitMismatch);

  Matrix q_off = good.q, p_off = good.p;
  q_off(0, 2) += 0.1;
  p_off(0, 2) -= 0.1;
  EXPECT_THROW_CODE(validate_split(a, q_off, p_off), ErrorCode::kQNotBlockDiagonal);

  Matrix q_zero = good.q, p_zero = good.p;
  p_zero(0, 1) += q_zero(0, 1);
  q_zero(0, 1) = 0.0;
  EXPECT_THROW_CODE(validate_split(a, q_zero, p_zero), ErrorCode::kQNonPositiveBlock);

  const Matrix block = example2(2.0).cost.coefficients();
  EXPECT_THROW_CODE(validate_split(block, block, Matrix::Zero(4, 4)),
                    ErrorCode::kPNotPositiveDefinite);
  EXPECT_THROW_CODE(validate_split(a, good.q, Matrix::Zero(2, 2)), ErrorCode::kDimensionMismatch);
}

TEST(DefaultSplit, ReassemblesTheMatrix) {
  const Matrix a = mu_coupled(0.2).cost.coefficients();
  const MatrixSplit s = default_split(a);
  EXPECT_LE((s.q + s.p - a).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_GE(s.eta_squared, 1.0);
}

TEST(EtaSquared, SymmetricMatricesGiveOne) {
  EXPECT_NEAR(eta_squared(3.5 * Matrix::Identity(4, 4)), 1.0, 1e-12);
  Matrix spd(3, 3);
  spd << 4, 1, 0, 1, 3, 1, 0, 1, 2;
  EXPECT_NEAR(eta_squared(spd), 1.0, 1e-10);
}

TEST(EtaSquared, MatchesGeneralizedEigenOracle) {
  Matrix p(2, 2);
  p << 1, 1, 0, 1;
  EXPECT_NEAR(eta_squared(p), eta_squared_oracle(p), 1e-6);
  EXPECT_NEAR(eta_squared(p), 4.0 / 3.0, 1e-9);
  EXPECT_THROW_CODE(eta_squared(-Matrix::Identity(2, 2)), ErrorCode::kPNotPositiveDefinite);
}

TEST(EtaSquared, AtLeastOneAndScaleInvariant) {
  auto rng = rng_for(73);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index n = 2 * uniform_int(rng, 1, 3);
    const Matrix p = random_positive_definite_part(rng, n);
    const double e = eta_squared(p);
    EXPECT_GE(e, 1.0 - 1e-9);
    if (trial % 10 == 0) {
      EXPECT_NEAR(e, eta_squared_oracle(p), 1e-6 * e);
      EXPECT_NEAR(eta_squared(uniform(rng, 0.01, 100.0) * p), e, 1e-9 * e);
    }
  }
}

TEST(BoundsNonseparable, Formulas) {
  MatrixSplit s;
  s.q = (Matrix(2, 2) << 1, 1, 1, 1).finished();
  s.p = Matrix::Identity(2, 2);
  s.k_q = 1.0;
  s.eta_squared = 1.0;
  const BoundReport r = bounds_nonseparable(s);
  EXPECT_EQ(r.kind, BoundKind::kSplit);
  EXPECT_NEAR(r.poa_bound, 4.0 / 3.0 + 1.0, 1e-15);
  EXPECT_NEAR(r.bicriteria_bound, 2.25, 1e-15);
  s.k_q = 4.0;
  EXPECT_EQ(bounds_nonseparable(s).poa_bound, kUnbounded);
  EXPECT_NEAR(bounds_nonseparable(s).bicriteria_bound, 3.0, 1e-15);
}

TEST(Dominance, Examples) {
  Matrix a = Matrix::Constant(4, 4, 0.1);
  a.diagonal().setConstant(10.0);
  EXPECT_TRUE(dominance_sufficient_conditions(a).holds);
  EXPECT_TRUE(dominance_sufficient_conditions(pigou_footnote().cost.coefficients()).holds);
  const DominanceReport strong = dominance_sufficient_conditions(mu_coupled(10.0).cost.coefficients());
  EXPECT_FALSE(strong.holds);
  EXPECT_EQ(strong.rows.size(), 4u);
  EXPECT_FALSE(strong.rows.front().holds);
}

}  // namespace
}  // namespace mixroute
