#include "mixroute/fixtures.hpp"

#include <algorithm>
#include <cmath>

#include "mixroute/bounds.hpp"
#include "mixroute/errors.hpp"

namespace mixroute {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorCode::kValidationError, std::string(name) + " must be positive and finite");
  }
}

CostMatrix two_link_matrix(const Matrix& a, double b1, double b2) {
  Vector offset(4);
  offset << b1, b1, b2, b2;
  return CostMatrix(a, offset);
}

}  // namespace

Instance example1(double zeta) {
  require_positive(zeta, "zeta");
  Instance out;
  out.name = "example1";
  out.parameters["zeta"] = zeta;
  out.network = parallel_network(2, 1.0 / (2.0 * zeta), 0.5);
  Matrix a = Matrix::Zero(4, 4);
  a(2, 2) = zeta;
  a(3, 2) = zeta;
  out.cost = two_link_matrix(a, 1.0, 0.0);

  // Equilibrium: everyone on link 2 (delay 1/2 < 1).
  const double c_eq = 1.0 / (4.0 * zeta) + 0.25;
  // Optimum: smart traffic rides link 2 for free; for zeta < 2 some regular
  // traffic joins it, x2 = (2 - zeta) / (4 zeta).
  const double shift = std::max(0.0, (2.0 - zeta) / (4.0 * zeta));
  const double c_opt = 1.0 / (2.0 * zeta) - zeta * shift * shift;
  // Scaled optimum is p/(2 zeta) while zeta p >= 2, else
  // p/(2 zeta) - (2 - zeta p)^2 / (16 zeta).
  double p = 2.0 * zeta * c_eq;
  if (zeta * p < 2.0) {
    const double lin = 4.0 * zeta + 8.0;
    const double disc = lin * lin - 4.0 * zeta * zeta * (4.0 + 16.0 * zeta * c_eq);
    p = (lin - std::sqrt(disc)) / (2.0 * zeta * zeta);
  }
  out.expected = {c_eq, c_opt, c_eq / c_opt, p};
  return out;
}

Instance example2(double k) {
  require_positive(k, "k");
  Instance out;
  out.name = "example2";
  out.parameters["k"] = k;
  out.network = parallel_network(2, 1.0, 1.0);
  out.link_costs = std::vector<LinkCostParams>{
      {0.0, 1.0, k, Orientation::kRegularHeavy},
      {0.0, 1.0, k, Orientation::kSmartHeavy},
  };
  out.cost = assemble_matrix(*out.link_costs);
  // Worst equilibrium puts each class on the link it congests most; the
  // scaled optimum is 2 p^2.
  out.expected = {2.0 * k, 2.0, k, std::sqrt(k)};
  return out;
}

Instance example3(double k) {
  require_positive(k, "k");
  const double root = std::sqrt(k);
  if (2.0 * root - 1.0 < 0.0) {
    throw Error(ErrorCode::kValidationError, "k must be at least 1/4");
  }
  Instance out;
  out.name = "example3";
  out.parameters["k"] = k;
  const double regular = (2.0 * root - 1.0) / (2.0 * k);
  out.network = parallel_network(2, regular, 0.5);
  Matrix a = Matrix::Zero(4, 4);
  a.block(2, 2, 2, 2) << root, 1.0 / root, root, 1.0 / root;
  out.cost = two_link_matrix(a, 1.0, 0.0);

  const double c_eq = (k + 2.0 * root - 1.0) / (2.0 * k);
  const double c_opt = (5.0 * root - 2.0) / (4.0 * k);
  // Scaled optimum: either smart traffic stays on link 2 and regular traffic
  // splits, or (small k) regular traffic leaves link 2 and smart traffic
  // splits with sqrt(k)/2 on it. The bicriteria is the larger root.
  double p = std::sqrt((2.0 * (k - 3.0) * root + 1.0) / k + 8.0) + 1.0 / root - 2.0;
  const double p_smart_split = (c_eq + root / 4.0) / (regular + 0.5);
  if (p_smart_split >= root) p = std::max(p, p_smart_split);
  out.expected = {c_eq, c_opt, c_eq / c_opt, p};
  return out;
}

Instance pigou_footnote() {
  Instance out;
  out.name = "pigou-footnote";
  out.network = parallel_network(1, 1.0, 1.0);
  Matrix a(2, 2);
  a << 3.0, 1.0, 3.0, 1.0;
  out.cost = CostMatrix(a, Vector::Zero(2));
  out.expected = {8.0, 8.0, 1.0, 1.0};
  return out;
}

Instance mu_coupled(double mu, double k, double a) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw Error(ErrorCode::kValidationError, "mu must be nonnegative and finite");
  }
  require_positive(k, "k");
  require_positive(a, "a");
  Instance out;
  out.name = "mu-coupled";
  out.parameters["mu"] = mu;
  out.parameters["k"] = k;
  out.parameters["a"] = a;
  out.network = parallel_network(2, 1.0, 1.0);
  Matrix m(4, 4);
  m << k * a, a, mu * k * a, mu * a,  //
      k * a, a, mu * k * a, mu * a,   //
      0.0, 0.0, k * a, a,             //
      0.0, 0.0, k * a, a;
  out.cost = two_link_matrix(m, 0.0, 0.0);
  if (dominance_sufficient_conditions(m).holds) {
    try {
      const MatrixSplit split = default_split(m);
      out.split = AuthoredSplit{split.q, split.p};
    } catch (const Error&) {
      // margin too large for this mu; the instance carries no split
    }
  }
  return out;
}

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {"example1", "example2", "example3",
                                                 "pigou-footnote", "mu-coupled"};
  return names;
}

std::string fixture_parameter_name(const std::string& name) {
  if (name == "example1") return "zeta";
  if (name == "example2" || name == "example3") return "k";
  if (name == "mu-coupled") return "mu";
  return "";
}

Instance make_fixture(const std::string& name, std::optional<double> param) {
  if (name == "example1") return example1(param.value_or(2.0));
  if (name == "example2") return example2(param.value_or(2.0));
  if (name == "example3") return example3(param.value_or(4.0));
  if (name == "pigou-footnote") return pigou_footnote();
  if (name == "mu-coupled") return mu_coupled(param.value_or(0.2));
  throw Error(ErrorCode::kUnknownFixture, "unknown fixture '" + name + "'");
}

}  // namespace mixroute
