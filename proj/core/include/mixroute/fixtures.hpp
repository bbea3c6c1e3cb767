#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mixroute/instance.hpp"

namespace mixroute {

/// Two parallel links: constant delay 1, and zeta * x (smart traffic adds no
/// delay). Demands (1/(2 zeta), 1/2).
Instance example1(double zeta);

/// Two parallel links c1 = k x + y, c2 = x + k y; demands (1, 1).
Instance example2(double k);

/// Two parallel links: constant delay 1, and sqrt(k) x + y / sqrt(k).
/// Demands ((2 sqrt(k) - 1) / (2k), 1/2).
Instance example3(double k);

/// One link with c = [[3,1],[3,1]] z, demands (1, 1).
Instance pigou_footnote();

/// Two parallel links whose second link's congestion spills onto the first
/// with weight mu; per-link coefficients a and k. Demands (1, 1). Carries the
/// default diagonal-dominance split.
Instance mu_coupled(double mu, double k = 2.0, double a = 1.0);

/// Names accepted by make_fixture.
const std::vector<std::string>& fixture_names();

/// The parameter name for a fixture ("zeta", "k", "mu"), or empty.
std::string fixture_parameter_name(const std::string& name);

/// Builds a fixture by name; `param` defaults per fixture. Throws kUnknownFixture.
Instance make_fixture(const std::string& name, std::optional<double> param = std::nullopt);

}  // namespace mixroute
