#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mixroute/cost.hpp"
#include "mixroute/network.hpp"

namespace mixroute {

/// Closed-form values an instance is known to produce.
struct ExpectedValues {
  std::optional<double> c_eq;  // worst equilibrium cost
  std::optional<double> c_opt;
  std::optional<double> poa;
  std::optional<double> bicriteria;
};

struct AuthoredSplit {
  Matrix q;
  Matrix p;
};

struct Instance {
  std::string name;
  Network network;
  CostMatrix cost;
  /// Present when the cost was given per link rather than as a matrix.
  std::optional<std::vector<LinkCostParams>> link_costs;
  std::optional<AuthoredSplit> split;
  ExpectedValues expected;
  std::map<std::string, double> parameters;
};

}  // namespace mixroute
