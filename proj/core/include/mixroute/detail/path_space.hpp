#pragma once

#include <cstddef>
#include <vector>

#include "mixroute/cost.hpp"
#include "mixroute/linalg.hpp"
#include "mixroute/network.hpp"

namespace mixroute::detail {

/// One simplex factor of the path-flow polytope: the paths of one OD pair
/// for one vehicle class, occupying variables [begin, end).
struct DemandGroup {
  std::size_t od_index = 0;
  VehicleClass cls = VehicleClass::kRegular;
  double demand = 0.0;
  Eigen::Index begin = 0;
  Eigen::Index end = 0;

  Eigen::Index size() const { return end - begin; }
};

/// Path-flow coordinates h for a network. Variables are ordered by
/// (OD pair, class, path) with paths in enumeration order; link flows are
/// z = incidence * h.
class PathSpace {
 public:
  PathSpace(const Network& network, std::size_t max_paths);

  Eigen::Index dimension() const { return incidence_.cols(); }
  const std::vector<DemandGroup>& groups() const { return groups_; }
  const std::vector<Path>& paths_of(std::size_t od_index) const { return paths_[od_index]; }
  const Path& path_of(Eigen::Index var) const;
  const DemandGroup& group_of(Eigen::Index var) const;
  std::size_t max_group_size() const;
  bool truncated() const { return truncated_; }
  const Matrix& incidence() const { return incidence_; }

  FlowVector to_link(const Vector& h) const { return FlowVector(Vector(incidence_ * h)); }

  /// Delta^T A Delta and Delta^T b: path costs are F h + f.
  Matrix path_operator(const CostMatrix& cost) const;
  Vector path_offset(const CostMatrix& cost) const;

  /// Euclidean projection onto the product of demand-scaled simplices.
  Vector project(const Vector& h) const;
  Vector uniform() const;

  /// <F h + f, h> - sum_g demand_g * min_{j in g} (F h + f)_j.
  double residual(const Vector& path_costs, const Vector& h) const;

  /// All-or-nothing assignment onto the cheapest path of each group
  /// (lowest index on ties).
  Vector best_response(const Vector& path_costs) const;

  /// Demand rows (one per group) as an equality system.
  void demand_rows(Matrix& eq, Vector& rhs) const;

  std::vector<PathFlow> describe(const Vector& h, const Vector& path_costs) const;

 private:
  std::vector<std::vector<Path>> paths_;
  std::vector<DemandGroup> groups_;
  std::vector<std::size_t> var_group_;
  Matrix incidence_;
  bool truncated_ = false;
};

/// Projection of `v` onto { w >= 0, sum w = mass }.
Vector project_to_simplex(const Vector& v, double mass);

}  // namespace mixroute::detail
