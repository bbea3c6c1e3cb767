#include "mixroute/detail/path_space.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace mixroute::detail {

Vector project_to_simplex(const Vector& v, double mass) {
  const Eigen::Index n = v.size();
  if (n == 0) return v;
  if (mass <= 0.0) return Vector::Zero(n);
  std::vector<double> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cumulative += sorted[static_cast<std::size_t>(i)];
    const double t = (cumulative - mass) / static_cast<double>(i + 1);
    if (sorted[static_cast<std::size_t>(i)] - t > 0.0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0);
}

PathSpace::PathSpace(const Network& network, std::size_t max_paths) {
  const auto& ods = network.od_pairs();
  paths_.resize(ods.size());
  Eigen::Index total = 0;
  for (std::size_t j = 0; j < ods.size(); ++j) {
    PathSet ps = enumerate_paths(network, j, max_paths);
    truncated_ = truncated_ || ps.truncated;
    paths_[j] = std::move(ps.paths);
    for (VehicleClass cls : kVehicleClasses) {
      const auto size = static_cast<Eigen::Index>(paths_[j].size());
      groups_.push_back(DemandGroup{j, cls, ods[j].demand(cls), total, total + size});
      total += size;
    }
  }
  incidence_ = Matrix::Zero(static_cast<Eigen::Index>(network.flow_dimension()), total);
  var_group_.resize(static_cast<std::size_t>(total));
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const DemandGroup& grp = groups_[g];
    const auto& paths = paths_[grp.od_index];
    for (Eigen::Index v = grp.begin; v < grp.end; ++v) {
      var_group_[static_cast<std::size_t>(v)] = g;
      for (int id : paths[static_cast<std::size_t>(v - grp.begin)].links) {
        incidence_(2 * (id - 1) + static_cast<int>(grp.cls), v) = 1.0;
      }
    }
  }
}

const DemandGroup& PathSpace::group_of(Eigen::Index var) const {
  return groups_[var_group_.at(static_cast<std::size_t>(var))];
}

const Path& PathSpace::path_of(Eigen::Index var) const {
  const DemandGroup& g = group_of(var);
  return paths_[g.od_index][static_cast<std::size_t>(var - g.begin)];
}

std::size_t PathSpace::max_group_size() const {
  std::size_t out = 0;
  for (const auto& g : groups_) out = std::max(out, static_cast<std::size_t>(g.size()));
  return out;
}

Matrix PathSpace::path_operator(const CostMatrix& cost) const {
  return incidence_.transpose() * cost.coefficients() * incidence_;
}

Vector PathSpace::path_offset(const CostMatrix& cost) const {
  return incidence_.transpose() * cost.offset();
}

Vector PathSpace::project(const Vector& h) const {
  Vector out(h.size());
  for (const auto& g : groups_) {
    out.segment(g.begin, g.size()) = project_to_simplex(h.segment(g.begin, g.size()), g.demand);
  }
  return out;
}

Vector PathSpace::uniform() const {
  Vector out(dimension());
  for (const auto& g : groups_) {
    out.segment(g.begin, g.size()).setConstant(g.demand / static_cast<double>(g.size()));
  }
  return out;
}

double PathSpace::residual(const Vector& path_costs, const Vector& h) const {
  double out = path_costs.dot(h);
  for (const auto& g : groups_) {
    if (g.demand <= 0.0) continue;
    out -= g.demand * path_costs.segment(g.begin, g.size()).minCoeff();
  }
  return std::max(out, 0.0);
}

Vector PathSpace::best_response(const Vector& path_costs) const {
  Vector out = Vector::Zero(dimension());
  for (const auto& g : groups_) {
    Eigen::Index arg = 0;
    path_costs.segment(g.begin, g.size()).minCoeff(&arg);
    out(g.begin + arg) = g.demand;
  }
  return out;
}

void PathSpace::demand_rows(Matrix& eq, Vector& rhs) const {
  eq = Matrix::Zero(static_cast<Eigen::Index>(groups_.size()), dimension());
  rhs.resize(static_cast<Eigen::Index>(groups_.size()));
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const auto r = static_cast<Eigen::Index>(g);
    eq.row(r).segment(groups_[g].begin, groups_[g].size()).setOnes();
    rhs(r) = groups_[g].demand;
  }
}

std::vector<PathFlow> PathSpace::describe(const Vector& h, const Vector& path_costs) const {
  std::vector<PathFlow> out;
  out.reserve(static_cast<std::size_t>(dimension()));
  for (Eigen::Index v = 0; v < dimension(); ++v) {
    const DemandGroup& g = group_of(v);
    out.push_back(PathFlow{g.od_index, g.cls, path_of(v), h(v), path_costs(v)});
  }
  return out;
}

}  // namespace mixroute::detail
