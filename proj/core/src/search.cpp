#include "mixroute/detail/search.hpp"

#include <algorithm>
#include <cmath>

#include "mixroute/detail/polytope_qp.hpp"

namespace mixroute::detail {

bool lexicographically_less(const Vector& a, const Vector& b, double tol) {
  for (Eigen::Index i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a(i) < b(i) - tol) return true;
    if (a(i) > b(i) + tol) return false;
  }
  return a.size() < b.size();
}

namespace {

QuadraticObjective make_objective(const SearchObjective& obj, const Matrix& op,
                                  const Vector& offset) {
  const Eigen::Index d = op.rows();
  switch (obj.kind) {
    case SearchObjective::Kind::kMaxSocialCost:
      return {-(op + op.transpose()), -offset, 0.0};
    case SearchObjective::Kind::kMinSocialCost:
      return {op + op.transpose(), offset, 0.0};
    case SearchObjective::Kind::kNearest:
      return {2.0 * Matrix::Identity(d, d), -2.0 * obj.target, obj.target.squaredNorm()};
  }
  return {};
}

Polytope pattern_polytope(const PathSpace& space, const Matrix& op, const Vector& offset,
                          const std::vector<unsigned>& masks) {
  const Eigen::Index d = space.dimension();
  std::vector<Eigen::RowVectorXd> eq_rows, ineq_rows;
  std::vector<double> eq_rhs, ineq_rhs;

  Matrix demand;
  Vector demand_rhs;
  space.demand_rows(demand, demand_rhs);
  for (Eigen::Index r = 0; r < demand.rows(); ++r) {
    eq_rows.push_back(demand.row(r));
    eq_rhs.push_back(demand_rhs(r));
  }

  const auto& groups = space.groups();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const DemandGroup& grp = groups[g];
    const unsigned mask = masks[g];
    Eigen::Index ref = -1;
    for (Eigen::Index j = 0; j < grp.size(); ++j) {
      if (mask >> j & 1u) {
        ref = grp.begin + j;
        break;
      }
    }
    for (Eigen::Index j = 0; j < grp.size(); ++j) {
      const Eigen::Index v = grp.begin + j;
      const bool used = mask >> j & 1u;
      if (used) {
        Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(d);
        e(v) = 1.0;
        ineq_rows.push_back(e);
        ineq_rhs.push_back(0.0);
        if (v != ref) {
          // equal delay on every used path
          eq_rows.push_back(op.row(v) - op.row(ref));
          eq_rhs.push_back(offset(ref) - offset(v));
        }
      } else {
        Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(d);
        e(v) = 1.0;
        eq_rows.push_back(e);
        eq_rhs.push_back(0.0);
        if (ref >= 0) {
          // no unused path is cheaper
          ineq_rows.push_back(op.row(v) - op.row(ref));
          ineq_rhs.push_back(offset(ref) - offset(v));
        }
      }
    }
  }

  Polytope out;
  out.eq.resize(static_cast<Eigen::Index>(eq_rows.size()), d);
  out.eq_rhs.resize(static_cast<Eigen::Index>(eq_rows.size()));
  for (std::size_t r = 0; r < eq_rows.size(); ++r) {
    out.eq.row(static_cast<Eigen::Index>(r)) = eq_rows[r];
    out.eq_rhs(static_cast<Eigen::Index>(r)) = eq_rhs[r];
  }
  out.ineq.resize(static_cast<Eigen::Index>(ineq_rows.size()), d);
  out.ineq_rhs.resize(static_cast<Eigen::Index>(ineq_rows.size()));
  for (std::size_t r = 0; r < ineq_rows.size(); ++r) {
    out.ineq.row(static_cast<Eigen::Index>(r)) = ineq_rows[r];
    out.ineq_rhs(static_cast<Eigen::Index>(r)) = ineq_rhs[r];
  }
  return out;
}

}  // namespace

SearchResult search_equilibria(const PathSpace& space, const Matrix& op, const Vector& offset,
                               const SearchObjective& objective, const SolverOptions& opts) {
  SearchResult out;
  const QuadraticObjective quad = make_objective(objective, op, offset);
  const auto& groups = space.groups();
  if (space.max_group_size() > std::min<std::size_t>(opts.max_support_paths, 24)) {
    out.exhaustive = false;
    return out;
  }

  // Odometer over the support masks; zero-demand groups stay empty.
  std::vector<unsigned> masks(groups.size(), 0u);
  std::vector<unsigned> limits(groups.size(), 0u);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].demand > 0.0) {
      masks[g] = 1u;
      limits[g] = (1u << groups[g].size()) - 1u;
    }
  }

  std::size_t budget_left = opts.support_budget;
  std::vector<SearchPoint> points;
  while (true) {
    ++out.patterns_explored;
    const Polytope poly = pattern_polytope(space, op, offset, masks);
    KktEnumeration kkt = enumerate_kkt_points(quad, poly, budget_left, 1e-9);
    budget_left -= std::min(budget_left, kkt.subsets_examined);
    if (kkt.budget_exhausted) {
      out.exhaustive = false;
      break;
    }
    for (auto& p : kkt.points) {
      const bool seen = std::any_of(points.begin(), points.end(), [&p](const SearchPoint& q) {
        return (q.h - p.x).lpNorm<Eigen::Infinity>() <= 1e-9;
      });
      if (seen) continue;
      const Vector costs = op * p.x + offset;
      points.push_back(SearchPoint{p.x, costs.dot(p.x), p.value});
    }

    std::size_t g = 0;
    for (; g < groups.size(); ++g) {
      if (limits[g] == 0u) continue;
      if (masks[g] < limits[g]) {
        ++masks[g];
        break;
      }
      masks[g] = 1u;
    }
    if (g == groups.size()) break;
  }

  const double scale = std::max(1.0, points.empty() ? 1.0 : std::abs(points.front().score));
  std::sort(points.begin(), points.end(), [&space, scale](const SearchPoint& a,
                                                          const SearchPoint& b) {
    if (std::abs(a.score - b.score) > 1e-10 * scale) return a.score < b.score;
    return lexicographically_less(space.to_link(a.h).values(), space.to_link(b.h).values());
  });
  out.points = std::move(points);
  return out;
}

}  // namespace mixroute::detail
