#include "mixroute/optimum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mixroute/detail/path_space.hpp"
#include "mixroute/detail/polytope_qp.hpp"
#include "mixroute/detail/search.hpp"
#include "mixroute/errors.hpp"

namespace mixroute {

const char* to_string(Certificate c) {
  switch (c) {
    case Certificate::kExhaustiveFaces: return "exhaustive-faces";
    case Certificate::kExhaustiveGrid: return "exhaustive-grid";
    case Certificate::kMultistartLocal: return "multistart-local";
  }
  return "unknown";
}

namespace {

using detail::PathSpace;

struct Problem {
  PathSpace space;
  detail::QuadraticObjective objective;  // C(h) = 1/2 h'Hh + f'h
  Matrix op;
  Vector offset;

  Problem(const Network& network, const CostMatrix& cost, std::size_t max_paths)
      : space(network, max_paths) {
    op = space.path_operator(cost);
    offset = space.path_offset(cost);
    objective = {op + op.transpose(), offset, 0.0};
  }
};

// Projected gradient descent with Armijo backtracking.
Vector local_descent(const Problem& pb, Vector h, int max_iterations = 5000) {
  double value = pb.objective.value(h);
  for (int it = 0; it < max_iterations; ++it) {
    const Vector grad = pb.objective.gradient(h);
    double t = 1.0 / std::max(1e-12, pb.objective.hessian.norm());
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt) {
      const Vector trial = pb.space.project(h - t * grad);
      const double v = pb.objective.value(trial);
      if (v <= value + 1e-4 * grad.dot(trial - h)) {
        moved = (trial - h).lpNorm<Eigen::Infinity>() > 1e-15;
        h = trial;
        value = v;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
  }
  return h;
}

// All nonnegative integer vectors of length `parts` summing to `total`.
void compositions(int total, Eigen::Index parts, std::vector<Vector>& out) {
  Vector cur = Vector::Zero(parts);
  auto rec = [&](auto&& self, Eigen::Index i, int left) -> void {
    if (i == parts - 1) {
      cur(i) = left;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur(i) = v;
      self(self, i + 1, left - v);
    }
  };
  rec(rec, 0, total);
}

OptimumResult package(const Problem& pb, const CostMatrix& cost, const Vector& h,
                      Certificate cert, double gap) {
  OptimumResult out;
  out.flow = pb.space.to_link(h);
  out.cost = social_cost(cost, out.flow);
  out.certificate = cert;
  out.gap_estimate = gap;
  out.path_flows = pb.space.describe(h, pb.op * h + pb.offset);
  return out;
}

OptimumResult by_faces(const Problem& pb, const CostMatrix& cost, const SolverOptions& opts) {
  detail::Polytope poly;
  pb.space.demand_rows(poly.eq, poly.eq_rhs);
  const Eigen::Index d = pb.space.dimension();
  poly.ineq = Matrix::Identity(d, d);
  poly.ineq_rhs = Vector::Zero(d);
  const auto kkt = detail::enumerate_kkt_points(pb.objective, poly, opts.face_budget);
  if (kkt.budget_exhausted || kkt.points.empty()) {
    throw Error(ErrorCode::kSupportBudgetExceeded,
                "face enumeration exceeds the budget of " + std::to_string(opts.face_budget));
  }
  const detail::KktPoint* best = &kkt.points.front();
  const double scale = std::max(1.0, std::abs(best->value));
  for (const auto& p : kkt.points) {
    if (p.value < best->value - 1e-12 * scale) {
      best = &p;
    } else if (std::abs(p.value - best->value) <= 1e-12 * scale &&
               detail::lexicographically_less(pb.space.to_link(p.x).values(),
                                              pb.space.to_link(best->x).values())) {
      best = &p;
    }
  }
  return package(pb, cost, best->x, Certificate::kExhaustiveFaces, 0.0);
}

OptimumResult by_grid(const Problem& pb, const CostMatrix& cost, const SolverOptions& opts) {
  const int steps = std::max(1, opts.grid_steps);
  const auto& groups = pb.space.groups();
  std::vector<std::vector<Vector>> choices(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    compositions(steps, groups[g].size(), choices[g]);
    for (Vector& c : choices[g]) c *= groups[g].demand / steps;
  }

  std::vector<std::size_t> idx(groups.size(), 0);
  Vector h(pb.space.dimension());
  Vector best_h;
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    for (std::size_t g = 0; g < groups.size(); ++g)
      h.segment(groups[g].begin, groups[g].size()) = choices[g][idx[g]];
    const double v = pb.objective.value(h);
    if (v < best) {
      best = v;
      best_h = h;
    }
    std::size_t g = 0;
    for (; g < groups.size(); ++g) {
      if (++idx[g] < choices[g].size()) break;
      idx[g] = 0;
    }
    if (g == groups.size()) break;
  }

  const Vector refined = local_descent(pb, best_h);
  const double refined_value = pb.objective.value(refined);

  // Every feasible point has a grid neighbour within `delta` (2-norm); bound
  // how much lower C can be there than at the best grid point.
  double max_demand = 0.0, demand_norm2 = 0.0;
  for (const auto& g : groups) {
    max_demand = std::max(max_demand, g.demand);
    demand_norm2 += g.demand * g.demand;
  }
  const double delta =
      std::sqrt(static_cast<double>(pb.space.dimension())) * max_demand / steps;
  const double hess = pb.objective.hessian.operatorNorm();
  const double grad_bound = hess * std::sqrt(demand_norm2) + pb.objective.linear.norm();
  const double lower = best - (grad_bound * delta + 0.5 * hess * delta * delta);
  const double gap = std::max(0.0, refined_value - lower);
  return package(pb, cost, refined, Certificate::kExhaustiveGrid, gap);
}

OptimumResult by_multistart(const Problem& pb, const CostMatrix& cost,
                            const SolverOptions& opts) {
  std::mt19937_64 rng(opts.random_seed);
  std::exponential_distribution<double> expo(1.0);
  Vector best_h;
  double best = std::numeric_limits<double>::infinity();
  const int starts = std::max(1, opts.multistart_count);
  for (int s = 0; s < starts; ++s) {
    Vector h = pb.space.uniform();
    if (s > 0) {
      // uniform draw from each simplex (normalized exponentials)
      for (const auto& g : pb.space.groups()) {
        Vector e(g.size());
        for (Eigen::Index j = 0; j < g.size(); ++j) e(j) = expo(rng);
        h.segment(g.begin, g.size()) = e * (g.demand / e.sum());
      }
    }
    h = local_descent(pb, h);
    const double v = pb.objective.value(h);
    const double slack = 1e-12 * std::max(1.0, std::abs(best));
    if (best_h.size() == 0 || v < best - slack ||
        (std::abs(v - best) <= slack &&
         detail::lexicographically_less(pb.space.to_link(h).values(),
                                        pb.space.to_link(best_h).values()))) {
      best = v;
      best_h = h;
    }
  }
  return package(pb, cost, best_h, Certificate::kMultistartLocal,
                 std::numeric_limits<double>::infinity());
}

}  // namespace

OptimumResult social_optimum(const Network& network, const CostMatrix& cost,
                             const SolverOptions& opts, OptimumMethod method) {
  if (cost.link_count() != network.link_count()) {
    throw Error(ErrorCode::kDimensionMismatch, "cost and network link counts differ");
  }
  const Problem pb(network, cost, opts.max_paths);
  switch (method) {
    case OptimumMethod::kFaces: return by_faces(pb, cost, opts);
    case OptimumMethod::kGrid: return by_grid(pb, cost, opts);
    case OptimumMethod::kMultistart: return by_multistart(pb, cost, opts);
    case OptimumMethod::kAuto: break;
  }
  const Eigen::Index d = pb.space.dimension();
  if (d < 63 && (std::uint64_t{1} << d) <= opts.face_budget) {
    try {
      return by_faces(pb, cost, opts);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSupportBudgetExceeded) throw;
    }
  }
  return by_multistart(pb, cost, opts);
}

PriceOfAnarchy price_of_anarchy(const Network& network, const CostMatrix& cost,
                                const SolverOptions& opts) {
  PriceOfAnarchy out;
  out.optimum = social_optimum(network, cost, opts);
  if (out.optimum.cost <= 1e-15) {
    throw Error(ErrorCode::kZeroOptimalCost, "optimal cost is zero; the ratio is undefined");
  }
  out.worst = worst_equilibrium(network, cost, opts);
  out.value = out.worst.social_cost / out.optimum.cost;
  return out;
}

BicriteriaResult empirical_bicriteria(const Network& network, const CostMatrix& cost,
                                      double target_cost, const SolverOptions& opts) {
  if (!(target_cost >= 0.0) || !std::isfinite(target_cost)) {
    throw Error(ErrorCode::kValidationError, "target cost must be finite and nonnegative");
  }
  auto optimal_cost = [&](double p) {
    return social_optimum(network.with_scaled_demand(p), cost, opts).cost;
  };

  double k = 1.0;
  try {
    k = degree_of_asymmetry(cost);
  } catch (const Error&) {
  }
  BicriteriaResult out;
  out.target_cost = target_cost;

  double hi = 10.0 * std::ceil(1.0 + k / 4.0);
  double hi_cost = optimal_cost(hi);
  while (hi_cost < target_cost) {
    hi *= 2.0;
    if (hi > 1e6) {
      throw Error(ErrorCode::kBracketFailure,
                  "no demand scale up to 1e6 reaches the target cost");
    }
    hi_cost = optimal_cost(hi);
  }
  out.bracket_high = hi;

  // Elementwise monotone costs make the scaled optimum nondecreasing in p.
  double prev = optimal_cost(0.0);
  for (int i = 1; i <= 8; ++i) {
    const double p = hi * i / 8.0;
    const double c = optimal_cost(p);
    if (c < prev - 1e-12 * std::max(1.0, std::abs(prev))) {
      throw Error(ErrorCode::kNonMonotoneScaling,
                  "optimal cost decreases between scales " + std::to_string(hi * (i - 1) / 8.0) +
                      " and " + std::to_string(p));
    }
    prev = c;
  }

  double lo = 0.0;
  int it = 0;
  for (; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (optimal_cost(mid) < target_cost) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.iterations = it;
  out.scale = 0.5 * (lo + hi);
  out.scaled_cost = optimal_cost(out.scale);
  if (std::abs(out.scaled_cost - target_cost) > opts.bisection_tol) {
    throw Error(ErrorCode::kBracketFailure,
                "bisection ended with cost gap " +
                    std::to_string(std::abs(out.scaled_cost - target_cost)));
  }
  return out;
}

}  // namespace mixroute
