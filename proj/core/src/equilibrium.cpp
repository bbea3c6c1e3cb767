#include "mixroute/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "mixroute/detail/path_space.hpp"
#include "mixroute/detail/polytope_qp.hpp"
#include "mixroute/detail/search.hpp"
#include "mixroute/errors.hpp"

namespace mixroute {

std::vector<PathFlow> EquilibriumResult::support(double tol) const {
  std::vector<PathFlow> out;
  for (const auto& pf : path_flows)
    if (pf.mass > tol) out.push_back(pf);
  return out;
}

double vi_residual(const CostMatrix& cost, const Network& network, const FlowVector& z,
                   double feasibility_tol) {
  const FeasibilityReport feas = is_feasible(z, network, feasibility_tol);
  if (!feas.feasible) {
    throw Error(ErrorCode::kInfeasibleFlow,
                feas.violations.empty() ? "flow is infeasible" : feas.violations.front());
  }
  const Vector delay = evaluate(cost, z);
  double out = delay.dot(z.values());
  for (std::size_t j = 0; j < network.od_pairs().size(); ++j) {
    const OdPair& od = network.od_pairs()[j];
    for (VehicleClass cls : kVehicleClasses) {
      const double demand = od.demand(cls);
      if (demand <= 0.0) continue;
      std::vector<double> link_delay(network.link_count());
      bool negative = false;
      for (const Link& link : network.links()) {
        const double d = delay(2 * (link.id - 1) + static_cast<int>(cls));
        link_delay[static_cast<std::size_t>(link.id - 1)] = d;
        negative = negative || d < 0.0;
      }
      double best = 0.0;
      if (!negative) {
        best = shortest_path_delay(network, link_delay, od.origin, od.destination).value();
      } else {
        // Dijkstra needs nonnegative weights; fall back to the path list.
        best = std::numeric_limits<double>::infinity();
        for (const Path& p : enumerate_paths(network, j).paths) {
          double s = 0.0;
          for (int id : p.links) s += link_delay[static_cast<std::size_t>(id - 1)];
          best = std::min(best, s);
        }
      }
      out -= demand * best;
    }
  }
  return std::max(out, 0.0);
}

namespace {

using detail::PathSpace;

EquilibriumResult finish(const PathSpace& space, const CostMatrix& cost,
                         const Network& network, const Matrix& op, const Vector& offset,
                         const Vector& h, const SolverOptions& opts) {
  EquilibriumResult out;
  out.flow = space.to_link(h);
  out.social_cost = social_cost(cost, out.flow);
  out.path_flows = space.describe(h, op * h + offset);
  out.vi_residual = vi_residual(cost, network, out.flow,
                                std::max(opts.feasibility_tol, 1e-9));
  out.converged = out.vi_residual <= opts.vi_tol;
  return out;
}

}  // namespace

EquilibriumResult solve_equilibrium(const Network& network, const CostMatrix& cost,
                                    const SolverOptions& opts) {
  if (opts.vi_tol <= 0.0 || opts.max_iterations < 1) {
    throw Error(ErrorCode::kValidationError, "vi_tol must be > 0 and max_iterations >= 1");
  }
  if (cost.link_count() != network.link_count()) {
    throw Error(ErrorCode::kDimensionMismatch, "cost and network link counts differ");
  }
  const PathSpace space(network, opts.max_paths);
  const Matrix op = space.path_operator(cost);
  const Vector offset = space.path_offset(cost);
  auto costs = [&](const Vector& h) -> Vector { return op * h + offset; };

  Vector h = space.uniform();
  Vector best = h;
  double best_res = space.residual(costs(h), h);
  int iterations = 0;
  std::string method = "extragradient";

  const double lipschitz = op.norm();
  const double step = lipschitz > 0.0 ? opts.step_scale / lipschitz : 1.0;
  for (; iterations < opts.max_iterations && best_res > opts.vi_tol; ++iterations) {
    const Vector half = space.project(h - step * costs(h));
    h = space.project(h - step * costs(half));
    const double res = space.residual(costs(h), h);
    if (res < best_res) {
      best_res = res;
      best = h;
    }
  }

  if (best_res > opts.vi_tol) {
    method = "best-response-averaging";
    h = best;
    const int averaging_steps = std::max(1, opts.max_iterations / 10);
    for (int t = 0; t < averaging_steps && best_res > opts.vi_tol; ++t, ++iterations) {
      h += (space.best_response(costs(h)) - h) / static_cast<double>(t + 2);
      const double res = space.residual(costs(h), h);
      if (res < best_res) {
        best_res = res;
        best = h;
      }
    }
  }

  bool exhaustive = false;
  std::size_t patterns = 0;
  if (best_res > opts.vi_tol) {
    const auto nearest = detail::search_equilibria(
        space, op, offset, detail::SearchObjective::nearest(best), opts);
    patterns = nearest.patterns_explored;
    exhaustive = nearest.exhaustive;
    if (!nearest.points.empty()) {
      method = "support-projection";
      best = nearest.points.front().h;
    }
  }

  EquilibriumResult out = finish(space, cost, network, op, offset, best, opts);
  out.iterations = iterations;
  out.method = method;
  out.exhaustive = exhaustive;
  out.patterns_explored = patterns;
  return out;
}

EquilibriumResult worst_equilibrium(const Network& network, const CostMatrix& cost,
                                    const SolverOptions& opts) {
  if (cost.link_count() != network.link_count()) {
    throw Error(ErrorCode::kDimensionMismatch, "cost and network link counts differ");
  }
  const PathSpace space(network, opts.max_paths);
  const Matrix op = space.path_operator(cost);
  const Vector offset = space.path_offset(cost);

  std::optional<detail::SearchResult> search;
  if (!space.truncated() && space.max_group_size() <= opts.max_support_paths) {
    search = detail::search_equilibria(space, op, offset,
                                       detail::SearchObjective::max_social_cost(), opts);
  }
  if (!search || !search->exhaustive || search->points.empty()) {
    EquilibriumResult fallback = solve_equilibrium(network, cost, opts);
    fallback.exhaustive = false;
    fallback.method += " (support budget exceeded)";
    if (search) fallback.patterns_explored = search->patterns_explored;
    return fallback;
  }

  // Points come back sorted worst-first with the lexicographic tie-break.
  EquilibriumResult out =
      finish(space, cost, network, op, offset, search->points.front().h, opts);
  out.method = "support-enumeration";
  out.exhaustive = true;
  out.patterns_explored = search->patterns_explored;
  for (const auto& p : search->points) {
    FlowVector z = space.to_link(p.h);
    const bool seen = std::any_of(out.candidates.begin(), out.candidates.end(),
                                  [&z](const EquilibriumCandidate& c) {
                                    return (c.flow.values() - z.values())
                                               .lpNorm<Eigen::Infinity>() <= 1e-9;
                                  });
    if (!seen) out.candidates.push_back({z, social_cost(cost, z)});
  }
  return out;
}

}  // namespace mixroute
