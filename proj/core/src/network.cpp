#include "mixroute/network.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

#include "mixroute/detail/polytope_qp.hpp"
#include "mixroute/errors.hpp"

namespace mixroute {

const char* to_string(VehicleClass cls) {
  return cls == VehicleClass::kRegular ? "regular" : "smart";
}

Network::Network(std::vector<NodeId> nodes,
                 std::vector<std::pair<NodeId, NodeId>> link_endpoints,
                 std::vector<OdPair> od_pairs)
    : nodes_(std::move(nodes)), od_pairs_(std::move(od_pairs)) {
  std::set<NodeId> known;
  for (NodeId v : nodes_) {
    if (!known.insert(v).second) {
      throw Error(ErrorCode::kInvalidNetwork, "duplicate node id " + std::to_string(v));
    }
    outgoing_[v];
  }
  if (link_endpoints.empty()) throw Error(ErrorCode::kInvalidNetwork, "network has no links");

  int id = 1;
  for (const auto& [tail, head] : link_endpoints) {
    const std::string where = "link " + std::to_string(id);
    if (!known.count(tail) || !known.count(head))
      throw Error(ErrorCode::kInvalidNetwork, where + " references an unknown node");
    if (tail == head) throw Error(ErrorCode::kInvalidNetwork, where + " is a self-loop");
    links_.push_back(Link{id, tail, head});
    outgoing_[tail].push_back(id);
    ++id;
  }

  if (od_pairs_.empty()) throw Error(ErrorCode::kInvalidNetwork, "network has no OD pairs");
  for (std::size_t j = 0; j < od_pairs_.size(); ++j) {
    const OdPair& od = od_pairs_[j];
    const std::string where = "od_pairs[" + std::to_string(j) + "]";
    if (!known.count(od.origin) || !known.count(od.destination))
      throw Error(ErrorCode::kInvalidNetwork, where + " references an unknown node");
    if (od.origin == od.destination)
      throw Error(ErrorCode::kInvalidNetwork, where + " has origin == destination");
    if (!(od.demand_regular >= 0.0) || !(od.demand_smart >= 0.0) ||
        !std::isfinite(od.demand_regular) || !std::isfinite(od.demand_smart))
      throw Error(ErrorCode::kInvalidNetwork, where + " has a negative or non-finite demand");
    if (od.demand_regular + od.demand_smart <= 0.0)
      throw Error(ErrorCode::kInvalidNetwork, where + " has no demand");
  }
}

const std::vector<int>& Network::outgoing(NodeId node) const {
  static const std::vector<int> kNone;
  auto it = outgoing_.find(node);
  return it == outgoing_.end() ? kNone : it->second;
}

Network Network::with_scaled_demand(double factor) const {
  Network out = *this;
  for (OdPair& od : out.od_pairs_) {
    od.demand_regular *= factor;
    od.demand_smart *= factor;
  }
  return out;
}

PathSet enumerate_paths(const Network& network, std::size_t od_index,
                        std::size_t max_paths) {
  const OdPair& od = network.od_pairs().at(od_index);
  PathSet out;
  std::vector<int> stack;
  std::set<NodeId> on_path{od.origin};

  std::function<void(NodeId)> dfs = [&](NodeId node) {
    if (out.truncated) return;
    if (node == od.destination) {
      if (out.paths.size() == max_paths) {
        out.truncated = true;
        return;
      }
      out.paths.push_back(Path{od_index, stack});
      return;
    }
    for (int id : network.outgoing(node)) {
      const NodeId next = network.link(id).head;
      if (on_path.count(next)) continue;
      on_path.insert(next);
      stack.push_back(id);
      dfs(next);
      stack.pop_back();
      on_path.erase(next);
    }
  };
  dfs(od.origin);

  if (out.paths.empty()) {
    throw Error(ErrorCode::kNoPathExists,
                "no path from node " + std::to_string(od.origin) + " to node " +
                    std::to_string(od.destination));
  }
  return out;
}

FlowVector to_link_flows(const PathFlowAssignment& assignment, const Network& network) {
  FlowVector z(network.link_count());
  for (const PathFlow& pf : assignment.entries) {
    for (int id : pf.path.links) {
      if (pf.cls == VehicleClass::kRegular) {
        z.regular(id) += pf.mass;
      } else {
        z.smart(id) += pf.mass;
      }
    }
  }
  return z;
}

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

FeasibilityReport is_feasible(const FlowVector& flow, const Network& network, double tol) {
  if (flow.size() != network.flow_dimension()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "flow vector has " + std::to_string(flow.size()) + " entries, expected " +
                    std::to_string(network.flow_dimension()));
  }
  FeasibilityReport report;
  auto violate = [&report, tol](double amount, std::string what) {
    report.max_violation = std::max(report.max_violation, amount);
    if (amount > tol) {
      report.feasible = false;
      report.violations.push_back(std::move(what) + " (violation " + fmt_double(amount) + ")");
    }
  };

  for (const Link& link : network.links()) {
    for (VehicleClass cls : kVehicleClasses) {
      const double v = flow.of(link.id, cls);
      if (v < 0.0) violate(-v, std::string(to_string(cls)) + " flow on link " +
                                   std::to_string(link.id) + " is negative");
    }
  }

  // Per-class conservation: outflow - inflow = supply - sink at every node.
  for (VehicleClass cls : kVehicleClasses) {
    std::map<NodeId, double> balance;
    for (NodeId v : network.nodes()) balance[v] = 0.0;
    for (const Link& link : network.links()) {
      balance[link.tail] += flow.of(link.id, cls);
      balance[link.head] -= flow.of(link.id, cls);
    }
    for (const OdPair& od : network.od_pairs()) {
      balance[od.origin] -= od.demand(cls);
      balance[od.destination] += od.demand(cls);
    }
    for (const auto& [node, residual] : balance) {
      violate(std::abs(residual), std::string(to_string(cls)) + " conservation at node " +
                                      std::to_string(node));
    }
  }
  if (!report.feasible) return report;

  // Conservation admits circulations and cross-OD mixing; confirm a path
  // decomposition exists by nonnegative least squares over the paths.
  std::vector<Path> paths;
  for (std::size_t j = 0; j < network.od_pairs().size(); ++j) {
    PathSet ps = enumerate_paths(network, j);
    paths.insert(paths.end(), ps.paths.begin(), ps.paths.end());
  }
  const auto n = static_cast<Eigen::Index>(network.link_count());
  const auto odn = static_cast<Eigen::Index>(network.od_pairs().size());
  for (VehicleClass cls : kVehicleClasses) {
    Matrix a = Matrix::Zero(n + odn, static_cast<Eigen::Index>(paths.size()));
    Vector b(n + odn);
    for (std::size_t p = 0; p < paths.size(); ++p) {
      for (int id : paths[p].links) a(id - 1, static_cast<Eigen::Index>(p)) = 1.0;
      a(n + static_cast<Eigen::Index>(paths[p].od_index), static_cast<Eigen::Index>(p)) = 1.0;
    }
    for (const Link& link : network.links()) b(link.id - 1) = flow.of(link.id, cls);
    for (Eigen::Index j = 0; j < odn; ++j)
      b(n + j) = network.od_pairs()[static_cast<std::size_t>(j)].demand(cls);
    const Vector h = detail::nnls(a, b);
    const double residual = (a * h - b).lpNorm<Eigen::Infinity>();
    violate(residual, std::string(to_string(cls)) + " flow has no path decomposition");
  }
  return report;
}

Network parallel_network(std::size_t link_count, double demand_regular, double demand_smart) {
  std::vector<std::pair<NodeId, NodeId>> links(link_count, {0, 1});
  return Network({0, 1}, std::move(links), {OdPair{0, 1, demand_regular, demand_smart}});
}

std::optional<double> shortest_path_delay(const Network& network,
                                          const std::vector<double>& link_delay,
                                          NodeId origin, NodeId destination) {
  std::map<NodeId, double> dist;
  for (NodeId v : network.nodes()) dist[v] = std::numeric_limits<double>::infinity();
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[origin] = 0.0;
  queue.emplace(0.0, origin);
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[v]) continue;
    for (int id : network.outgoing(v)) {
      const NodeId w = network.link(id).head;
      const double nd = d + link_delay.at(static_cast<std::size_t>(id - 1));
      if (nd < dist[w]) {
        dist[w] = nd;
        queue.emplace(nd, w);
      }
    }
  }
  const double out = dist[destination];
  if (!std::isfinite(out)) return std::nullopt;
  return out;
}

}  // namespace mixroute
