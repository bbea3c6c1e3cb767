#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mixroute/linalg.hpp"

namespace mixroute {

using NodeId = std::int64_t;

enum class VehicleClass { kRegular = 0, kSmart = 1 };

inline constexpr VehicleClass kVehicleClasses[] = {VehicleClass::kRegular,
                                                    VehicleClass::kSmart};

const char* to_string(VehicleClass cls);

struct Link {
  int id = 0;  // 1-based, declaration order
  NodeId tail = 0;
  NodeId head = 0;
};

struct OdPair {
  NodeId origin = 0;
  NodeId destination = 0;
  double demand_regular = 0.0;
  double demand_smart = 0.0;

  double demand(VehicleClass cls) const {
    return cls == VehicleClass::kRegular ? demand_regular : demand_smart;
  }
};

/// A simple directed path for one OD pair, as a sequence of link ids.
struct Path {
  std::size_t od_index = 0;
  std::vector<int> links;

  bool operator==(const Path&) const = default;
};

struct PathSet {
  std::vector<Path> paths;
  bool truncated = false;  // max_paths was hit
};

/// Interleaved per-link class flows (x_1, y_1, ..., x_n, y_n). Link ids are
/// 1-based in the accessors, matching `Link::id`.
class FlowVector {
 public:
  FlowVector() = default;
  explicit FlowVector(std::size_t link_count)
      : values_(Vector::Zero(static_cast<Eigen::Index>(2 * link_count))) {}
  explicit FlowVector(Vector values) : values_(std::move(values)) {}

  std::size_t link_count() const { return static_cast<std::size_t>(values_.size()) / 2; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }

  double regular(int link_id) const { return values_(2 * (link_id - 1)); }
  double smart(int link_id) const { return values_(2 * (link_id - 1) + 1); }
  double& regular(int link_id) { return values_(2 * (link_id - 1)); }
  double& smart(int link_id) { return values_(2 * (link_id - 1) + 1); }
  double of(int link_id, VehicleClass cls) const {
    return values_(2 * (link_id - 1) + static_cast<int>(cls));
  }

  const Vector& values() const { return values_; }
  Vector& values() { return values_; }

 private:
  Vector values_;
};

/// Immutable two-class routing network. Construction validates the
/// structural invariants and throws Error(kInvalidNetwork) on violation.
class Network {
 public:
  Network() = default;
  Network(std::vector<NodeId> nodes,
          std::vector<std::pair<NodeId, NodeId>> link_endpoints,
          std::vector<OdPair> od_pairs);

  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const std::vector<OdPair>& od_pairs() const { return od_pairs_; }
  std::size_t link_count() const { return links_.size(); }
  std::size_t flow_dimension() const { return 2 * links_.size(); }
  const Link& link(int id) const { return links_.at(static_cast<std::size_t>(id - 1)); }

  /// Link ids leaving `node`, ascending.
  const std::vector<int>& outgoing(NodeId node) const;

  /// Copy with every OD demand (both classes) multiplied by `factor`.
  Network with_scaled_demand(double factor) const;

 private:
  std::vector<NodeId> nodes_;
  std::vector<Link> links_;
  std::vector<OdPair> od_pairs_;
  std::map<NodeId, std::vector<int>> outgoing_;
};

/// Mass on one path for one class, with the path's delay for that class.
struct PathFlow {
  std::size_t od_index = 0;
  VehicleClass cls = VehicleClass::kRegular;
  Path path;
  double mass = 0.0;
  double cost = 0.0;
};

struct PathFlowAssignment {
  std::vector<PathFlow> entries;
};

inline constexpr std::size_t kDefaultMaxPaths = 1000;
inline constexpr double kDefaultFeasibilityTol = 1e-9;

/// All simple directed paths of one OD pair in lexicographic order of their
/// link-id sequences, truncated at `max_paths`. Throws kNoPathExists.
PathSet enumerate_paths(const Network& network, std::size_t od_index,
                        std::size_t max_paths = kDefaultMaxPaths);

FlowVector to_link_flows(const PathFlowAssignment& assignment,
                         const Network& network);

struct FeasibilityReport {
  bool feasible = true;
  double max_violation = 0.0;
  std::vector<std::string> violations;
};

/// Whether `flow` is induced by some path-flow assignment within `tol`.
/// Throws kDimensionMismatch.
FeasibilityReport is_feasible(const FlowVector& flow, const Network& network,
                              double tol = kDefaultFeasibilityTol);

/// Nodes 0 (origin) and 1 (destination) joined by `link_count` parallel links.
Network parallel_network(std::size_t link_count, double demand_regular,
                         double demand_smart);

/// Dijkstra over nonnegative per-link delays (indexed by link id - 1).
/// Returns nullopt when `destination` is unreachable.
std::optional<double> shortest_path_delay(const Network& network,
                                          const std::vector<double>& link_delay,
                                          NodeId origin, NodeId destination);

}  // namespace mixroute
