#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "mixroute/cost.hpp"
#include "mixroute/errors.hpp"
#include "mixroute/network.hpp"

namespace mixroute::testing {

#define EXPECT_THROW_CODE(stmt, expected_code)                              \
  do {                                                                      \
    bool thrown_ = false;                                                   \
    try {                                                                   \
      stmt;                                                                 \
    } catch (const ::mixroute::Error& e_) {                                 \
      thrown_ = true;                                                       \
      EXPECT_EQ(e_.code(), expected_code) << e_.what();                     \
    }                                                                       \
    EXPECT_TRUE(thrown_) << "expected " << ::mixroute::to_string(expected_code); \
  } while (0)

inline std::mt19937_64 rng_for(std::uint64_t salt) { return std::mt19937_64(0x9e3779b97f4a7c15ULL ^ salt); }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::vector<LinkCostParams> random_links(std::mt19937_64& rng, int count, double k_lo = 1.0,
                                                double k_hi = 3.9) {
  std::vector<LinkCostParams> out;
  for (int i = 0; i < count; ++i) {
    LinkCostParams p;
    p.free_flow_time = uniform(rng, 0.0, 2.0);
    p.congestion = uniform(rng, 0.1, 5.0);
    p.asymmetry = uniform(rng, k_lo, k_hi);
    p.orientation = uniform_int(rng, 0, 1) ? Orientation::kSmartHeavy : Orientation::kRegularHeavy;
    out.push_back(p);
  }
  return out;
}

inline FlowVector random_nonnegative(std::mt19937_64& rng, std::size_t links, double hi) {
  FlowVector z(links);
  for (Eigen::Index i = 0; i < z.values().size(); ++i) z.values()(i) = uniform(rng, 0.0, hi);
  return z;
}

// Minimum social cost on a parallel network by dense enumeration of per-class
// splits (each class's demand divided over the links in steps of demand/steps).
inline double grid_min_parallel(const CostMatrix& cost, double regular, double smart,
                                int steps) {
  const auto n = static_cast<int>(cost.link_count());
  std::vector<std::vector<int>> splits;
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == n - 1) {
      cur[static_cast<std::size_t>(i)] = left;
      splits.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[static_cast<std::size_t>(i)] = v;
      self(self, i + 1, left - v);
    }
  };
  rec(rec, 0, steps);
  double best = std::numeric_limits<double>::infinity();
  FlowVector z(static_cast<std::size_t>(n));
  for (const auto& rs : splits) {
    for (const auto& ss : splits) {
      for (int i = 0; i < n; ++i) {
        z.regular(i + 1) = regular * rs[static_cast<std::size_t>(i)] / steps;
        z.smart(i + 1) = smart * ss[static_cast<std::size_t>(i)] / steps;
      }
      const Vector c = cost.coefficients() * z.values() + cost.offset();
      best = std::min(best, c.dot(z.values()));
    }
  }
  return best;
}

}  // namespace mixroute::testing
