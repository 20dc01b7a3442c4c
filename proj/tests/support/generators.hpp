#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "congest/error.hpp"
#include "congest/grid.hpp"
#include "congest/measures.hpp"
#include "congest/path_flow.hpp"

namespace congest::testing {

#define EXPECT_ERROR_KIND(stmt, expected_kind)                        \
  do {                                                                \
    try {                                                             \
      stmt;                                                           \
      ADD_FAILURE() << "expected " << to_string(expected_kind);       \
    } catch (const ::congest::Error& err_) {                          \
      EXPECT_EQ(err_.kind(), expected_kind) << err_.what();           \
    }                                                                 \
  } while (false)

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  std::mt19937_64& engine() { return rng_; }

  // Rectangular grid of random shape with a few cells knocked out, retried
  // until the active set stays connected.
  GridDomain grid(int max_side = 7) {
    while (true) {
      const int nx = integer(2, max_side);
      const int ny = integer(2, max_side);
      const double h = 1.0 / nx;
      std::vector<Point> holes;
      const int count = integer(0, (nx * ny) / 5);
      for (int k = 0; k < count; ++k) {
        holes.push_back({(integer(0, nx - 1) + 0.5) * h, (integer(0, ny - 1) + 0.5) * h});
      }
      CellMask mask = [holes, h](Point p) {
        return std::none_of(holes.begin(), holes.end(), [&](Point c) {
          return std::abs(c.x - p.x) < 0.25 * h && std::abs(c.y - p.y) < 0.25 * h;
        });
      };
      try {
        return build_grid({0.0, 0.0, 1.0, ny * h}, nx, mask);
      } catch (const Error&) {
        continue;
      }
    }
  }

  std::vector<double> field(std::size_t n, double lo, double hi) {
    std::vector<double> xi(n);
    for (double& x : xi) x = uniform(lo, hi);
    return xi;
  }

  NodeId node(const Network& net) {
    return static_cast<NodeId>(integer(0, static_cast<int>(net.num_nodes()) - 1));
  }

  // Random walk, possibly revisiting nodes.
  GridPath walk(const Network& net, int max_steps) {
    GridPath p{node(net)};
    const int steps = integer(0, max_steps);
    for (int s = 0; s < steps; ++s) {
      const auto nbrs = net.neighbors(p.back());
      if (nbrs.empty()) break;
      p.push_back(nbrs[integer(0, static_cast<int>(nbrs.size()) - 1)].node);
    }
    return p;
  }

  PathFlow flow(const Network& net, int paths, int max_steps) {
    PathFlow f;
    for (int k = 0; k < paths; ++k) f.add(walk(net, max_steps), uniform(0.01, 1.0));
    return f;
  }

  DiscreteMeasure measure(const Network& net, int atoms) {
    DiscreteMeasure m;
    for (int k = 0; k < atoms; ++k) m.add(node(net), uniform(0.1, 1.0));
    return normalize(m);
  }

 private:
  std::mt19937_64 rng_;
};

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace congest::testing
