#pragma once

#include <functional>
#include <map>
#include <vector>

#include "congest/measures.hpp"

namespace congest {

// Dense balanced transportation problem: minimize sum c_ij x_ij subject to
// row sums = supply, column sums = demand, x >= 0.
struct TransportProblem {
  std::vector<double> supply;
  std::vector<double> demand;
  std::vector<double> cost;  // row-major, supply.size() x demand.size()
};

struct BasicCell {
  int row = 0;
  int col = 0;
  double flow = 0.0;
};

struct TransportSolution {
  std::vector<BasicCell> basis;  // spanning tree, m + n - 1 cells
  std::vector<double> u;         // row potentials
  std::vector<double> v;         // column potentials
  double value = 0.0;
  int pivots = 0;
};

// Transportation simplex. Starts from the northwest-corner basis and pivots
// until every reduced cost c_ij - u_i - v_j is >= -1e-12 (scaled by the
// largest |c_ij|). Falls back to Bland's rule during runs of degenerate
// pivots.
TransportSolution solve_transport(const TransportProblem& problem);

using CostFn = std::function<double(NodeId source, NodeId target)>;

struct MKSolution {
  TransportPlan plan;
  double value = 0.0;
  std::map<NodeId, double> u;  // source potentials
  std::map<NodeId, double> v;  // target potentials
};

inline constexpr double kSupportTruncation = 1e-12;

// Exact Monge-Kantorovich solve between two node measures. Supports are
// truncated at 1e-12 mass. Throws UnbalancedMarginals or InfiniteCost.
MKSolution solve_mk(const CostFn& cost, const DiscreteMeasure& mu0,
                    const DiscreteMeasure& mu1);

}  // namespace congest
