#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "congest/network.hpp"
#include "congest/path_flow.hpp"

namespace congest {

// Priority used to break exact label ties: lower rank wins. The default
// ranks nodes by id; a seeded shuffle gives an independent but still
// deterministic tie-break.
struct TieBreak {
  std::vector<std::uint32_t> rank;

  static TieBreak by_id(std::size_t num_nodes);
  static TieBreak shuffled(std::size_t num_nodes, std::uint64_t seed);
};

struct ShortestPathTree {
  NodeId source = 0;
  std::vector<double> cost;          // +inf when unreachable
  std::vector<NodeId> predecessor;   // -1 at the source and when unreachable
};

// Congested costs c_xi(s, .) from a set of sources.
class CostTable {
 public:
  CostTable() = default;
  explicit CostTable(std::vector<ShortestPathTree> trees);

  std::vector<NodeId> sources() const;
  bool has_source(NodeId s) const;
  double cost(NodeId source, NodeId node) const;
  const ShortestPathTree& tree(NodeId source) const;

 private:
  std::vector<ShortestPathTree> trees_;  // sorted by source
};

// Label-setting shortest paths under edge weights l_e * xi_e, one pass per
// source (sources run in parallel). Throws NegativeMetric on xi_e < 0.
CostTable shortest_costs(const Network& net, std::span<const double> edge_xi,
                         std::span<const NodeId> sources,
                         const TieBreak* tie = nullptr);

// Same, with the node metric averaged onto edges.
CostTable shortest_costs_from_nodes(const Network& net,
                                    std::span<const double> node_xi,
                                    std::span<const NodeId> sources,
                                    const TieBreak* tie = nullptr);

// Follows predecessors back from `target`. The path cost recomputed with
// path_cost() equals table.cost(source, target) exactly.
GridPath extract_geodesic(const CostTable& table, NodeId source, NodeId target);

// Empirical check of the Hoelder modulus of y -> c_xi(x, y): the largest
// |c(x,y1) - c(x,y2)| / (||xi||_{q*} |y1 - y2|^alpha), alpha = 1 - 2/q*, over
// random positive node metrics and random node triples. Diagnostic only.
struct HolderDiagnostic {
  double alpha = 0.0;
  double max_ratio = 0.0;
  int samples = 0;
};

HolderDiagnostic holder_diagnostic(const Network& net, double q,
                                   std::uint64_t seed, int fields = 4,
                                   int pairs_per_field = 64);

}  // namespace congest
