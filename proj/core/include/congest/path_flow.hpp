#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "congest/measures.hpp"
#include "congest/network.hpp"

namespace congest {

// Node sequence; consecutive nodes must be joined by an edge.
using GridPath = std::vector<NodeId>;

struct WeightedPath {
  GridPath nodes;
  double mass = 0.0;
};

// Discrete path measure Q: a finite list of weighted paths.
class PathFlow {
 public:
  PathFlow() = default;
  explicit PathFlow(std::vector<WeightedPath> entries);

  void add(GridPath nodes, double mass);

  const std::vector<WeightedPath>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  double total() const;

  // e0#Q and e1#Q.
  std::pair<DiscreteMeasure, DiscreteMeasure> endpoint_marginals() const;

  // Identical node sequences merged, keeping first-occurrence order.
  PathFlow merged() const;
  PathFlow pruned(double threshold) const;

 private:
  std::vector<WeightedPath> entries_;
};

struct PathHash {
  std::size_t operator()(const GridPath& p) const noexcept;
};

// Edge flows f_e (mass) and densities i_e = f_e / w_e (mass per length).
struct IntensityField {
  std::vector<double> edge_flow;
  std::vector<double> edge_density;
};

void validate_path(const Network& net, std::span<const NodeId> path);
double path_length(const Network& net, std::span<const NodeId> path);

IntensityField intensity_from_paths(const Network& net, const PathFlow& flow);
IntensityField intensity_from_edge_flow(const Network& net,
                                        std::vector<double> edge_flow);

// Per-node density: each edge splits its mass-length l_e f_e evenly between
// its two endpoint cells, divided by the cell area.
std::vector<double> cell_density(const Network& net,
                                 const IntensityField& field);

// Metric on an edge from node values: the endpoint average.
inline double edge_metric_value(double xi_u, double xi_v) {
  return 0.5 * (xi_u + xi_v);
}
// Cost of crossing an edge under metric value xi_e. Shortest paths and path
// costs both go through here so that they agree bit for bit.
inline double edge_weight(const Edge& e, double xi_e) {
  return e.length * xi_e;
}

std::vector<double> edge_metric_from_nodes(const Network& net,
                                           std::span<const double> node_xi);

// L_xi(path) for a node metric.
double l_xi(const Network& net, std::span<const NodeId> path,
            std::span<const double> node_xi);
// L_xi(path) for a per-edge metric.
double path_cost(const Network& net, std::span<const NodeId> path,
                 std::span<const double> edge_xi);

// <xi, i> = sum_e l_e w_e xi_e i_e.
double pairing(const Network& net, const IntensityField& field,
               std::span<const double> edge_xi);

// Q = p^{x,y} (x) gamma. Conditional masses sum to one per pair.
struct PathDecomposition {
  TransportPlan plan;
  std::map<std::pair<NodeId, NodeId>, std::vector<WeightedPath>> conditional;
};

PathDecomposition decompose(const PathFlow& flow);
PathFlow compose(const PathDecomposition& parts);

}  // namespace congest
