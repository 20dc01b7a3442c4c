#include "congest/path_flow.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

#include "congest/error.hpp"

namespace congest {

PathFlow::PathFlow(std::vector<WeightedPath> entries) {
  for (auto& e : entries) add(std::move(e.nodes), e.mass);
}

void PathFlow::add(GridPath nodes, double mass) {
  if (nodes.empty()) {
    throw Error(ErrorKind::kInvalidPath, "path must contain a node");
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw Error(ErrorKind::kInvalidArgument,
                "path mass must be positive and finite");
  }
  entries_.push_back({std::move(nodes), mass});
}

double PathFlow::total() const {
  double sum = 0.0;
  for (const auto& e : entries_) sum += e.mass;
  return sum;
}

std::pair<DiscreteMeasure, DiscreteMeasure> PathFlow::endpoint_marginals()
    const {
  DiscreteMeasure start;
  DiscreteMeasure end;
  for (const auto& e : entries_) {
    start.add(e.nodes.front(), e.mass);
    end.add(e.nodes.back(), e.mass);
  }
  return {start, end};
}

std::size_t PathHash::operator()(const GridPath& p) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (NodeId n : p) {
    h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(n));
    h *= 1099511628211ull;
  }
  return h;
}

PathFlow PathFlow::merged() const {
  PathFlow out;
  std::unordered_map<GridPath, std::size_t, PathHash> index;
  for (const auto& e : entries_) {
    auto [it, inserted] = index.emplace(e.nodes, out.entries_.size());
    if (inserted) {
      out.entries_.push_back(e);
    } else {
      out.entries_[it->second].mass += e.mass;
    }
  }
  return out;
}

PathFlow PathFlow::pruned(double threshold) const {
  PathFlow out;
  for (const auto& e : entries_) {
    if (e.mass >= threshold) out.entries_.push_back(e);
  }
  return out;
}

void validate_path(const Network& net, std::span<const NodeId> path) {
  if (path.empty()) throw Error(ErrorKind::kInvalidPath, "empty path");
  for (NodeId n : path) {
    if (!net.contains(n)) {
      throw Error(ErrorKind::kInvalidPath,
                  "path visits unknown node " + std::to_string(n));
    }
  }
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    if (!net.find_edge(path[k], path[k + 1])) {
      throw Error(ErrorKind::kInvalidPath,
                  "nodes " + std::to_string(path[k]) + " and " +
                      std::to_string(path[k + 1]) + " are not adjacent");
    }
  }
}

namespace {

template <typename Fn>
void for_each_edge(const Network& net, std::span<const NodeId> path, Fn&& fn) {
  if (path.empty()) throw Error(ErrorKind::kInvalidPath, "empty path");
  if (!net.contains(path.front())) {
    throw Error(ErrorKind::kInvalidPath, "path starts at an unknown node");
  }
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const auto e = net.find_edge(path[k], path[k + 1]);
    if (!e) {
      throw Error(ErrorKind::kInvalidPath,
                  "nodes " + std::to_string(path[k]) + " and " +
                      std::to_string(path[k + 1]) + " are not adjacent");
    }
    fn(*e);
  }
}

}  // namespace

double path_length(const Network& net, std::span<const NodeId> path) {
  double len = 0.0;
  for_each_edge(net, path, [&](EdgeId e) { len += net.edge(e).length; });
  return len;
}

IntensityField intensity_from_paths(const Network& net, const PathFlow& flow) {
  std::vector<double> f(net.num_edges(), 0.0);
  for (const auto& entry : flow.entries()) {
    for_each_edge(net, entry.nodes, [&](EdgeId e) { f[e] += entry.mass; });
  }
  return intensity_from_edge_flow(net, std::move(f));
}

IntensityField intensity_from_edge_flow(const Network& net,
                                        std::vector<double> edge_flow) {
  if (edge_flow.size() != net.num_edges()) {
    throw Error(ErrorKind::kInvalidArgument, "one flow value per edge expected");
  }
  IntensityField field;
  field.edge_density.resize(edge_flow.size());
  for (std::size_t e = 0; e < edge_flow.size(); ++e) {
    if (!(edge_flow[e] >= 0.0)) {
      throw Error(ErrorKind::kInvalidArgument, "edge flows must be nonnegative");
    }
    field.edge_density[e] = edge_flow[e] / net.edge(static_cast<EdgeId>(e)).width;
  }
  field.edge_flow = std::move(edge_flow);
  return field;
}

std::vector<double> cell_density(const Network& net,
                                 const IntensityField& field) {
  std::vector<double> rho(net.num_nodes(), 0.0);
  for (std::size_t e = 0; e < net.num_edges(); ++e) {
    const Edge& edge = net.edge(static_cast<EdgeId>(e));
    const double half = 0.5 * edge.length * field.edge_flow[e];
    rho[edge.u] += half;
    rho[edge.v] += half;
  }
  for (std::size_t n = 0; n < rho.size(); ++n) {
    rho[n] /= net.area(static_cast<NodeId>(n));
  }
  return rho;
}

std::vector<double> edge_metric_from_nodes(const Network& net,
                                           std::span<const double> node_xi) {
  if (node_xi.size() != net.num_nodes()) {
    throw Error(ErrorKind::kInvalidArgument, "one metric value per node expected");
  }
  for (double x : node_xi) {
    if (!(x >= 0.0)) {
      throw Error(ErrorKind::kNegativeMetric, "metric must be nonnegative");
    }
  }
  std::vector<double> xi(net.num_edges());
  for (std::size_t e = 0; e < xi.size(); ++e) {
    const Edge& edge = net.edge(static_cast<EdgeId>(e));
    xi[e] = edge_metric_value(node_xi[edge.u], node_xi[edge.v]);
  }
  return xi;
}

double l_xi(const Network& net, std::span<const NodeId> path,
            std::span<const double> node_xi) {
  if (node_xi.size() != net.num_nodes()) {
    throw Error(ErrorKind::kInvalidArgument, "one metric value per node expected");
  }
  double cost = 0.0;
  for_each_edge(net, path, [&](EdgeId e) {
    const Edge& edge = net.edge(e);
    const double xu = node_xi[edge.u];
    const double xv = node_xi[edge.v];
    if (!(xu >= 0.0) || !(xv >= 0.0)) {
      throw Error(ErrorKind::kNegativeMetric, "metric must be nonnegative");
    }
    cost += edge_weight(edge, edge_metric_value(xu, xv));
  });
  return cost;
}

double path_cost(const Network& net, std::span<const NodeId> path,
                 std::span<const double> edge_xi) {
  if (edge_xi.size() != net.num_edges()) {
    throw Error(ErrorKind::kInvalidArgument, "one metric value per edge expected");
  }
  double cost = 0.0;
  for_each_edge(net, path, [&](EdgeId e) {
    if (!(edge_xi[e] >= 0.0)) {
      throw Error(ErrorKind::kNegativeMetric, "metric must be nonnegative");
    }
    cost += edge_weight(net.edge(e), edge_xi[e]);
  });
  return cost;
}

double pairing(const Network& net, const IntensityField& field,
               std::span<const double> edge_xi) {
  double sum = 0.0;
  for (std::size_t e = 0; e < net.num_edges(); ++e) {
    const Edge& edge = net.edge(static_cast<EdgeId>(e));
    sum += edge.length * edge.width * edge_xi[e] * field.edge_density[e];
  }
  return sum;
}

PathDecomposition decompose(const PathFlow& flow) {
  std::map<std::pair<NodeId, NodeId>, double> pair_mass;
  PathDecomposition out;
  for (const auto& e : flow.entries()) {
    const auto key = std::make_pair(e.nodes.front(), e.nodes.back());
    pair_mass[key] += e.mass;
    out.conditional[key].push_back(e);
  }
  std::vector<PlanEntry> plan;
  for (auto& [key, paths] : out.conditional) {
    const double total = pair_mass[key];
    for (auto& p : paths) p.mass /= total;
    plan.push_back({key.first, key.second, total});
  }
  out.plan = TransportPlan(std::move(plan));
  return out;
}

PathFlow compose(const PathDecomposition& parts) {
  PathFlow flow;
  for (const PlanEntry& e : parts.plan.entries()) {
    const auto it = parts.conditional.find({e.source, e.target});
    if (it == parts.conditional.end()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "plan entry without a conditional path distribution");
    }
    for (const auto& p : it->second) flow.add(p.nodes, p.mass * e.mass);
  }
  return flow;
}

}  // namespace congest
