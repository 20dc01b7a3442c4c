#include "congest/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <string>
#include <tuple>

#include "congest/error.hpp"
#include "congest/parallel.hpp"

namespace congest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ShortestPathTree dijkstra(const Network& net, std::span<const double> edge_xi,
                          NodeId source, const TieBreak& tie) {
  const auto n = net.num_nodes();
  ShortestPathTree tree;
  tree.source = source;
  tree.cost.assign(n, kInf);
  tree.predecessor.assign(n, -1);
  std::vector<char> settled(n, 0);

  using Label = std::tuple<double, std::uint32_t, NodeId>;
  std::priority_queue<Label, std::vector<Label>, std::greater<>> heap;
  tree.cost[source] = 0.0;
  heap.emplace(0.0, tie.rank[source], source);

  while (!heap.empty()) {
    const auto [d, r, u] = heap.top();
    heap.pop();
    if (settled[u] || d > tree.cost[u]) continue;
    settled[u] = 1;
    for (const Incidence& inc : net.neighbors(u)) {
      const NodeId v = inc.node;
      if (settled[v]) continue;
      const double nd = d + edge_weight(net.edge(inc.edge), edge_xi[inc.edge]);
      if (nd < tree.cost[v]) {
        tree.cost[v] = nd;
        tree.predecessor[v] = u;
        heap.emplace(nd, tie.rank[v], v);
      } else if (nd == tree.cost[v] &&
                 tie.rank[u] < tie.rank[tree.predecessor[v]]) {
        tree.predecessor[v] = u;
      }
    }
  }
  return tree;
}

}  // namespace

TieBreak TieBreak::by_id(std::size_t num_nodes) {
  TieBreak t;
  t.rank.resize(num_nodes);
  std::iota(t.rank.begin(), t.rank.end(), 0u);
  return t;
}

TieBreak TieBreak::shuffled(std::size_t num_nodes, std::uint64_t seed) {
  TieBreak t = by_id(num_nodes);
  std::mt19937_64 rng(seed);
  std::shuffle(t.rank.begin(), t.rank.end(), rng);
  return t;
}

CostTable::CostTable(std::vector<ShortestPathTree> trees)
    : trees_(std::move(trees)) {
  std::sort(trees_.begin(), trees_.end(),
            [](const auto& a, const auto& b) { return a.source < b.source; });
}

std::vector<NodeId> CostTable::sources() const {
  std::vector<NodeId> out;
  out.reserve(trees_.size());
  for (const auto& t : trees_) out.push_back(t.source);
  return out;
}

namespace {

auto find_tree(const std::vector<ShortestPathTree>& trees, NodeId source) {
  return std::lower_bound(
      trees.begin(), trees.end(), source,
      [](const ShortestPathTree& t, NodeId s) { return t.source < s; });
}

}  // namespace

bool CostTable::has_source(NodeId s) const {
  const auto it = find_tree(trees_, s);
  return it != trees_.end() && it->source == s;
}

const ShortestPathTree& CostTable::tree(NodeId source) const {
  const auto it = find_tree(trees_, source);
  if (it == trees_.end() || it->source != source) {
    throw Error(ErrorKind::kInvalidArgument,
                "node " + std::to_string(source) + " is not a table source");
  }
  return *it;
}

double CostTable::cost(NodeId source, NodeId node) const {
  return tree(source).cost.at(static_cast<std::size_t>(node));
}

CostTable shortest_costs(const Network& net, std::span<const double> edge_xi,
                         std::span<const NodeId> sources,
                         const TieBreak* tie) {
  if (edge_xi.size() != net.num_edges()) {
    throw Error(ErrorKind::kInvalidArgument, "one metric value per edge expected");
  }
  for (double x : edge_xi) {
    if (!(x >= 0.0)) {
      throw Error(ErrorKind::kNegativeMetric, "metric must be nonnegative");
    }
  }
  std::vector<NodeId> unique(sources.begin(), sources.end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  for (NodeId s : unique) {
    if (!net.contains(s)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "source " + std::to_string(s) + " is not a node");
    }
  }

  const TieBreak default_tie = tie ? TieBreak{} : TieBreak::by_id(net.num_nodes());
  const TieBreak& ranks = tie ? *tie : default_tie;
  if (ranks.rank.size() != net.num_nodes()) {
    throw Error(ErrorKind::kInvalidArgument, "tie-break ranks per node expected");
  }

  std::vector<ShortestPathTree> trees(unique.size());
  parallel_for(unique.size(), [&](std::size_t k) {
    trees[k] = dijkstra(net, edge_xi, unique[k], ranks);
  });
  return CostTable(std::move(trees));
}

CostTable shortest_costs_from_nodes(const Network& net,
                                    std::span<const double> node_xi,
                                    std::span<const NodeId> sources,
                                    const TieBreak* tie) {
  const auto edge_xi = edge_metric_from_nodes(net, node_xi);
  return shortest_costs(net, edge_xi, sources, tie);
}

GridPath extract_geodesic(const CostTable& table, NodeId source,
                          NodeId target) {
  const ShortestPathTree& tree = table.tree(source);
  if (target < 0 || static_cast<std::size_t>(target) >= tree.cost.size() ||
      !std::isfinite(tree.cost[target])) {
    throw Error(ErrorKind::kUnreachableNode,
                "node " + std::to_string(target) + " is unreachable from " +
                    std::to_string(source));
  }
  GridPath path;
  for (NodeId v = target; v != -1; v = tree.predecessor[v]) {
    path.push_back(v);
    if (v == source) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

HolderDiagnostic holder_diagnostic(const Network& net, double q,
                                   std::uint64_t seed, int fields,
                                   int pairs_per_field) {
  if (!(q > 1.0)) throw Error(ErrorKind::kInvalidArgument, "q must exceed 1");
  HolderDiagnostic out;
  const double q_star = q / (q - 1.0);
  out.alpha = 1.0 - 2.0 / q_star;
  const auto n = net.num_nodes();
  if (n < 2) return out;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
  for (int f = 0; f < fields; ++f) {
    std::vector<double> xi(n);
    double norm = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      xi[v] = unit(rng);
      norm += net.area(static_cast<NodeId>(v)) * std::pow(xi[v], q_star);
    }
    norm = std::pow(norm, 1.0 / q_star);
    std::vector<NodeId> xs;
    std::vector<std::pair<NodeId, NodeId>> ys;
    for (int p = 0; p < pairs_per_field; ++p) {
      xs.push_back(pick(rng));
      NodeId y1 = pick(rng);
      NodeId y2 = pick(rng);
      while (y2 == y1) y2 = pick(rng);
      ys.emplace_back(y1, y2);
    }
    const CostTable table = shortest_costs_from_nodes(net, xi, xs);
    for (int p = 0; p < pairs_per_field; ++p) {
      const auto [y1, y2] = ys[p];
      const double dc = std::abs(table.cost(xs[p], y1) - table.cost(xs[p], y2));
      const double dy = distance(net.position(y1), net.position(y2));
      const double ratio = dc / (norm * std::pow(dy, out.alpha));
      out.max_ratio = std::max(out.max_ratio, ratio);
      ++out.samples;
    }
  }
  return out;
}

}  // namespace congest
