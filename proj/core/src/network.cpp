#include "congest/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "congest/error.hpp"

namespace congest {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Network::Network(std::vector<Point> positions, std::vector<double> areas,
                 std::vector<Edge> edges)
    : positions_(std::move(positions)),
      areas_(std::move(areas)),
      edges_(std::move(edges)) {
  const auto n = positions_.size();
  if (areas_.size() != n) {
    throw Error(ErrorKind::kInvalidArgument,
                "network: one area per node is required");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(areas_[i] > 0.0) || !std::isfinite(areas_[i])) {
      throw Error(ErrorKind::kInvalidArgument,
                  "network: node " + std::to_string(i) +
                      " has non-positive area");
    }
  }

  std::vector<std::size_t> degree(n, 0);
  for (const Edge& e : edges_) {
    if (!contains(e.u) || !contains(e.v) || e.u == e.v) {
      throw Error(ErrorKind::kInvalidArgument,
                  "network: edge endpoints must be distinct existing nodes");
    }
    if (!(e.length > 0.0) || !(e.width > 0.0) || !std::isfinite(e.length) ||
        !std::isfinite(e.width)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "network: edge length and width must be positive");
    }
    ++degree[e.u];
    ++degree[e.v];
  }

  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  incidences_.resize(offsets_[n]);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const Edge& e = edges_[k];
    const auto id = static_cast<EdgeId>(k);
    incidences_[cursor[e.u]++] = {e.v, id};
    incidences_[cursor[e.v]++] = {e.u, id};
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto first = incidences_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
    auto last = incidences_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
    std::sort(first, last, [](const Incidence& a, const Incidence& b) {
      return a.node < b.node;
    });
    if (std::adjacent_find(first, last, [](const Incidence& a,
                                           const Incidence& b) {
          return a.node == b.node;
        }) != last) {
      throw Error(ErrorKind::kInvalidArgument,
                  "network: parallel edges are not supported");
    }
  }
}

std::optional<EdgeId> Network::find_edge(NodeId a, NodeId b) const {
  if (!contains(a) || !contains(b)) return std::nullopt;
  const auto adj = neighbors(a);
  auto it = std::lower_bound(
      adj.begin(), adj.end(), b,
      [](const Incidence& inc, NodeId target) { return inc.node < target; });
  if (it != adj.end() && it->node == b) return it->edge;
  return std::nullopt;
}

int Network::count_components() const {
  const auto n = num_nodes();
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack;
  int components = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    ++components;
    seen[start] = 1;
    stack.push_back(static_cast<NodeId>(start));
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (const Incidence& inc : neighbors(u)) {
        if (!seen[inc.node]) {
          seen[inc.node] = 1;
          stack.push_back(inc.node);
        }
      }
    }
  }
  return components;
}

NodeId Network::nearest_node(Point p) const {
  if (positions_.empty()) {
    throw Error(ErrorKind::kEmptyDomain, "network has no nodes");
  }
  NodeId best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    const double d = distance(p, positions_[i]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<NodeId>(i);
    }
  }
  return best;
}

}  // namespace congest
