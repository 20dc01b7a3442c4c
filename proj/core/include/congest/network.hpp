#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace congest {

using NodeId = std::int32_t;
using EdgeId = std::int32_t;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b);

// Undirected edge. `length` is the euclidean length of the segment joining
// the endpoints; `width` is the corridor width that converts edge flow
// (mass) into an intensity density (mass per unit length).
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double length = 0.0;
  double width = 0.0;
};

struct Incidence {
  NodeId node;
  EdgeId edge;
};

// Weighted undirected simple graph embedded in the plane. Every node carries
// the area of the region it represents (a grid cell, or a user-supplied
// value for hand-built networks). Immutable after construction.
class Network {
 public:
  Network() = default;
  Network(std::vector<Point> positions, std::vector<double> areas,
          std::vector<Edge> edges);

  std::size_t num_nodes() const { return positions_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  Point position(NodeId n) const { return positions_[n]; }
  double area(NodeId n) const { return areas_[n]; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Point> positions() const { return positions_; }
  std::span<const double> areas() const { return areas_; }

  std::span<const Incidence> neighbors(NodeId n) const {
    return {incidences_.data() + offsets_[n],
            incidences_.data() + offsets_[n + 1]};
  }

  std::optional<EdgeId> find_edge(NodeId a, NodeId b) const;
  bool contains(NodeId n) const {
    return n >= 0 && static_cast<std::size_t>(n) < positions_.size();
  }

  // Number of connected components (0 for an empty network).
  int count_components() const;

  // Nearest node by euclidean distance; ties go to the lowest id.
  NodeId nearest_node(Point p) const;

 private:
  std::vector<Point> positions_;
  std::vector<double> areas_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Incidence> incidences_;
};

}  // namespace congest
