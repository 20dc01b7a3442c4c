#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "congest/network.hpp"

namespace congest {

struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool contains(Point p) const {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
  }
};

// Predicate selecting the cells (by their centers) that belong to the domain.
using CellMask = std::function<bool(Point)>;

CellMask rectangle_mask(Rect r);
// Closed polygon; points on the boundary count as inside.
CellMask polygon_mask(std::vector<Point> vertices);

struct CellIndex {
  int i = 0;
  int j = 0;
  friend bool operator==(CellIndex, CellIndex) = default;
};

// Uniform square-cell discretization of a planar domain. Active cells become
// nodes located at the cell centers; nodes are joined to their active
// 8-neighbors. Axis edges have length h, diagonal edges h*sqrt(2); both carry
// corridor width h. Node ids follow row-major cell order (j outer, i inner).
class GridDomain {
 public:
  const Network& network() const { return network_; }

  Rect bounds() const { return bounds_; }
  double spacing() const { return h_; }
  double cell_area() const { return h_ * h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t num_nodes() const { return network_.num_nodes(); }

  bool active(int i, int j) const;
  std::optional<NodeId> node_of_cell(int i, int j) const;
  CellIndex cell_of(NodeId n) const { return cells_[n]; }
  Point cell_center(int i, int j) const;

  // Nearest active node; ties go to the lowest id. Throws OutsideDomain when
  // no active node lies within one grid spacing of `p`.
  NodeId node_at(Point p) const;

  double active_area() const;

 private:
  friend GridDomain build_grid(Rect, int, const CellMask&);

  Rect bounds_;
  double h_ = 0.0;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<NodeId> node_index_;  // per cell, -1 when inactive
  std::vector<CellIndex> cells_;    // per node
  Network network_;
};

// `resolution` is the number of cells along the x side of `bounds`; the cell
// count along y is height/h and must come out integral.
GridDomain build_grid(Rect bounds, int resolution, const CellMask& mask = {});

}  // namespace congest
