#include "congest/grid.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "congest/error.hpp"

namespace congest {

CellMask rectangle_mask(Rect r) {
  return [r](Point p) { return r.contains(p); };
}

CellMask polygon_mask(std::vector<Point> vertices) {
  if (vertices.size() < 3) {
    throw Error(ErrorKind::kInvalidArgument,
                "polygon mask needs at least three vertices");
  }
  return [poly = std::move(vertices)](Point p) {
    constexpr double kEps = 1e-12;
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t a = 0, b = n - 1; a < n; b = a++) {
      const Point pa = poly[a];
      const Point pb = poly[b];
      // On-segment test first so the boundary counts as inside.
      const double cross =
          (pb.x - pa.x) * (p.y - pa.y) - (pb.y - pa.y) * (p.x - pa.x);
      if (std::abs(cross) <= kEps &&
          p.x >= std::min(pa.x, pb.x) - kEps &&
          p.x <= std::max(pa.x, pb.x) + kEps &&
          p.y >= std::min(pa.y, pb.y) - kEps &&
          p.y <= std::max(pa.y, pb.y) + kEps) {
        return true;
      }
      if ((pa.y > p.y) != (pb.y > p.y)) {
        const double x_cross =
            pa.x + (p.y - pa.y) * (pb.x - pa.x) / (pb.y - pa.y);
        if (p.x < x_cross) inside = !inside;
      }
    }
    return inside;
  };
}

bool GridDomain::active(int i, int j) const {
  return node_of_cell(i, j).has_value();
}

std::optional<NodeId> GridDomain::node_of_cell(int i, int j) const {
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return std::nullopt;
  const NodeId n = node_index_[static_cast<std::size_t>(j) * nx_ + i];
  if (n < 0) return std::nullopt;
  return n;
}

Point GridDomain::cell_center(int i, int j) const {
  return {bounds_.x0 + (i + 0.5) * h_, bounds_.y0 + (j + 0.5) * h_};
}

NodeId GridDomain::node_at(Point p) const {
  const int ci = static_cast<int>(std::floor((p.x - bounds_.x0) / h_));
  const int cj = static_cast<int>(std::floor((p.y - bounds_.y0) / h_));
  NodeId best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  // Any node within distance h has its cell within two cells of p's cell.
  for (int j = cj - 2; j <= cj + 2; ++j) {
    for (int i = ci - 2; i <= ci + 2; ++i) {
      const auto n = node_of_cell(i, j);
      if (!n) continue;
      const double d = distance(p, network_.position(*n));
      if (d < best_d || (d == best_d && *n < best)) {
        best_d = d;
        best = *n;
      }
    }
  }
  if (best < 0 || best_d > h_) {
    throw Error(ErrorKind::kOutsideDomain,
                "point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                    ") is outside the domain");
  }
  return best;
}

double GridDomain::active_area() const {
  return static_cast<double>(num_nodes()) * cell_area();
}

GridDomain build_grid(Rect bounds, int resolution, const CellMask& mask) {
  if (resolution < 1) {
    throw Error(ErrorKind::kInvalidArgument, "resolution must be at least 1");
  }
  if (!(bounds.width() > 0.0) || !(bounds.height() > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "bounds must have positive size");
  }
  GridDomain grid;
  grid.bounds_ = bounds;
  grid.h_ = bounds.width() / resolution;
  grid.nx_ = resolution;
  const double rows = bounds.height() / grid.h_;
  grid.ny_ = static_cast<int>(std::lround(rows));
  if (grid.ny_ < 1 || std::abs(rows - grid.ny_) > 1e-9 * rows) {
    throw Error(ErrorKind::kInvalidArgument,
                "bounds height is not a whole number of cells at this "
                "resolution");
  }

  const auto cell_count = static_cast<std::size_t>(grid.nx_) * grid.ny_;
  grid.node_index_.assign(cell_count, -1);
  std::vector<Point> positions;
  for (int j = 0; j < grid.ny_; ++j) {
    for (int i = 0; i < grid.nx_; ++i) {
      const Point c = grid.cell_center(i, j);
      if (mask && !mask(c)) continue;
      grid.node_index_[static_cast<std::size_t>(j) * grid.nx_ + i] =
          static_cast<NodeId>(positions.size());
      positions.push_back(c);
      grid.cells_.push_back({i, j});
    }
  }
  if (positions.empty()) {
    throw Error(ErrorKind::kEmptyDomain, "mask selects no cell");
  }

  const double h = grid.h_;
  const double diag = h * std::sqrt(2.0);
  constexpr int kOffsets[4][2] = {{1, 0}, {0, 1}, {1, 1}, {-1, 1}};
  std::vector<Edge> edges;
  for (std::size_t n = 0; n < grid.cells_.size(); ++n) {
    const CellIndex c = grid.cells_[n];
    for (const auto& off : kOffsets) {
      const auto m = grid.node_of_cell(c.i + off[0], c.j + off[1]);
      if (!m) continue;
      const bool axis = off[0] == 0 || off[1] == 0;
      edges.push_back({static_cast<NodeId>(n), *m, axis ? h : diag, h});
    }
  }
  std::vector<double> areas(positions.size(), h * h);
  grid.network_ = Network(std::move(positions), std::move(areas),
                          std::move(edges));
  if (grid.network_.count_components() > 1) {
    throw Error(ErrorKind::kDisconnectedDomain,
                "active cells do not form a connected domain");
  }
  return grid;
}

}  // namespace congest
