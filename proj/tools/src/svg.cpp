#include "congest/cli/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "congest/cli/format.hpp"

namespace congest::cli {

namespace {

struct Rgb {
  double r, g, b;
};

constexpr std::array<Rgb, 8> kRamp = {{{68, 1, 84},
                                       {70, 50, 126},
                                       {54, 92, 141},
                                       {39, 127, 142},
                                       {31, 161, 135},
                                       {74, 193, 109},
                                       {160, 218, 57},
                                       {253, 231, 37}}};

std::string color_at(double t) {
  t = std::clamp(t, 0.0, 1.0) * (kRamp.size() - 1);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(t), kRamp.size() - 2);
  const double s = t - k;
  const Rgb& a = kRamp[k];
  const Rgb& b = kRamp[k + 1];
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(a.r + s * (b.r - a.r))),
                static_cast<int>(std::lround(a.g + s * (b.g - a.g))),
                static_cast<int>(std::lround(a.b + s * (b.b - a.b))));
  return buf;
}

}  // namespace

void write_density_svg(std::ostream& out, const GridDomain& grid,
                       const IntensityField& field, const PathFlow& flow,
                       int max_paths) {
  const Network& net = grid.network();
  const auto density = cell_density(net, field);
  const double lo = density.empty() ? 0.0 : *std::min_element(density.begin(), density.end());
  const double hi = density.empty() ? 0.0 : *std::max_element(density.begin(), density.end());

  const double cell = std::max(1.0, 640.0 / std::max(grid.nx(), grid.ny()));
  const double width = cell * grid.nx();
  const double height = cell * grid.ny();
  const double footer = 24.0;
  const Rect b = grid.bounds();
  const auto px = [&](Point p) {
    return std::pair{(p.x - b.x0) / grid.spacing() * cell,
                     height - (p.y - b.y0) / grid.spacing() * cell};
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height + footer << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"#d9d9d9\"/>\n";
  for (NodeId n = 0; n < static_cast<NodeId>(net.num_nodes()); ++n) {
    const CellIndex c = grid.cell_of(n);
    const double t = hi > lo ? (density[n] - lo) / (hi - lo) : 0.0;
    out << "<rect x=\"" << c.i * cell << "\" y=\"" << height - (c.j + 1) * cell
        << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\""
        << color_at(t) << "\"/>\n";
  }

  std::vector<std::size_t> order(flow.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return flow.entries()[x].mass > flow.entries()[y].mass;
  });
  order.resize(std::min<std::size_t>(order.size(), std::max(0, max_paths)));
  const double top = order.empty() ? 1.0 : flow.entries()[order.front()].mass;
  for (std::size_t k : order) {
    const WeightedPath& p = flow.entries()[k];
    if (p.nodes.size() < 2) continue;
    out << "<polyline fill=\"none\" stroke=\"#ffffff\" stroke-width=\"1.5\" "
           "stroke-opacity=\""
        << std::max(0.15, p.mass / top) << "\" points=\"";
    for (NodeId n : p.nodes) {
      const auto [x, y] = px(net.position(n));
      out << x << ',' << y << ' ';
    }
    out << "\"/>\n";
  }

  out << "<text x=\"4\" y=\"" << height + 17
      << "\" font-family=\"monospace\" font-size=\"13\">min "
      << format_double(lo) << "  max " << format_double(hi) << "</text>\n";
  out << "</svg>\n";
}

}  // namespace congest::cli
