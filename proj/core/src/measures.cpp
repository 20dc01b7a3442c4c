#include "congest/measures.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "congest/error.hpp"

namespace congest {

DiscreteMeasure::DiscreteMeasure(const std::map<NodeId, double>& weights) {
  for (const auto& [node, mass] : weights) add(node, mass);
}

void DiscreteMeasure::add(NodeId node, double mass) {
  if (!(mass >= 0.0) || !std::isfinite(mass)) {
    throw Error(ErrorKind::kInvalidArgument,
                "measure weights must be finite and nonnegative");
  }
  if (mass == 0.0) return;
  weights_[node] += mass;
}

double DiscreteMeasure::mass(NodeId node) const {
  const auto it = weights_.find(node);
  return it == weights_.end() ? 0.0 : it->second;
}

double DiscreteMeasure::total() const {
  double sum = 0.0;
  for (const auto& [node, mass] : weights_) sum += mass;
  return sum;
}

DiscreteMeasure DiscreteMeasure::truncated(double threshold) const {
  DiscreteMeasure out;
  for (const auto& [node, mass] : weights_) {
    if (mass > threshold) out.weights_.emplace(node, mass);
  }
  return out;
}

double relative_distance(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  double worst = 0.0;
  for (const auto& [node, mass] : a.weights()) {
    worst = std::max(worst, std::abs(mass - b.mass(node)));
  }
  for (const auto& [node, mass] : b.weights()) {
    if (a.mass(node) == 0.0) worst = std::max(worst, mass);
  }
  const double scale = std::max(a.total(), b.total());
  return scale > 0.0 ? worst / scale : worst;
}

DiscreteMeasure normalize(const DiscreteMeasure& m) {
  const double total = m.total();
  if (!(total > 0.0)) {
    throw Error(ErrorKind::kZeroMass, "cannot normalize a zero measure");
  }
  DiscreteMeasure out;
  for (const auto& [node, mass] : m.weights()) out.add(node, mass / total);
  return out;
}

TransportPlan::TransportPlan(std::vector<PlanEntry> entries)
    : entries_(std::move(entries)) {
  std::set<std::pair<NodeId, NodeId>> keys;
  for (const PlanEntry& e : entries_) {
    if (!(e.mass > 0.0) || !std::isfinite(e.mass)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "plan entries must carry positive finite mass");
    }
    if (!keys.emplace(e.source, e.target).second) {
      throw Error(ErrorKind::kInvalidArgument,
                  "duplicate plan entry (" + std::to_string(e.source) + ", " +
                      std::to_string(e.target) + ")");
    }
  }
}

double TransportPlan::total() const {
  double sum = 0.0;
  for (const PlanEntry& e : entries_) sum += e.mass;
  return sum;
}

std::pair<DiscreteMeasure, DiscreteMeasure> marginals(
    const TransportPlan& plan) {
  DiscreteMeasure left;
  DiscreteMeasure right;
  for (const PlanEntry& e : plan.entries()) {
    left.add(e.source, e.mass);
    right.add(e.target, e.mass);
  }
  return {left, right};
}

TransportPlan product_plan(const DiscreteMeasure& mu0,
                           const DiscreteMeasure& mu1) {
  const double total = mu1.total();
  if (!(total > 0.0)) throw Error(ErrorKind::kZeroMass, "empty target measure");
  std::vector<PlanEntry> entries;
  for (const auto& [x, mx] : mu0.weights()) {
    for (const auto& [y, my] : mu1.weights()) {
      entries.push_back({x, y, mx * my / total});
    }
  }
  return TransportPlan(std::move(entries));
}

TransportPlan diagonal_plan(const DiscreteMeasure& mu) {
  std::vector<PlanEntry> entries;
  for (const auto& [x, m] : mu.weights()) entries.push_back({x, x, m});
  return TransportPlan(std::move(entries));
}

void require_balanced(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1,
                      double rel_tol) {
  const double a = mu0.total();
  const double b = mu1.total();
  if (!(a > 0.0) || !(b > 0.0)) {
    throw Error(ErrorKind::kZeroMass, "marginals must carry positive mass");
  }
  if (std::abs(a - b) > rel_tol * std::max(a, b)) {
    throw Error(ErrorKind::kUnbalancedMarginals,
                "marginal totals differ: " + std::to_string(a) + " vs " +
                    std::to_string(b));
  }
}

void require_marginals(const TransportPlan& plan, const DiscreteMeasure& mu0,
                       const DiscreteMeasure& mu1, double rel_tol) {
  const auto [left, right] = marginals(plan);
  if (relative_distance(left, mu0) > rel_tol ||
      relative_distance(right, mu1) > rel_tol) {
    throw Error(ErrorKind::kInconsistentMarginals,
                "transport plan marginals do not match the prescribed "
                "measures");
  }
}

namespace {

// Splits [a, b] at every grid line it crosses and credits each piece to the
// cell(s) containing its midpoint.
DiscreteMeasure crossing_lengths(const GridDomain& grid, Point a, Point b) {
  const Rect box = grid.bounds();
  const double h = grid.spacing();
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;

  std::vector<double> ts{0.0, 1.0};
  auto add_crossings = [&](double from, double delta, double origin) {
    if (delta == 0.0) return;
    const double lo = std::min(from, from + delta);
    const double hi = std::max(from, from + delta);
    for (long k = static_cast<long>(std::ceil((lo - origin) / h));
         origin + k * h <= hi; ++k) {
      const double t = (origin + k * h - from) / delta;
      if (t > 0.0 && t < 1.0) ts.push_back(t);
    }
  };
  add_crossings(a.x, dx, box.x0);
  add_crossings(a.y, dy, box.y0);
  std::sort(ts.begin(), ts.end());

  const double seg_len = std::hypot(dx, dy);
  DiscreteMeasure out;
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    const double piece = (ts[k + 1] - ts[k]) * seg_len;
    if (piece <= 0.0) continue;
    const double tm = 0.5 * (ts[k] + ts[k + 1]);
    const double fx = (a.x + tm * dx - box.x0) / h;
    const double fy = (a.y + tm * dy - box.y0) / h;
    // Cell candidates along each axis: one, or two when the midpoint sits on
    // a grid line.
    auto candidates = [](double f) {
      const double r = std::round(f);
      if (std::abs(f - r) <= 1e-9) {
        return std::vector<int>{static_cast<int>(r) - 1, static_cast<int>(r)};
      }
      return std::vector<int>{static_cast<int>(std::floor(f))};
    };
    std::vector<NodeId> owners;
    for (int j : candidates(fy)) {
      for (int i : candidates(fx)) {
        if (const auto n = grid.node_of_cell(i, j)) owners.push_back(*n);
      }
    }
    for (NodeId n : owners) {
      out.add(n, piece / static_cast<double>(owners.size()));
    }
  }
  return out;
}

}  // namespace

DiscreteMeasure segment_measure(const GridDomain& grid, Point a, Point b) {
  if (a.x == b.x && a.y == b.y) {
    DiscreteMeasure dirac;
    dirac.add(grid.node_at(a), 1.0);
    return dirac;
  }
  const DiscreteMeasure raw = crossing_lengths(grid, a, b);
  if (raw.empty()) {
    throw Error(ErrorKind::kOutsideDomain,
                "segment does not cross any active cell");
  }
  return normalize(raw);
}

DiscreteMeasure uniform_measure(const GridDomain& grid) {
  DiscreteMeasure m;
  for (std::size_t n = 0; n < grid.num_nodes(); ++n) {
    m.add(static_cast<NodeId>(n), grid.cell_area());
  }
  return normalize(m);
}

DiscreteMeasure gaussian_measure(const GridDomain& grid, Point center,
                                 double sigma) {
  if (!(sigma > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "gaussian sigma must be positive");
  }
  DiscreteMeasure m;
  const Network& net = grid.network();
  for (std::size_t n = 0; n < net.num_nodes(); ++n) {
    const double d = distance(net.position(static_cast<NodeId>(n)), center);
    m.add(static_cast<NodeId>(n),
          std::exp(-0.5 * d * d / (sigma * sigma)) * grid.cell_area());
  }
  return normalize(m);
}

DiscreteMeasure point_measure(
    const GridDomain& grid, const std::vector<std::pair<Point, double>>& atoms) {
  DiscreteMeasure m;
  for (const auto& [p, mass] : atoms) m.add(grid.node_at(p), mass);
  return m;
}

}  // namespace congest
