#pragma once

#include <map>
#include <utility>
#include <vector>

#include "congest/grid.hpp"
#include "congest/network.hpp"

namespace congest {

// Nonnegative masses on nodes. Zero weights are not stored.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  explicit DiscreteMeasure(const std::map<NodeId, double>& weights);

  void add(NodeId node, double mass);

  double mass(NodeId node) const;
  double total() const;
  bool empty() const { return weights_.empty(); }
  std::size_t size() const { return weights_.size(); }
  const std::map<NodeId, double>& weights() const { return weights_; }

  // Drops atoms with mass at or below `threshold`.
  DiscreteMeasure truncated(double threshold) const;

  friend bool operator==(const DiscreteMeasure&,
                         const DiscreteMeasure&) = default;

 private:
  std::map<NodeId, double> weights_;
};

// Largest per-atom difference divided by max(total(a), total(b)).
double relative_distance(const DiscreteMeasure& a, const DiscreteMeasure& b);

DiscreteMeasure normalize(const DiscreteMeasure& m);

struct PlanEntry {
  NodeId source = 0;
  NodeId target = 0;
  double mass = 0.0;
};

// Coupling between two node measures; (source, target) keys are unique.
class TransportPlan {
 public:
  TransportPlan() = default;
  explicit TransportPlan(std::vector<PlanEntry> entries);

  const std::vector<PlanEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  double total() const;

 private:
  std::vector<PlanEntry> entries_;
};

std::pair<DiscreteMeasure, DiscreteMeasure> marginals(const TransportPlan& plan);

TransportPlan product_plan(const DiscreteMeasure& mu0,
                           const DiscreteMeasure& mu1);
TransportPlan diagonal_plan(const DiscreteMeasure& mu);

inline constexpr double kBalanceTolerance = 1e-9;

// Throws UnbalancedMarginals when total masses differ beyond `rel_tol`.
void require_balanced(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1,
                      double rel_tol = kBalanceTolerance);

// Throws InconsistentMarginals when the plan does not couple mu0 and mu1.
void require_marginals(const TransportPlan& plan, const DiscreteMeasure& mu0,
                       const DiscreteMeasure& mu1,
                       double rel_tol = kBalanceTolerance);

// Builtin generators on grids.

// Mass spread over the cells crossed by the segment [a, b], proportional to
// the crossing length. Pieces lying on a cell boundary are shared equally by
// the active cells on both sides. A degenerate segment gives a Dirac mass at
// node_at(a).
DiscreteMeasure segment_measure(const GridDomain& grid, Point a, Point b);
DiscreteMeasure uniform_measure(const GridDomain& grid);
DiscreteMeasure gaussian_measure(const GridDomain& grid, Point center,
                                 double sigma);
// Atoms snapped to node_at(point); masses are kept as given.
DiscreteMeasure point_measure(const GridDomain& grid,
                              const std::vector<std::pair<Point, double>>& atoms);

}  // namespace congest
