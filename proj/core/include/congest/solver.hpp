#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "congest/congestion_model.hpp"
#include "congest/geodesics.hpp"
#include "congest/measures.hpp"
#include "congest/network.hpp"
#include "congest/objective.hpp"
#include "congest/path_flow.hpp"

namespace congest {

struct Problem {
  Network network;
  DiscreteMeasure mu0;
  DiscreteMeasure mu1;
  CongestionModel model{1.5, 1.0, 0.05, CongestionMode::kEquilibrium};
  Discretization discretization = Discretization::kCell;
  // When set, only the routing is optimized; the coupling is this plan.
  std::optional<TransportPlan> fixed_plan;

  // Balanced marginals on existing nodes, connected network, and a fixed
  // plan (if any) coupling mu0 and mu1.
  void validate() const;
};

struct SolverConfig {
  int max_iters = 500;
  double gap_tol = 1e-3;
  double line_search_tol = 1e-12;
  double path_prune_mass = 1e-12;
  // Path equilibration sweeps after each Frank-Wolfe step: mass moves
  // between paths of the same origin-destination pair toward the geodesic.
  int inner_sweeps = 1;
  // After convergence, sweeps that shift mass from costlier paths of each
  // origin-destination pair onto its geodesic until every stored path is
  // within gap_tol of the geodesic cost. 0 disables.
  int equilibrate_sweeps = 100;
  // Seeds a shuffled tie-break among equal-cost labels; unset means ties go
  // to the lowest node id.
  std::optional<std::uint64_t> seed;

  void validate() const;
};

struct IterationRecord {
  int iter = 0;
  double primal = 0.0;
  double dual = 0.0;       // this iteration's Frank-Wolfe lower bound
  double best_dual = 0.0;  // best bound so far
  double gap = 0.0;        // (primal - best_dual) / primal
  double theta = 0.0;
  double mk_value = 0.0;   // W(xi_k)
  double fenchel_dual = 0.0;  // W(xi_k) - sum A H*(xi_k)
  double pairing = 0.0;       // <xi_k, i_k>
};

struct EquilibriumGaps {
  double wardrop_gap = 0.0;
  // Absent in fixed-plan mode, where the plan is not optimized.
  std::optional<double> mk_gap;
};

struct SolverReport {
  int iterations = 0;
  std::vector<IterationRecord> history;
  PathFlow flow;
  IntensityField intensity;
  TransportPlan plan;
  MetricField xi;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  EquilibriumGaps equilibrium;
  bool converged = false;
  int equilibrate_sweeps = 0;  // sweeps actually run
  std::vector<std::string> warnings;
};

double primal_objective(const Problem& problem, const IntensityField& field);

// xi = H'(density) for the problem's discretization.
MetricField xi_from_intensity(const Problem& problem,
                              const IntensityField& field);

struct LinearizedStep {
  PathFlow flow;
  TransportPlan plan;
  double mk_value = 0.0;  // sum gamma c_xi = sum mass L_xi(geodesic)
};

// Minimizes <xi, i_Q> over admissible Q: optimal plan for c_xi (or the fixed
// plan), each entry routed in full along one geodesic.
LinearizedStep linearized_oracle(const Problem& problem, const MetricField& xi,
                                 const TieBreak* tie = nullptr);

// Exact minimizer over [0, 1] of the objective along (1 - t) current + t
// candidate, by bisection on the derivative.
double line_search(const Problem& problem, const IntensityField& current,
                   const IntensityField& candidate, double tol);

// Relative excess of used paths over geodesic cost, and relative
// suboptimality of the induced plan for c_xi.
EquilibriumGaps wardrop_check(const Problem& problem, const PathFlow& flow,
                              const MetricField& xi);
// Same, with the plan given explicitly instead of read off the flow.
EquilibriumGaps strategy_gaps(const Problem& problem, const PathFlow& flow,
                              const TransportPlan& plan, const MetricField& xi);

SolverReport fw_solve(const Problem& problem, const SolverConfig& config);

}  // namespace congest
