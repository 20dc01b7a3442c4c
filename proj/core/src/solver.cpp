#include "congest/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <unordered_map>

#include "congest/error.hpp"
#include "congest/mk_transport.hpp"

namespace congest {

namespace {

constexpr double kGapFloor = 1e-12;

void require_nodes(const Network& net, const DiscreteMeasure& m,
                   const char* name) {
  for (const auto& [node, mass] : m.weights()) {
    if (!net.contains(node)) {
      throw Error(ErrorKind::kInvalidArgument,
                  std::string(name) + " has an atom on unknown node " +
                      std::to_string(node));
    }
  }
}

std::vector<NodeId> support(const DiscreteMeasure& m) {
  const DiscreteMeasure kept = m.truncated(kSupportTruncation);
  std::vector<NodeId> out;
  for (const auto& [node, mass] : kept.weights()) {
    out.push_back(node);
  }
  return out;
}

// Relative path excess below which inner sweeps leave a path alone.
constexpr double kInnerThreshold = 1e-12;

// Sparse unit-density change per unit of mass routed along a path.
void add_path_units(const Network& net, const Objective& objective,
                    const GridPath& path, double sign,
                    std::unordered_map<std::size_t, double>& dz) {
  for (std::size_t k = 1; k < path.size(); ++k) {
    const EdgeId e = *net.find_edge(path[k - 1], path[k]);
    const Edge& edge = net.edge(e);
    if (objective.discretization() == Discretization::kCell) {
      const double half = 0.5 * edge.length * sign;
      dz[edge.u] += half / objective.unit_area(edge.u);
      dz[edge.v] += half / objective.unit_area(edge.v);
    } else {
      dz[e] += sign / edge.width;
    }
  }
}

// Mass in [0, limit] moved along dz that minimizes the objective.
double pair_step(const Objective& objective, const std::vector<double>& z,
                 const std::unordered_map<std::size_t, double>& dz,
                 double limit, double tol) {
  const CongestionModel& model = objective.model();
  auto slope = [&](double t) {
    double sum = 0.0;
    for (const auto& [k, d] : dz) {
      if (d == 0.0) continue;
      sum += objective.unit_area(k) * model.h_prime(std::max(0.0, z[k] + t * d)) * d;
    }
    return sum;
  };
  if (slope(0.0) >= 0.0) return 0.0;
  if (slope(limit) <= 0.0) return limit;
  double lo = 0.0;
  double hi = limit;
  while (hi - lo > tol * limit) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double relative_gap(double primal, double dual) {
  if (!(primal > 0.0)) return 0.0;
  return std::max(0.0, primal - dual) / primal;
}

}  // namespace

void Problem::validate() const {
  if (network.num_nodes() == 0) {
    throw Error(ErrorKind::kEmptyDomain, "problem network has no nodes");
  }
  if (network.count_components() > 1) {
    throw Error(ErrorKind::kDisconnectedDomain, "problem network is disconnected");
  }
  require_nodes(network, mu0, "mu0");
  require_nodes(network, mu1, "mu1");
  require_balanced(mu0, mu1);
  if (fixed_plan) {
    for (const PlanEntry& e : fixed_plan->entries()) {
      if (!network.contains(e.source) || !network.contains(e.target)) {
        throw Error(ErrorKind::kInvalidArgument,
                    "fixed plan references an unknown node");
      }
    }
    require_marginals(*fixed_plan, mu0, mu1);
  }
}

void SolverConfig::validate() const {
  if (max_iters < 1) {
    throw Error(ErrorKind::kInvalidArgument, "max_iters must be positive");
  }
  if (inner_sweeps < 0 || equilibrate_sweeps < 0) {
    throw Error(ErrorKind::kInvalidArgument, "sweep counts must be nonnegative");
  }
  if (!(gap_tol > 0.0) || !(line_search_tol > 0.0) ||
      !(path_prune_mass > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "tolerances must be positive");
  }
}

double primal_objective(const Problem& problem, const IntensityField& field) {
  const Objective objective(problem.network, problem.model,
                            problem.discretization);
  return objective.value(field.edge_flow);
}

MetricField xi_from_intensity(const Problem& problem,
                              const IntensityField& field) {
  const Objective objective(problem.network, problem.model,
                            problem.discretization);
  return objective.metric(field.edge_flow);
}

LinearizedStep linearized_oracle(const Problem& problem, const MetricField& xi,
                                 const TieBreak* tie) {
  const Network& net = problem.network;
  std::vector<NodeId> sources;
  if (problem.fixed_plan) {
    for (const PlanEntry& e : problem.fixed_plan->entries()) {
      sources.push_back(e.source);
    }
  } else {
    sources = support(problem.mu0);
  }
  const CostTable table = shortest_costs(net, xi.edge, sources, tie);

  LinearizedStep step;
  if (problem.fixed_plan) {
    step.plan = *problem.fixed_plan;
  } else {
    step.plan = solve_mk(
        [&](NodeId x, NodeId y) { return table.cost(x, y); }, problem.mu0,
        problem.mu1).plan;
  }
  for (const PlanEntry& e : step.plan.entries()) {
    step.flow.add(extract_geodesic(table, e.source, e.target), e.mass);
    step.mk_value += e.mass * table.cost(e.source, e.target);
  }
  return step;
}

double line_search(const Problem& problem, const IntensityField& current,
                   const IntensityField& candidate, double tol) {
  const Objective objective(problem.network, problem.model,
                            problem.discretization);
  const auto z0 = objective.densities(current.edge_flow);
  const auto z1 = objective.densities(candidate.edge_flow);
  if (objective.slope(z0, z1, 0.0) >= 0.0) return 0.0;
  if (objective.slope(z0, z1, 1.0) <= 0.0) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (objective.slope(z0, z1, mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

EquilibriumGaps wardrop_check(const Problem& problem, const PathFlow& flow,
                              const MetricField& xi) {
  return strategy_gaps(problem, flow, decompose(flow).plan, xi);
}

EquilibriumGaps strategy_gaps(const Problem& problem, const PathFlow& flow,
                              const TransportPlan& plan, const MetricField& xi) {
  if (flow.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "wardrop check on an empty flow");
  }
  const Network& net = problem.network;
  std::set<NodeId> source_set;
  for (const auto& p : flow.entries()) source_set.insert(p.nodes.front());
  for (const PlanEntry& e : plan.entries()) source_set.insert(e.source);
  if (!problem.fixed_plan) {
    for (NodeId s : support(problem.mu0)) source_set.insert(s);
  }
  const std::vector<NodeId> sources(source_set.begin(), source_set.end());
  const CostTable table = shortest_costs(net, xi.edge, sources);

  EquilibriumGaps gaps;
  for (const auto& p : flow.entries()) {
    const double c = table.cost(p.nodes.front(), p.nodes.back());
    const double excess = path_cost(net, p.nodes, xi.edge) - c;
    gaps.wardrop_gap =
        std::max(gaps.wardrop_gap, excess / std::max(c, kGapFloor));
  }

  if (!problem.fixed_plan) {
    const auto cost = [&](NodeId x, NodeId y) { return table.cost(x, y); };
    double induced_value = 0.0;
    for (const PlanEntry& e : plan.entries()) {
      induced_value += e.mass * cost(e.source, e.target);
    }
    const double optimum = solve_mk(cost, problem.mu0, problem.mu1).value;
    gaps.mk_gap = std::max(0.0, induced_value - optimum) /
                  std::max(optimum, kGapFloor);
  }
  return gaps;
}

SolverReport fw_solve(const Problem& problem, const SolverConfig& config) {
  problem.validate();
  config.validate();
  const Network& net = problem.network;
  const Objective objective(net, problem.model, problem.discretization);
  const TieBreak tie = config.seed
                           ? TieBreak::shuffled(net.num_nodes(), *config.seed)
                           : TieBreak::by_id(net.num_nodes());

  SolverReport report;
  if (problem.model.outside_continuum_theory()) {
    report.warnings.push_back(
        "q >= 2: the continuum optimality theory assumes q < 2; the discrete "
        "problem is still solved");
  }

  // Start from the all-or-nothing assignment at zero intensity.
  const std::vector<double> zero(net.num_edges(), 0.0);
  LinearizedStep start = linearized_oracle(problem, objective.metric(zero), &tie);

  std::vector<WeightedPath> paths;
  std::unordered_map<GridPath, std::size_t, PathHash> index;
  auto absorb = [&](const PathFlow& incoming, double weight) {
    for (const auto& p : incoming.entries()) {
      auto [it, inserted] = index.emplace(p.nodes, paths.size());
      if (inserted) {
        paths.push_back({p.nodes, weight * p.mass});
      } else {
        paths[it->second].mass += weight * p.mass;
      }
    }
  };
  absorb(start.flow, 1.0);
  std::vector<double> flow = intensity_from_paths(net, start.flow).edge_flow;

  // One Gauss-Seidel sweep of path equilibration: within each
  // origin-destination pair, mass moves from any path costing more than
  // (1 + threshold) times the geodesic onto the geodesic, by exact line
  // search. Every move is a feasible descent step, so the primal only
  // improves and dual bounds stay valid. Returns whether any path qualified.
  auto equilibrate = [&](double threshold) {
    std::vector<double> z = objective.densities(flow);
    const MetricField xi = objective.metric(flow);
    std::set<NodeId> source_set;
    for (const auto& p : paths) source_set.insert(p.nodes.front());
    const std::vector<NodeId> sources(source_set.begin(), source_set.end());
    const CostTable table = shortest_costs(net, xi.edge, sources, &tie);
    bool dirty = false;
    const std::size_t stored = paths.size();
    for (std::size_t i = 0; i < stored; ++i) {
      const NodeId s = paths[i].nodes.front();
      const NodeId t = paths[i].nodes.back();
      const double c = table.cost(s, t);
      const double excess = path_cost(net, paths[i].nodes, xi.edge) - c;
      if (excess <= threshold * std::max(c, kGapFloor)) continue;
      dirty = true;
      GridPath geodesic = extract_geodesic(table, s, t);
      std::unordered_map<std::size_t, double> dz;
      add_path_units(net, objective, geodesic, 1.0, dz);
      add_path_units(net, objective, paths[i].nodes, -1.0, dz);
      const double moved =
          pair_step(objective, z, dz, paths[i].mass, config.line_search_tol);
      if (moved == 0.0) continue;
      for (const auto& [k, d] : dz) z[k] += moved * d;
      paths[i].mass = moved == paths[i].mass ? 0.0 : paths[i].mass - moved;
      auto [it, inserted] = index.emplace(geodesic, paths.size());
      if (inserted) {
        paths.push_back({std::move(geodesic), moved});
      } else {
        paths[it->second].mass += moved;
      }
    }
    if (dirty) {
      std::erase_if(paths, [&](const auto& p) {
        return p.mass < config.path_prune_mass;
      });
      index.clear();
      for (std::size_t i = 0; i < paths.size(); ++i) index.emplace(paths[i].nodes, i);
      PathFlow kept;
      for (const auto& p : paths) kept.add(p.nodes, p.mass);
      flow = intensity_from_paths(net, kept).edge_flow;
    }
    return dirty;
  };

  double best_dual = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < config.max_iters; ++k) {
    IterationRecord rec;
    rec.iter = k;
    rec.primal = objective.value(flow);
    const MetricField xi = objective.metric(flow);
    const LinearizedStep step = linearized_oracle(problem, xi, &tie);
    const IntensityField current = intensity_from_edge_flow(net, flow);
    rec.pairing = pairing(net, current, xi.edge);
    rec.mk_value = step.mk_value;
    rec.dual = rec.primal + step.mk_value - rec.pairing;
    rec.fenchel_dual = step.mk_value - objective.conjugate_term(xi);
    best_dual = std::max(best_dual, rec.dual);
    rec.best_dual = best_dual;
    rec.gap = relative_gap(rec.primal, best_dual);
    report.iterations = k + 1;

    if (rec.gap <= config.gap_tol) {
      report.converged = true;
      report.history.push_back(rec);
      break;
    }

    const IntensityField target = intensity_from_paths(net, step.flow);
    const double theta =
        line_search(problem, current, target, config.line_search_tol);
    rec.theta = theta;
    report.history.push_back(rec);
    if (theta == 0.0) continue;

    for (auto& p : paths) p.mass *= 1.0 - theta;
    absorb(step.flow, theta);
    for (std::size_t e = 0; e < flow.size(); ++e) {
      flow[e] = (1.0 - theta) * flow[e] + theta * target.edge_flow[e];
    }

    const bool prune = std::any_of(paths.begin(), paths.end(), [&](const auto& p) {
      return p.mass < config.path_prune_mass;
    });
    if (prune) {
      std::erase_if(paths, [&](const auto& p) {
        return p.mass < config.path_prune_mass;
      });
      index.clear();
      for (std::size_t i = 0; i < paths.size(); ++i) index.emplace(paths[i].nodes, i);
      PathFlow kept;
      for (const auto& p : paths) kept.add(p.nodes, p.mass);
      flow = intensity_from_paths(net, kept).edge_flow;
    }
    for (int sweep = 0; sweep < config.inner_sweeps; ++sweep) {
      if (!equilibrate(kInnerThreshold)) break;
    }
  }

  if (report.converged) {
    for (int k = 0; k < config.equilibrate_sweeps; ++k) {
      if (!equilibrate(config.gap_tol)) break;
      report.equilibrate_sweeps = k + 1;
    }
  }

  PathFlow final_flow;
  for (auto& p : paths) final_flow.add(std::move(p.nodes), p.mass);
  report.flow = std::move(final_flow);
  report.intensity = intensity_from_paths(net, report.flow);
  report.xi = objective.metric(report.intensity.edge_flow);
  report.plan = decompose(report.flow).plan;
  report.primal = objective.value(report.intensity.edge_flow);
  report.dual = best_dual;
  report.gap = relative_gap(report.primal, best_dual);
  report.equilibrium = wardrop_check(problem, report.flow, report.xi);
  return report;
}

}  // namespace congest
