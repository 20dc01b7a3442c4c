#include "congest/cli/commands.hpp"

#include <fstream>
#include <iostream>
#include <set>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "congest/cli/artifacts.hpp"
#include "congest/cli/oracle.hpp"
#include "congest/cli/svg.hpp"
#include "congest/error.hpp"
#include "congest/geodesics.hpp"

namespace congest::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorKind::kIO, "cannot create output directory " + dir.string() +
                                    (ec ? ": " + ec.message() : ""));
  }
}

std::ofstream open_out(const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw Error(ErrorKind::kIO, "cannot write " + file.string());
  out.precision(17);
  return out;
}

void finish(std::ofstream& out, const fs::path& file) {
  out.flush();
  if (!out) throw Error(ErrorKind::kIO, "write failed for " + file.string());
}

template <typename Writer>
void emit(const fs::path& file, Writer&& write) {
  std::ofstream out = open_out(file);
  write(out);
  finish(out, file);
}

void emit_json(const fs::path& file, const json& value) {
  emit(file, [&](std::ostream& out) { out << value.dump(2) << '\n'; });
}

}  // namespace

int run_solve(const RunConfig& config) {
  const RunDomain domain = build_domain(config.domain);
  const Problem problem = build_problem(config, domain);
  const fs::path& dir = config.output.dir;
  prepare_dir(dir);

  if (config.output.holder) {
    const HolderDiagnostic d =
        holder_diagnostic(problem.network, config.q, config.solver.seed.value_or(0));
    spdlog::info("holder diagnostic: alpha {} max ratio {} over {} samples",
                 d.alpha, d.max_ratio, d.samples);
  }

  const SolverReport report = fw_solve(problem, config.solver);
  for (const std::string& w : report.warnings) spdlog::warn("{}", w);

  emit(dir / "convergence.jsonl",
       [&](std::ostream& out) { write_convergence_jsonl(out, report.history); });
  const Network& net = problem.network;
  if (config.output.intensity) {
    emit(dir / "intensity.csv",
         [&](std::ostream& out) { write_intensity_csv(out, domain, report.intensity); });
  }
  if (config.output.flows) {
    emit(dir / "flows.csv",
         [&](std::ostream& out) { write_flows_csv(out, net, report.intensity); });
  }
  if (config.output.plan) {
    emit(dir / "plan.csv",
         [&](std::ostream& out) { write_plan_csv(out, net, report.plan); });
  }
  if (config.output.paths) {
    emit(dir / "paths.txt",
         [&](std::ostream& out) { write_paths(out, net, report.flow); });
  }
  if (config.output.costs) {
    std::set<NodeId> sources;
    for (const PlanEntry& e : report.plan.entries()) sources.insert(e.source);
    const std::vector<NodeId> list(sources.begin(), sources.end());
    const CostTable table = shortest_costs(net, report.xi.edge, list);
    emit(dir / "costs.csv", [&](std::ostream& out) {
      write_costs_csv(out, table, net.num_nodes());
    });
  }
  if (config.output.svg) {
    if (domain.grid()) {
      emit(dir / "density.svg", [&](std::ostream& out) {
        write_density_svg(out, *domain.grid(), report.intensity, report.flow);
      });
    } else {
      spdlog::warn("svg output needs a grid domain; skipped");
    }
  }

  json summary = {{"primal", report.primal},
                  {"dual", report.dual},
                  {"gap", report.gap},
                  {"wardrop_gap", report.equilibrium.wardrop_gap},
                  {"iterations", report.iterations},
                  {"converged", report.converged}};
  if (report.equilibrium.mk_gap) summary["mk_gap"] = *report.equilibrium.mk_gap;
  emit_json(dir / "summary.json", summary);

  spdlog::info("{} after {} iterations: primal {} gap {} wardrop_gap {}",
               report.converged ? "converged" : "not converged",
               report.iterations, report.primal, report.gap,
               report.equilibrium.wardrop_gap);
  return report.converged ? kExitOk : kExitNotConverged;
}

int run_check(const RunConfig& config, const fs::path& flow_file,
              const fs::path& plan_file) {
  const RunDomain domain = build_domain(config.domain);
  const Problem problem = build_problem(config, domain);
  problem.validate();
  const PathFlow flow = load_paths(flow_file, domain);
  const TransportPlan plan = load_plan_csv(plan_file, domain);
  require_marginals(plan, problem.mu0, problem.mu1);
  require_marginals(decompose(flow).plan, problem.mu0, problem.mu1);

  const IntensityField field = intensity_from_paths(problem.network, flow);
  const MetricField xi = xi_from_intensity(problem, field);
  const EquilibriumGaps gaps = strategy_gaps(problem, flow, plan, xi);
  const double primal = primal_objective(problem, field);

  json out = {{"wardrop_gap", gaps.wardrop_gap}, {"primal", primal}};
  if (gaps.mk_gap) out["mk_gap"] = *gaps.mk_gap;
  prepare_dir(config.output.dir);
  emit_json(config.output.dir / "check.json", out);
  std::cout << out.dump() << '\n';

  const bool ok = gaps.wardrop_gap <= config.check_tol &&
                  (!gaps.mk_gap || *gaps.mk_gap <= config.check_tol);
  return ok ? kExitOk : kExitCheckFailed;
}

int run_oracle(const RunConfig& config) {
  const RunDomain domain = build_domain(config.domain);
  const Problem problem = build_problem(config, domain);
  const OracleResult r = brute_force_optimum(problem);
  const json out = {{"value", r.value},
                    {"paths", r.num_paths},
                    {"iterations", r.iterations},
                    {"residual", r.residual}};
  prepare_dir(config.output.dir);
  emit_json(config.output.dir / "oracle.json", out);
  std::cout << out.dump() << '\n';
  return kExitOk;
}

}  // namespace congest::cli
