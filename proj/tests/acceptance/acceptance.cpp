// One line per acceptance criterion; the exit status is the number of
// failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "congest/cli/commands.hpp"
#include "congest/cli/config.hpp"
#include "congest/cli/oracle.hpp"
#include "congest/solver.hpp"
#include "generators.hpp"
#include "instances.hpp"

namespace congest::acceptance {
namespace {

namespace fs = std::filesystem;
using cli::RunConfig;
using cli::RunDomain;
using nlohmann::json;
using testing::Gen;
using testing::rel_diff;

const fs::path kConfigs = CONGEST_CONFIG_DIR;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "congest_acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

json read_json(const fs::path& file) {
  std::ifstream in(file);
  return json::parse(in);
}

struct Loaded {
  RunConfig config;
  RunDomain domain;
  Problem problem;
};

Loaded load(const char* name) {
  RunConfig c = cli::load_config(kConfigs / name);
  RunDomain d = cli::build_domain(c.domain);
  Problem p = cli::build_problem(c, d);
  return {std::move(c), std::move(d), std::move(p)};
}

// Fixture 1 is solved once and shared by criteria 1, 6 and 9.
struct Fixture1 {
  Loaded run = load("square.json");
  SolverReport report;
  double seconds = 0.0;
  Fixture1() {
    const auto t0 = std::chrono::steady_clock::now();
    report = fw_solve(run.problem, run.config.solver);
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

const Fixture1& fixture1() {
  static const Fixture1 f;
  return f;
}

// Worst relative deviation from 1 over cells at least `margin` cells away
// from the grid boundary.
double interior_deviation(const GridDomain& g, const IntensityField& field, int margin) {
  const std::vector<double> d = cell_density(g.network(), field);
  double worst = 0.0;
  for (int j = margin; j < g.ny() - margin; ++j) {
    for (int i = margin; i < g.nx() - margin; ++i) {
      worst = std::max(worst, std::abs(d[*g.node_of_cell(i, j)] - 1.0));
    }
  }
  return worst;
}

Verdict criterion1() {
  const Fixture1& f = fixture1();
  const SolverReport& r = f.report;
  const double dev = interior_deviation(*f.run.domain.grid(), r.intensity, 3);
  const bool pass = r.converged && r.gap <= 1e-3 && r.iterations <= 500 && dev <= 0.07 &&
                    r.equilibrium.wardrop_gap <= 1e-2 && f.seconds <= 120.0;
  return {pass, fmt("gap=%.3g iterations=%d max|density-1|=%.3g wardrop_gap=%.3g time=%.2fs",
                    r.gap, r.iterations, dev, r.equilibrium.wardrop_gap, f.seconds)};
}

Verdict criterion2() {
  RunConfig c = cli::load_config(kConfigs / "square_outer.json");
  c.output.dir = scratch("outer_check");
  const int code = cli::run_check(c, kConfigs / "square_rows_paths.txt",
                                  kConfigs / "square_rows_plan.csv");
  const double wardrop = read_json(c.output.dir / "check.json").at("wardrop_gap").get<double>();

  // A short solve is enough to see mass leave S.
  const RunDomain d = cli::build_domain(c.domain);
  const Problem p = cli::build_problem(c, d);
  SolverConfig s = c.solver;
  s.max_iters = 30;
  const SolverReport r = fw_solve(p, s);
  double total = 0.0, outside = 0.0;
  const Network& net = d.network();
  for (EdgeId e = 0; e < static_cast<EdgeId>(net.num_edges()); ++e) {
    const Edge& edge = net.edge(e);
    const double ml = edge.length * r.intensity.edge_flow[e];
    const Point a = net.position(edge.u), b = net.position(edge.v);
    const double mx = 0.5 * (a.x + b.x), my = 0.5 * (a.y + b.y);
    total += ml;
    if (mx < 0.0 || mx > 1.0 || my < 0.0 || my > 1.0) outside += ml;
  }
  const double share = outside / total;
  const bool pass = code == cli::kExitCheckFailed && wardrop > 0.05 && share > 0.01;
  return {pass, fmt("check exit=%d wardrop_gap=%.3g; outside share of mass*length after %d "
                    "iterations=%.3g",
                    code, wardrop, r.iterations, share)};
}

Verdict criterion3() {
  double worst = 0.0;
  for (int res : {32, 64, 128}) {
    const GridDomain g = build_grid({0, 0, 1, 1}, res);
    PathFlow flow;
    for (int j = 0; j < res; ++j) {
      GridPath path;
      for (int i = 0; i < res; ++i) path.push_back(*g.node_of_cell(i, j));
      flow.add(path, 1.0 / res);
    }
    worst = std::max(worst, interior_deviation(g, intensity_from_paths(g.network(), flow), 1));
  }
  return {worst <= 0.02, fmt("max|density-1| over resolutions 32, 64, 128 = %.3g", worst)};
}

Verdict criterion4() {
  const Loaded l = load("pigou.json");
  const SolverReport r = fw_solve(l.problem, l.config.solver);
  const double direct = r.intensity.edge_flow[0];
  const double oracle = cli::brute_force_optimum(l.problem).value;
  const double diff = rel_diff(r.primal, oracle);
  const bool pass = std::abs(direct - 0.8) <= 1e-3 && std::abs(r.intensity.edge_flow[1] - 0.2) <= 1e-3 &&
                    r.equilibrium.wardrop_gap <= 1e-4 && diff <= 1e-6;
  return {pass, fmt("split=%.6f/%.6f wardrop_gap=%.3g primal=%.12g oracle=%.12g rel=%.3g",
                    direct, r.intensity.edge_flow[1], r.equilibrium.wardrop_gap, r.primal,
                    oracle, diff)};
}

Verdict criterion5() {
  Gen gen(2024);
  double worst = 0.0;
  int fixed = 0;
  for (int k = 0; k < 20; ++k) {
    const Problem p = testing::small_problem(gen);
    fixed += p.fixed_plan.has_value();
    SolverConfig s;
    s.gap_tol = 1e-7;
    s.max_iters = 200000;
    const SolverReport r = fw_solve(p, s);
    const double oracle = cli::brute_force_optimum(p).value;
    worst = std::max(worst, rel_diff(r.primal, oracle));
  }
  return {worst <= 1e-5,
          fmt("20 instances (%d fixed-plan), worst relative difference %.3g", fixed, worst)};
}

Verdict criterion6() {
  std::vector<std::pair<Problem, SolverConfig>> runs;
  const Loaded pigou = load("pigou.json");
  runs.emplace_back(pigou.problem, pigou.config.solver);
  const Loaded tiny = load("tiny_grid.ini");
  runs.emplace_back(tiny.problem, tiny.config.solver);
  Gen gen(606);
  while (runs.size() < 22) {
    Problem p = testing::small_problem(gen);
    if (p.fixed_plan) continue;
    SolverConfig s;
    s.gap_tol = 1e-5;
    s.max_iters = 100000;
    runs.emplace_back(std::move(p), s);
  }

  double worst_mk = 0.0, worst_fenchel = 0.0;
  int converged = 0;
  auto record = [&](const SolverReport& r, double tol) {
    for (const IterationRecord& rec : r.history) {
      worst_fenchel = std::max(worst_fenchel, rel_diff(rec.dual, rec.fenchel_dual));
    }
    if (!r.converged) return;
    ++converged;
    const IterationRecord& last = r.history.back();
    worst_mk = std::max(worst_mk,
                        std::abs(last.pairing - last.mk_value) / last.mk_value / (10 * tol));
  };
  record(fixture1().report, fixture1().run.config.solver.gap_tol);
  for (const auto& [p, s] : runs) record(fw_solve(p, s), s.gap_tol);
  const bool pass = converged == static_cast<int>(runs.size()) + 1 && worst_mk <= 1.0 &&
                    worst_fenchel <= 1e-8;
  return {pass, fmt("%d converged solves; worst |<xi,i>-W|/W in units of 10*gap_tol=%.3g; "
                    "worst dual vs Fenchel rel=%.3g",
                    converged, worst_mk, worst_fenchel)};
}

Verdict criterion7() {
  Gen gen(77);
  double worst_pair = 0.0, worst_mass = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const GridDomain g = gen.grid(8);
    const Network& net = g.network();
    const PathFlow flow = gen.flow(net, gen.integer(1, 6), 12);
    const std::vector<double> xi = gen.field(net.num_edges(), 0.0, 3.0);
    const IntensityField field = intensity_from_paths(net, flow);

    double lhs_mass = 0.0;
    for (EdgeId e = 0; e < static_cast<EdgeId>(net.num_edges()); ++e) {
      lhs_mass += net.edge(e).length * net.edge(e).width * field.edge_density[e];
    }
    double by_paths = 0.0, mass_length = 0.0;
    for (const WeightedPath& w : flow.entries()) {
      by_paths += w.mass * path_cost(net, w.nodes, xi);
      mass_length += w.mass * path_length(net, w.nodes);
    }
    const double pair = pairing(net, field, xi);
    if (by_paths > 0) worst_pair = std::max(worst_pair, rel_diff(pair, by_paths));
    if (mass_length > 0) worst_mass = std::max(worst_mass, rel_diff(lhs_mass, mass_length));
  }
  return {worst_pair <= 1e-10 && worst_mass <= 1e-10,
          fmt("1000 cases; worst duality identity rel=%.3g, total-mass identity rel=%.3g",
              worst_pair, worst_mass)};
}

Verdict criterion8() {
  Gen gen(88);
  const double tol = 1e-10;
  int violations = 0;
  auto bad = [&](double lhs, double rhs) {  // lhs <= rhs up to tol
    if (lhs > rhs + tol * std::max({1.0, std::abs(lhs), std::abs(rhs)})) ++violations;
  };
  for (int k = 0; k < 200; ++k) {
    const GridDomain g = gen.grid(7);
    const Network& net = g.network();
    const std::size_t m = net.num_edges();
    const std::vector<double> xi = gen.field(m, 0.0, 2.0);
    std::vector<double> other = gen.field(m, 0.0, 2.0);
    std::vector<double> above(m), mid(m), scaled(m);
    const double lambda = gen.uniform(0.1, 5.0);
    for (std::size_t e = 0; e < m; ++e) {
      above[e] = xi[e] + gen.uniform(0.0, 1.0);
      mid[e] = 0.5 * (xi[e] + other[e]);
      scaled[e] = lambda * xi[e];
    }
    const NodeId x = gen.node(net), y = gen.node(net), z = gen.node(net);
    const std::vector<NodeId> all{x, y, z};
    const CostTable c = shortest_costs(net, xi, all);
    // triangle and symmetry
    bad(c.cost(x, z), c.cost(x, y) + c.cost(y, z));
    bad(std::abs(c.cost(x, y) - c.cost(y, x)), 0.0);
    // homogeneity
    const CostTable cs = shortest_costs(net, scaled, all);
    bad(std::abs(cs.cost(x, y) - lambda * c.cost(x, y)), 0.0);
    // monotonicity
    bad(c.cost(x, y), shortest_costs(net, above, all).cost(x, y));
    // concavity
    const CostTable co = shortest_costs(net, other, all);
    bad(0.5 * (c.cost(x, y) + co.cost(x, y)), shortest_costs(net, mid, all).cost(x, y));
    // any path from x costs at least the geodesic distance to its end
    GridPath walk{x};
    for (int s = gen.integer(0, 10); s > 0; --s) {
      const auto nb = net.neighbors(walk.back());
      walk.push_back(nb[gen.integer(0, static_cast<int>(nb.size()) - 1)].node);
    }
    bad(c.cost(x, walk.back()), path_cost(net, walk, xi));
  }
  return {violations == 0, fmt("200 cases x 6 properties, %d violations", violations)};
}

Verdict criterion9() {
  const Fixture1& f = fixture1();
  SolverConfig s = f.run.config.solver;
  std::vector<std::vector<double>> dens;
  for (std::uint64_t seed : {11u, 12u}) {
    s.seed = seed;
    dens.push_back(fw_solve(f.run.problem, s).intensity.edge_density);
  }
  double num = 0.0, den = 0.0;
  for (std::size_t e = 0; e < dens[0].size(); ++e) {
    num += (dens[0][e] - dens[1][e]) * (dens[0][e] - dens[1][e]);
    den += dens[0][e] * dens[0][e];
  }
  const double dist = std::sqrt(num / den);
  return {dist <= 10 * s.gap_tol, fmt("relative L2 distance between seeds = %.3g", dist)};
}

Verdict criterion10() {
  RunConfig c = cli::load_config(kConfigs / "square_fixed_plan.json");
  const fs::path solved = scratch("fixed_solve");
  c.output.dir = solved;
  const int solve_code = cli::run_solve(c);
  c.output.dir = scratch("fixed_check");
  const int check_code = cli::run_check(c, solved / "paths.txt", solved / "plan.csv");
  const json out = read_json(c.output.dir / "check.json");
  const double wardrop = out.at("wardrop_gap").get<double>();
  const bool pass = solve_code == cli::kExitOk && check_code == cli::kExitOk &&
                    wardrop <= 1e-2 && !out.contains("mk_gap") &&
                    !read_json(solved / "summary.json").contains("mk_gap");
  return {pass, fmt("solve exit=%d check exit=%d wardrop_gap=%.3g mk_gap %s", solve_code,
                    check_code, wardrop, out.contains("mk_gap") ? "present" : "absent")};
}

}  // namespace
}  // namespace congest::acceptance

int main() {
  using namespace congest::acceptance;
  const std::function<Verdict()> criteria[] = {criterion1, criterion2, criterion3, criterion4,
                                               criterion5, criterion6, criterion7, criterion8,
                                               criterion9, criterion10};
  int failures = 0;
  for (int k = 0; k < 10; ++k) {
    Verdict v;
    try {
      v = criteria[k]();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("criterion %2d: %s  %s\n", k + 1, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
