#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "congest/cli/artifacts.hpp"
#include "congest/cli/commands.hpp"
#include "congest/cli/config.hpp"
#include "congest/cli/format.hpp"
#include "congest/cli/oracle.hpp"
#include "congest/cli/svg.hpp"
#include "frozen_values.hpp"
#include "generators.hpp"

namespace congest::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::Gen;

const fs::path kConfigs = CONGEST_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "congest_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

json base_tree() {
  return json::parse(R"({
    "domain": {"type": "grid", "bounds": [0, 0, 1, 1], "resolution": 4},
    "mu0": {"type": "segment", "from": [0, 0], "to": [0, 1]},
    "mu1": {"type": "segment", "from": [1, 0], "to": [1, 1]},
    "congestion": {"q": 1.5, "a": 1.0, "c0": 0.05, "mode": "equilibrium"}
  })");
}

TEST(FormatDouble, RoundTripsBitExact) {
  Gen gen(5);
  for (int k = 0; k < 2000; ++k) {
    const double x = std::ldexp(gen.uniform(-1, 1), gen.integer(-60, 60));
    EXPECT_EQ(parse_double(format_double(x), "x"), x);
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_ERROR_KIND(parse_double("1.5x", "mass"), ErrorKind::kIO);
  EXPECT_ERROR_KIND(parse_integer("", "id"), ErrorKind::kIO);
}

TEST(Config, JsonDefaultsAndValues) {
  const RunConfig c = parse_config(base_tree(), "/base");
  EXPECT_EQ(c.domain.resolution, 4);
  EXPECT_EQ(c.q, 1.5);
  EXPECT_EQ(c.c0, 0.05);
  EXPECT_EQ(c.mode, CongestionMode::kEquilibrium);
  EXPECT_EQ(c.solver.max_iters, SolverConfig{}.max_iters);
  EXPECT_FALSE(c.discretization.has_value());
  EXPECT_EQ(c.output.dir, fs::path("/base/out"));
}

TEST(Config, IniMatchesJson) {
  const RunConfig ini = load_config(kConfigs / "tiny_grid.ini");
  EXPECT_EQ(ini.domain.resolution, 2);
  EXPECT_EQ(ini.solver.max_iters, 20000);
  EXPECT_EQ(ini.solver.gap_tol, 1e-8);
  ASSERT_EQ(ini.mu0.points.size(), 1u);
  EXPECT_EQ(ini.mu0.points[0].first.x, 0.25);

  const json tree = parse_ini(
      "[congestion]\nq = 1.7\nmode = social\n[solver]\nseed = 3\ninner_sweeps = 0\n");
  EXPECT_EQ(tree.at("congestion").at("q").get<double>(), 1.7);
  EXPECT_EQ(tree.at("congestion").at("mode").get<std::string>(), "social");
  EXPECT_EQ(tree.at("solver").at("seed").get<int>(), 3);
  const json commented = parse_ini("[a]\nb = grid   # trailing\nc = \"x # y\"  ; note\nd = [1, 2] # list\n");
  EXPECT_EQ(commented.at("a").at("b").get<std::string>(), "grid");
  EXPECT_EQ(commented.at("a").at("c").get<std::string>(), "x # y");
  EXPECT_EQ(commented.at("a").at("d").size(), 2u);
  json full = base_tree();
  full["solver"] = tree.at("solver");
  const RunConfig parsed = parse_config(full, ".");
  EXPECT_EQ(parsed.solver.inner_sweeps, 0);
  EXPECT_EQ(parsed.solver.seed, 3u);
}

TEST(Config, ErrorsNameTheKey) {
  auto message = [](const json& tree) {
    try {
      parse_config(tree, ".");
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kConfig);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  json t = base_tree();
  t["congestion"]["q"] = 1.0;
  EXPECT_NE(message(t).find("q must exceed 1"), std::string::npos);
  EXPECT_NE(message(t).find("congestion.q"), std::string::npos);

  t = base_tree();
  t["domain"]["resolution"] = 1;
  EXPECT_NE(message(t).find("domain.resolution"), std::string::npos);

  t = base_tree();
  t["congestion"]["speed"] = 3;
  EXPECT_NE(message(t).find("congestion.speed"), std::string::npos);

  t = base_tree();
  t["congestion"]["a"] = 0.0;
  EXPECT_NE(message(t).find("congestion.a"), std::string::npos);

  t = base_tree();
  t["fixed_plan"] = "missing_plan.csv";
  EXPECT_NE(message(t).find("fixed_plan"), std::string::npos);

  EXPECT_ERROR_KIND(load_config(kConfigs / "no_such_config.json"), ErrorKind::kIO);
}

TEST(Config, ShippedConfigsBuild) {
  for (const char* name : {"square.json", "square_outer.json", "square_fixed_plan.json",
                           "pigou.json", "tiny_grid.ini"}) {
    const RunConfig c = load_config(kConfigs / name);
    const RunDomain d = build_domain(c.domain);
    EXPECT_NO_THROW(build_problem(c, d).validate()) << name;
  }
}

TEST(Artifacts, PlanAndPathsRoundTripBitExact) {
  const RunConfig c = parse_config(base_tree(), ".");
  const RunDomain d = build_domain(c.domain);
  const Network& net = d.network();
  Gen gen(8);
  for (int trial = 0; trial < 50; ++trial) {
    PathFlow flow;
    std::vector<PlanEntry> entries;
    for (int k = 0; k < 5; ++k) {
      const GridPath p = gen.walk(net, gen.integer(1, 6));
      const double m = gen.uniform(1e-6, 3.0) / 3.0;
      flow.add(p, m);
      if (std::none_of(entries.begin(), entries.end(), [&](const PlanEntry& e) {
            return e.source == p.front() && e.target == p.back();
          })) {
        entries.push_back({p.front(), p.back(), m});
      }
    }
    std::stringstream ps;
    write_paths(ps, net, flow);
    const PathFlow back = read_paths(ps, d);
    ASSERT_EQ(back.size(), flow.size());
    for (std::size_t k = 0; k < flow.size(); ++k) {
      EXPECT_EQ(back.entries()[k].nodes, flow.entries()[k].nodes);
      EXPECT_EQ(back.entries()[k].mass, flow.entries()[k].mass);
    }

    const TransportPlan plan(entries);
    std::stringstream qs;
    write_plan_csv(qs, net, plan);
    const TransportPlan plan_back = read_plan_csv(qs, d);
    ASSERT_EQ(plan_back.size(), plan.size());
    for (const PlanEntry& e : plan.entries()) {
      const auto it = std::find_if(plan_back.entries().begin(), plan_back.entries().end(),
                                   [&](const PlanEntry& b) {
                                     return b.source == e.source && b.target == e.target;
                                   });
      ASSERT_NE(it, plan_back.entries().end());
      EXPECT_EQ(it->mass, e.mass);
    }
  }
}

TEST(Artifacts, IntensityFlowsAndCostsReparse) {
  const RunConfig c = parse_config(base_tree(), ".");
  const RunDomain d = build_domain(c.domain);
  const Network& net = d.network();
  Gen gen(9);
  const IntensityField field = intensity_from_paths(net, gen.flow(net, 6, 5));

  std::stringstream is;
  write_intensity_csv(is, d, field);
  const std::vector<double> density = cell_density(net, field);
  const auto irows = csv_rows(is.str());
  ASSERT_EQ(irows.size(), net.num_nodes() + 1);
  for (std::size_t r = 1; r < irows.size(); ++r) {
    const auto i = static_cast<int>(parse_integer(irows[r][0], "i"));
    const auto j = static_cast<int>(parse_integer(irows[r][1], "j"));
    EXPECT_EQ(parse_double(irows[r][2], "density"), density[*d.grid()->node_of_cell(i, j)]);
  }

  std::stringstream fs_;
  write_flows_csv(fs_, net, field);
  const auto frows = csv_rows(fs_.str());
  std::size_t nonzero = 0;
  for (double f : field.edge_flow) nonzero += f != 0.0;
  ASSERT_EQ(frows.size(), nonzero + 1);
  for (std::size_t r = 1; r < frows.size(); ++r) {
    const NodeId u = d.locate({parse_double(frows[r][0], "x"), parse_double(frows[r][1], "y")});
    const NodeId v = d.locate({parse_double(frows[r][2], "x"), parse_double(frows[r][3], "y")});
    EXPECT_EQ(parse_double(frows[r][4], "flow"), field.edge_flow[*net.find_edge(u, v)]);
  }

  const std::vector<NodeId> sources{0, 5};
  const std::vector<double> xi = gen.field(net.num_edges(), 0.1, 2.0);
  const CostTable table = shortest_costs(net, xi, sources);
  std::stringstream cs;
  write_costs_csv(cs, table, net.num_nodes());
  const auto crows = csv_rows(cs.str());
  ASSERT_EQ(crows.size(), 2 * net.num_nodes() + 1);
  for (std::size_t r = 1; r < crows.size(); ++r) {
    const auto s = static_cast<NodeId>(parse_integer(crows[r][0], "source"));
    const auto n = static_cast<NodeId>(parse_integer(crows[r][1], "node"));
    EXPECT_EQ(parse_double(crows[r][2], "cost"), table.cost(s, n));
  }
}

TEST(Artifacts, MeasureCsvAndBadInput) {
  const RunConfig c = parse_config(base_tree(), ".");
  const RunDomain d = build_domain(c.domain);
  std::stringstream in("node_x,node_y,mass\n0.125,0.125,0.3\n0.875,0.375,0.7\n");
  const DiscreteMeasure m = read_measure_csv(in, d);
  EXPECT_EQ(m.size(), 2u);
  EXPECT_EQ(m.mass(d.locate({0.875, 0.375})), 0.7);

  std::stringstream outside("0.125,0.125,1\n3.0,0.5,1\n");
  EXPECT_ERROR_KIND(read_measure_csv(outside, d), ErrorKind::kOutsideDomain);
  std::stringstream broken("1.0; 0.125,0.125; 0.875,0.875\n");
  EXPECT_ERROR_KIND(read_paths(broken, d), ErrorKind::kInvalidPath);
}

TEST(Svg, RenderingDoesNotChangeNumbers) {
  RunConfig c = load_config(kConfigs / "tiny_grid.ini");
  c.solver.max_iters = 50;
  const fs::path off = scratch("svg_off");
  const fs::path on = scratch("svg_on");
  c.output.dir = off;
  c.output.svg = false;
  const int plain = run_solve(c);
  c.output.dir = on;
  c.output.svg = true;
  EXPECT_EQ(run_solve(c), plain);
  EXPECT_FALSE(fs::exists(off / "density.svg"));
  for (const char* f : {"summary.json", "intensity.csv", "flows.csv", "plan.csv", "paths.txt",
                        "convergence.jsonl"}) {
    EXPECT_EQ(slurp(off / f), slurp(on / f)) << f;
  }
  const std::string svg = slurp(on / "density.svg");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Commands, SolveThenCheckIsSelfConsistent) {
  RunConfig c = load_config(kConfigs / "pigou.json");
  c.output.dir = scratch("pigou");
  EXPECT_EQ(run_solve(c), kExitOk);
  const json summary = json::parse(slurp(c.output.dir / "summary.json"));
  for (const char* key : {"primal", "dual", "gap", "wardrop_gap", "mk_gap", "iterations",
                          "converged"}) {
    EXPECT_TRUE(summary.contains(key)) << key;
  }
  const fs::path solved = c.output.dir;
  c.output.dir = scratch("pigou_check");
  EXPECT_EQ(run_check(c, solved / "paths.txt", solved / "plan.csv"), kExitOk);
  const json check = json::parse(slurp(c.output.dir / "check.json"));
  EXPECT_EQ(check.at("primal").get<double>(), summary.at("primal").get<double>());
}

TEST(Commands, NotConvergedExitCode) {
  RunConfig c = load_config(kConfigs / "tiny_grid.ini");
  c.solver.max_iters = 1;
  c.output.dir = scratch("tiny_one");
  EXPECT_EQ(run_solve(c), kExitNotConverged);
}

TEST(Commands, CheckRejectsInconsistentPlan) {
  RunConfig c = load_config(kConfigs / "pigou.json");
  const fs::path dir = scratch("pigou_bad");
  {
    std::ofstream(dir / "plan.csv") << "sx,sy,tx,ty,mass\n0,0,0.5,0.5,1\n";
    std::ofstream(dir / "paths.txt") << "1; 0,0; 0.5,0.5\n";
  }
  c.output.dir = dir;
  EXPECT_ERROR_KIND(run_check(c, dir / "paths.txt", dir / "plan.csv"),
                    ErrorKind::kInconsistentMarginals);
}

TEST(Oracle, RejectsLargeInstances) {
  const RunConfig c = parse_config(base_tree(), ".");
  const RunDomain d = build_domain(c.domain);
  EXPECT_ERROR_KIND(brute_force_optimum(build_problem(c, d)), ErrorKind::kTooLarge);
}

TEST(Oracle, ClosedFormInstances) {
  const RunConfig pigou = load_config(kConfigs / "pigou.json");
  const RunDomain pd = build_domain(pigou.domain);
  const OracleResult r = brute_force_optimum(build_problem(pigou, pd));
  EXPECT_LE(testing::rel_diff(r.value, frozen::kPigouValue), 1e-9);
  EXPECT_EQ(r.num_paths, 2u);

  const RunConfig tiny = load_config(kConfigs / "tiny_grid.ini");
  const RunDomain td = build_domain(tiny.domain);
  const OracleResult t = brute_force_optimum(build_problem(tiny, td));
  EXPECT_LE(testing::rel_diff(t.value, frozen::kTinyGridValue), 1e-9);

  // One path only: the whole mass on a single unit edge.
  const Network edge({{0, 0}, {1, 0}}, {1, 1}, {{0, 1, 1.0, 1.0}});
  DiscreteMeasure a, b;
  a.add(0, 2.0);
  b.add(1, 2.0);
  const CongestionModel model(1.5, 1.0, 0.0, CongestionMode::kSocialCost);
  const Problem single{edge, a, b, model, Discretization::kEdge, std::nullopt};
  EXPECT_NEAR(brute_force_optimum(single).value, 2.0 * std::sqrt(2.0), 1e-12);
}

TEST(Oracle, TinyGridBracketsSolver) {
  const RunConfig tiny = load_config(kConfigs / "tiny_grid.ini");
  const RunDomain td = build_domain(tiny.domain);
  const Problem p = build_problem(tiny, td);
  const double oracle = brute_force_optimum(p).value;
  const SolverReport r = fw_solve(p, tiny.solver);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(oracle, r.primal * (1 + 1e-12));
  EXPECT_LE(r.primal, oracle * (1 + 1e-6));
}

}  // namespace
}  // namespace congest::cli
