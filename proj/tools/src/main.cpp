#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "congest/cli/commands.hpp"
#include "congest/error.hpp"

int main(int argc, char** argv) {
  using namespace congest::cli;

  CLI::App app{"Congested optimal transport on planar grids"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  std::string flow_file;
  std::string plan_file;
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log debug output");

  auto* solve = app.add_subcommand("solve", "Minimize the congestion functional");
  auto* check = app.add_subcommand("check", "Score a stored strategy");
  auto* oracle = app.add_subcommand("oracle", "Brute-force optimum on tiny instances");
  for (auto* cmd : {solve, check, oracle}) {
    cmd->add_option("config", config_path, "Run configuration (JSON or INI)")
        ->required();
    cmd->add_option("-o,--out", out_dir, "Override output.dir");
  }
  check->add_option("--flow", flow_file, "Path dump")->required();
  check->add_option("--plan", plan_file, "Plan CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitFailure;
  }
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);
  spdlog::set_pattern("[%l] %v");

  try {
    RunConfig config = load_config(config_path);
    if (!out_dir.empty()) config.output.dir = out_dir;
    if (*solve) return run_solve(config);
    if (*check) return run_check(config, flow_file, plan_file);
    return run_oracle(config);
  } catch (const congest::Error& e) {
    std::cerr << to_string(e.kind()) << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kExitFailure;
}
