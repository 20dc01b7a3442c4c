#pragma once

#include <filesystem>
#include <optional>

#include "congest/cli/config.hpp"

namespace congest::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitNotConverged = 2;
inline constexpr int kExitCheckFailed = 3;

// Solves and writes convergence.jsonl, summary.json and the enabled
// artifacts into config.output.dir.
int run_solve(const RunConfig& config);

// Scores a stored strategy and writes check.json into config.output.dir.
int run_check(const RunConfig& config, const std::filesystem::path& flow_file,
              const std::filesystem::path& plan_file);

// Writes oracle.json into config.output.dir.
int run_oracle(const RunConfig& config);

}  // namespace congest::cli
