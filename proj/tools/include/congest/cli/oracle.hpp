#pragma once

#include <cstddef>

#include "congest/solver.hpp"

namespace congest::cli {

struct OracleLimits {
  std::size_t max_nodes = 12;
  std::size_t max_atoms = 6;
  std::size_t max_paths = 200000;
  double tol = 1e-10;
  int max_iters = 200000;
};

struct OracleResult {
  double value = 0.0;
  std::size_t num_paths = 0;
  int iterations = 0;
  double residual = 0.0;  // projected-gradient stationarity at exit
};

// Brute force: every simple path of every admissible origin-destination pair
// is a variable, and the objective is minimized over path masses by
// accelerated projected gradient. Throws TooLarge beyond `limits`.
OracleResult brute_force_optimum(const Problem& problem,
                                 const OracleLimits& limits = {});

}  // namespace congest::cli
