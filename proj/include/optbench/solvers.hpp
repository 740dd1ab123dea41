#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "optbench/model.hpp"

namespace optbench {

struct AnnealSchedule {
  std::size_t sweeps = 1;
  double beta_start = 0.1;  // inverse temperature ramp, linear in the sweep index
  double beta_end = 10.0;
  std::size_t restarts = 1;
  uint64_t seed = 1;
};

struct SolveOutcome {
  std::vector<uint8_t> best_x;
  long long best_energy = 0;
  unsigned long long evaluations = 0;
  double elapsed_s = 0;
};

struct ModelSolveOutcome {
  bool feasible = false;
  std::vector<long long> best_x;       // empty when infeasible
  std::optional<long long> objective;  // absent for feasibility-only problems
  unsigned long long evaluations = 0;  // leaves visited
  double elapsed_s = 0;
};

// Exhaustive enumeration. Ties go to the lexicographically smallest
// assignment. Throws std::invalid_argument when n exceeds limit.
SolveOutcome brute_force(const Qubo& q, int limit = 24);
SolveOutcome brute_force(const Hubo& h, int limit = 24);

// Depth-first search in declaration order with bounds propagation on the
// linear constraints and interval pruning on the objective. Exact; the
// reported optimizer is the lexicographically smallest one (value order
// ascending). Feasibility-sense models stop at the first feasible point.
ModelSolveOutcome brute_force(const Model& m, int limit = 24);

// Zero-temperature sweeps: n_s passes over the indices in ascending order,
// flipping a bit only when the energy strictly decreases.
SolveOutcome local_sweeps(const Qubo& q, std::vector<uint8_t> x0, std::size_t n_s);
SolveOutcome local_sweeps(const Hubo& h, std::vector<uint8_t> x0, std::size_t n_s);

// Metropolis single-flip annealing with a linear beta ramp. Restart r and
// sweep s draw from a counter-based generator keyed by (seed, r, s), so
// results are bit-reproducible and restarts are order-independent.
SolveOutcome simulated_annealing(const Qubo& q, const AnnealSchedule& schedule);

}  // namespace optbench
