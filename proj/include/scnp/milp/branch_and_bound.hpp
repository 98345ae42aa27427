#pragma once

#include <optional>
#include <vector>

#include "scnp/milp/linear_model.hpp"
#include "scnp/milp/simplex.hpp"

namespace scnp::milp {

struct MilpOptions {
  // Absolute optimality gap: nodes whose bound is within `gap` of the
  // incumbent are pruned.
  double gap = 1e-3;
  double time_limit = kInfinity;  // seconds
  long node_limit = -1;           // negative: unlimited
  double integrality_tol = 1e-6;
  // Feasible point used as the starting incumbent; ignored when infeasible.
  std::optional<std::vector<double>> initial_incumbent;
  LpOptions lp;
};

// LP-based branch and bound: most-fractional branching, depth-first dives in
// the rounding direction, best-bound selection between dives.
//
// status: Optimal when the search closed, Infeasible, Unbounded (relaxation
// unbounded), TimeLimit or IterationLimit (node limit). `x` is empty when no
// integer-feasible point was found. `bound` is a valid lower bound.
SolveResult solve_milp(const LinearModel& model, const MilpOptions& options = {});

}  // namespace scnp::milp
