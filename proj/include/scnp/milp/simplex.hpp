#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "scnp/milp/linear_model.hpp"

namespace scnp::milp {

enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kTimeLimit };

std::string_view to_string(Status status);

struct SolveResult {
  Status status = Status::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  // LP only: one dual per row, sign convention of the row sense (>= rows
  // carry nonnegative duals, <= rows nonpositive duals in a minimisation).
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  double dual_objective = 0.0;
  // MILP only: best proven lower bound and explored node count.
  double bound = -kInfinity;
  long nodes = 0;
  long iterations = 0;
};

struct LpOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-7;
  double pivot_tol = 1e-9;
  long iteration_limit = 5'000'000;
  int refactor_interval = 100;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int degenerate_streak_limit = 50;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

enum class VarStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree };

// Columns 0..n-1 are structural; n+i is the logical of row i, defined by
// a_i x - w_i = 0 with the row's sense turned into bounds on w_i.
struct Basis {
  std::vector<VarStatus> status;
  std::vector<int> head;
};

// Bounded-variable primal simplex with a product-form inverse. Phase 1
// minimises the sum of infeasibilities (first-breakpoint ratio test), phase 2
// the model objective. Structural bounds can be overridden between solves,
// which is how branch-and-bound reuses one instance per search.
class Simplex {
 public:
  explicit Simplex(const LinearModel& model, LpOptions options = {});
  ~Simplex();
  Simplex(const Simplex&) = delete;
  Simplex& operator=(const Simplex&) = delete;

  void set_bounds(int var, double lower, double upper);
  double lower(int var) const;
  double upper(int var) const;
  void set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline);

  // Starts from `warm` when given, otherwise from the all-logical basis.
  Status solve(const Basis* warm = nullptr);

  Basis basis() const;
  std::vector<double> primal() const;
  double objective() const;
  std::vector<double> duals() const;
  std::vector<double> reduced_costs() const;
  double dual_objective() const;
  long iterations() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SolveResult solve_lp(const LinearModel& model, const LpOptions& options = {});

}  // namespace scnp::milp
