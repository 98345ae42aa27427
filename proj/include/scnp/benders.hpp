#pragma once

#include <array>
#include <iosfwd>
#include <limits>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "scnp/instance.hpp"

namespace scnp {

// Data of one pair's path in chain orientation: survival probabilities,
// attack flags (0/1) and the connection cost c_ij.
struct PathView {
  std::vector<double> p;
  std::vector<int> v;
  double c = 1.0;
};

PathView path_view(const TreeInstance& instance, std::span<const NodeId> path, const AttackVector& attack);

struct SlaveSolution {
  std::vector<double> s;
  std::vector<double> r;
  double objective = 0.0;
};

// Closed-form optimum of the pair subproblem for fixed v.
SlaveSolution slave_primal(const PathView& path);

// lambda[k][l - 1] holds lambda_{k+1, l} for l = 1..4; at the first
// position only l = 1, 2 are used.
struct DualValues {
  std::vector<std::array<double, 4>> lambda;
};

DualValues analytic_dual(const PathView& path);
double dual_objective(const DualValues& dual, const PathView& path);
bool dual_feasibility_check(const DualValues& dual, const PathView& path, double tol = 1e-9);

// z_ij >= constant + sum coeff * v_node.
struct BendersCut {
  NodeId i = 0;
  NodeId j = 0;
  double constant = 0.0;
  std::vector<std::pair<NodeId, double>> coeffs;

  double rhs(const AttackVector& attack) const;
};

BendersCut make_cut(NodeId i, NodeId j, std::span<const NodeId> path, const PathView& view, const DualValues& dual);

struct BendersOptions {
  double eps = 1e-3;
  bool use_valid_ineq = true;
  double time_limit = std::numeric_limits<double>::infinity();  // seconds
};

enum class BendersStatus { kOptimal, kTimeLimit, kStalled };
std::string_view to_string(BendersStatus status);

struct TraceRow {
  int iteration = 0;
  double lower = 0.0;
  double upper = 0.0;
  int cuts_added = 0;
  long cumulative_cuts = 0;
  double elapsed = 0.0;
};

// A cut together with the master point (z~_ij, v~) that produced it.
struct CutRecord {
  BendersCut cut;
  int iteration = 0;
  double master_z = 0.0;
  AttackVector master_v;
};

struct BendersResult {
  AttackVector attack;
  double upper = 0.0;
  double lower = 0.0;
  int iterations = 0;
  long cuts = 0;
  BendersStatus status = BendersStatus::kOptimal;
  double seconds = 0.0;
  std::vector<TraceRow> trace;
  std::vector<CutRecord> cut_log;
};

// Multi-cut Benders loop: master MILP over v and z_ij, closed-form slaves,
// one optimality cut per violated pair and iteration.
BendersResult bd_scnp(const TreeInstance& instance, const BendersOptions& options = {});

// Columns: iteration,LB,UB,cuts_added,cumulative_cuts,elapsed
void write_trace_csv(const std::vector<TraceRow>& trace, std::ostream& out);

}  // namespace scnp
