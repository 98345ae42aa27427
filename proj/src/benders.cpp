#include "scnp/benders.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "scnp/error.hpp"
#include "scnp/milp/branch_and_bound.hpp"
#include "scnp/models.hpp"

namespace scnp {

PathView path_view(const TreeInstance& instance, std::span<const NodeId> path, const AttackVector& attack) {
  PathView view;
  view.p.reserve(path.size());
  view.v.reserve(path.size());
  for (NodeId k : path) {
    view.p.push_back(instance.survival_prob[static_cast<std::size_t>(k)]);
    view.v.push_back(attack[k] ? 1 : 0);
  }
  view.c = instance.connection_cost(path.front(), path.back());
  return view;
}

SlaveSolution slave_primal(const PathView& path) {
  SlaveSolution out;
  const std::size_t len = path.p.size();
  out.s.resize(len);
  out.r.resize(len);
  double prev = 1.0;
  for (std::size_t k = 0; k < len; ++k) {
    const double q = (1.0 - path.p[k]) * path.v[k];
    out.r[k] = q * prev;
    out.s[k] = prev - out.r[k];
    prev = out.s[k];
  }
  out.objective = len == 0 ? 0.0 : path.c * out.s.back();
  return out;
}

DualValues analytic_dual(const PathView& path) {
  DualValues out;
  const std::size_t len = path.p.size();
  out.lambda.assign(len, {0.0, 0.0, 0.0, 0.0});
  if (len == 0) return out;
  for (std::size_t k = 0; k < len; ++k) {
    if (path.v[k] != 0 && path.p[k] == 0.0) return out;
  }
  auto& lam = out.lambda;
  const std::size_t last = len - 1;
  lam[last][1] = path.c;
  if (last == 0) {
    lam[0][0] = -lam[0][1];
    return out;
  }
  lam[last][0] = path.c * (path.v[last] - 1);
  lam[last][2] = -path.c * path.v[last];
  for (std::size_t k = last; k-- > 0;) {
    lam[k][1] = (1.0 - path.p[k + 1]) * (lam[k + 1][2] + lam[k + 1][3]) + lam[k + 1][1];
    if (k == 0) {
      lam[0][0] = -lam[0][1];
    } else {
      lam[k][0] = (path.v[k] - 1) * lam[k][1];
      lam[k][2] = -path.v[k] * lam[k][1];
      lam[k][3] = 0.0;
    }
  }
  return out;
}

double dual_objective(const DualValues& dual, const PathView& path) {
  const auto& lam = dual.lambda;
  if (lam.empty()) return 0.0;
  double total = (1.0 - path.p[0]) * path.v[0] * lam[0][0] + lam[0][1];
  for (std::size_t k = 1; k < lam.size(); ++k) {
    const double q = 1.0 - path.p[k];
    total += q * path.v[k] * lam[k][0] + q * (path.v[k] - 1) * lam[k][3];
  }
  return total;
}

bool dual_feasibility_check(const DualValues& dual, const PathView& path, double tol) {
  const auto& lam = dual.lambda;
  const std::size_t len = lam.size();
  if (len != path.p.size()) return false;
  if (len == 0) return true;
  if (lam[0][0] + lam[0][1] > tol) return false;
  for (std::size_t k = 1; k < len; ++k) {
    if (lam[k][0] + lam[k][1] + lam[k][2] + lam[k][3] > tol) return false;
    if (lam[k][0] > tol || lam[k][2] > tol || lam[k][3] < -tol) return false;
  }
  for (std::size_t k = 0; k + 1 < len; ++k) {
    const double q = 1.0 - path.p[k + 1];
    if (lam[k][1] - q * (lam[k + 1][2] + lam[k + 1][3]) - lam[k + 1][1] > tol) return false;
  }
  return lam[len - 1][1] <= path.c + tol;
}

double BendersCut::rhs(const AttackVector& attack) const {
  double total = constant;
  for (const auto& [node, coef] : coeffs) {
    if (attack[node]) total += coef;
  }
  return total;
}

BendersCut make_cut(NodeId i, NodeId j, std::span<const NodeId> path, const PathView& view, const DualValues& dual) {
  BendersCut cut;
  cut.i = i;
  cut.j = j;
  const auto& lam = dual.lambda;
  cut.constant = lam[0][1];
  cut.coeffs.emplace_back(path[0], (1.0 - view.p[0]) * lam[0][0]);
  for (std::size_t k = 1; k < lam.size(); ++k) {
    const double q = 1.0 - view.p[k];
    cut.constant -= q * lam[k][3];
    cut.coeffs.emplace_back(path[k], q * (lam[k][0] + lam[k][3]));
  }
  std::erase_if(cut.coeffs, [](const auto& t) { return t.second == 0.0; });
  return cut;
}

std::string_view to_string(BendersStatus status) {
  switch (status) {
    case BendersStatus::kOptimal: return "Optimal";
    case BendersStatus::kTimeLimit: return "TimeLimit";
    case BendersStatus::kStalled: return "Stalled";
  }
  return "Unknown";
}

namespace {

using Clock = std::chrono::steady_clock;
using milp::Sense;
using milp::Term;

struct PairSlot {
  NodeId i;
  NodeId j;
  int z;
  std::vector<std::size_t> cuts;  // into cut_log
};

}  // namespace

BendersResult bd_scnp(const TreeInstance& instance, const BendersOptions& options) {
  if (!(options.eps > 0.0)) throw Error(ErrorKind::kInvalidArgument, "eps must be positive");
  const auto start = Clock::now();
  const int n = instance.node_count;
  const PathTable paths(instance);

  milp::LinearModel master;
  std::vector<int> v(static_cast<std::size_t>(n));
  for (NodeId i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = master.add_binary("v_" + std::to_string(i));
  {
    std::vector<Term> budget;
    for (NodeId i = 0; i < n; ++i) budget.push_back({v[static_cast<std::size_t>(i)], instance.attack_cost[static_cast<std::size_t>(i)]});
    master.add_row("budget", std::move(budget), Sense::kLessEqual, instance.budget);
  }
  for (NodeId i = 0; i < n; ++i) {
    if (instance.survival_prob[static_cast<std::size_t>(i)] == 1.0) {
      master.add_row("fix_" + std::to_string(i), {{v[static_cast<std::size_t>(i)], 1.0}}, Sense::kEqual, 0.0);
    }
  }
  if (options.use_valid_ineq) {
    for (const auto& [i, j] : valid_inequalities(instance)) {
      master.add_row("vi_" + std::to_string(i) + "_" + std::to_string(j),
                     {{v[static_cast<std::size_t>(i)], 1.0}, {v[static_cast<std::size_t>(j)], -1.0}}, Sense::kLessEqual, 0.0);
    }
  }
  std::vector<PairSlot> pairs;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (instance.connection_cost(i, j) <= 0.0) continue;
      const int z = master.add_continuous("z_" + std::to_string(i) + "_" + std::to_string(j), 0.0, milp::kInfinity, 1.0);
      pairs.push_back({i, j, z, {}});
    }
  }

  BendersResult result;
  result.attack = AttackVector(n);
  result.upper = std::numeric_limits<double>::infinity();
  result.lower = 0.0;
  result.status = BendersStatus::kTimeLimit;
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  milp::MilpOptions master_options;
  master_options.gap = 0.1 * options.eps;
  bool have_incumbent = false;

  while (true) {
    const double remaining = options.time_limit - elapsed();
    if (remaining <= 0.0) break;
    master_options.time_limit = remaining;
    if (have_incumbent) {
      std::vector<double> warm(static_cast<std::size_t>(master.variable_count()), 0.0);
      for (NodeId i = 0; i < n; ++i) warm[static_cast<std::size_t>(v[static_cast<std::size_t>(i)])] = result.attack[i] ? 1.0 : 0.0;
      for (const auto& slot : pairs) {
        double z = 0.0;
        for (std::size_t id : slot.cuts) z = std::max(z, result.cut_log[id].cut.rhs(result.attack));
        warm[static_cast<std::size_t>(slot.z)] = z;
      }
      master_options.initial_incumbent = std::move(warm);
    }
    const auto solved = milp::solve_milp(master, master_options);
    if (solved.status == milp::Status::kInfeasible || solved.status == milp::Status::kUnbounded) {
      throw Error(ErrorKind::kMasterInfeasible, "master problem reported " + std::string(milp::to_string(solved.status)));
    }
    if (std::isfinite(solved.bound)) result.lower = std::max(result.lower, solved.bound);
    if (solved.status != milp::Status::kOptimal || solved.x.empty()) {
      result.lower = std::min(result.lower, result.upper);
      break;
    }
    ++result.iterations;

    const AttackVector trial = attack_from_solution(solved.x, v);
    double value = 0.0;
    int added = 0;
    for (auto& slot : pairs) {
      const auto path = paths.path(slot.i, slot.j);
      const PathView view = path_view(instance, path, trial);
      const double slave = slave_primal(view).objective;
      value += slave;
      const double z = solved.x[static_cast<std::size_t>(slot.z)];
      if (slave == 0.0 || !(z < slave - 1e-9)) continue;
      BendersCut cut = make_cut(slot.i, slot.j, path, view, analytic_dual(view));
      std::vector<Term> terms{{slot.z, 1.0}};
      for (const auto& [node, coef] : cut.coeffs) terms.push_back({v[static_cast<std::size_t>(node)], -coef});
      master.add_row("cut_" + std::to_string(slot.i) + "_" + std::to_string(slot.j) + "_" + std::to_string(result.iterations),
                     std::move(terms), Sense::kGreaterEqual, cut.constant);
      slot.cuts.push_back(result.cut_log.size());
      result.cut_log.push_back({std::move(cut), result.iterations, z, trial});
      ++added;
    }
    result.cuts += added;
    if (value < result.upper) {
      result.upper = value;
      result.attack = trial;
      have_incumbent = true;
    }
    result.lower = std::min(result.lower, result.upper);
    result.trace.push_back({result.iterations, result.lower, result.upper, added, result.cuts, elapsed()});
    if (result.upper - result.lower <= options.eps) {
      result.status = BendersStatus::kOptimal;
      break;
    }
    if (added == 0) {
      result.status = BendersStatus::kStalled;
      break;
    }
  }
  if (!std::isfinite(result.upper)) {
    result.upper = 0.0;
    for (const auto& slot : pairs) result.upper += instance.connection_cost(slot.i, slot.j);
  }
  result.seconds = elapsed();
  return result;
}

void write_trace_csv(const std::vector<TraceRow>& trace, std::ostream& out) {
  out << "iteration,LB,UB,cuts_added,cumulative_cuts,elapsed\n";
  const auto precision = out.precision(12);
  for (const auto& row : trace) {
    out << row.iteration << ',' << row.lower << ',' << row.upper << ',' << row.cuts_added << ',' << row.cumulative_cuts << ','
        << row.elapsed << '\n';
  }
  out.precision(precision);
}

}  // namespace scnp
