#include "scnp/milp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "scnp/error.hpp"

namespace scnp::milp {

std::string_view to_string(Status status) {
  switch (status) {
    case Status::kOptimal: return "Optimal";
    case Status::kInfeasible: return "Infeasible";
    case Status::kUnbounded: return "Unbounded";
    case Status::kIterationLimit: return "IterationLimit";
    case Status::kTimeLimit: return "TimeLimit";
  }
  return "Unknown";
}

namespace {

// Column replacement factor of the product-form inverse: pivot row r, the
// FTRAN'd entering column entries off the pivot row in (idx, val).
struct Eta {
  int row = 0;
  double pivot = 1.0;
  std::vector<int> idx;
  std::vector<double> val;
};

constexpr double kDropTolerance = 1e-14;
constexpr int kMaxNumericalRetries = 8;

}  // namespace

struct Simplex::Impl {
  LpOptions opt;
  int n = 0;  // structurals
  int m = 0;  // rows
  std::vector<int> col_start;
  std::vector<int> col_row;
  std::vector<double> col_val;
  std::vector<double> cost;
  std::vector<double> lb;
  std::vector<double> ub;

  std::vector<double> x;
  std::vector<VarStatus> status;
  std::vector<int> head;
  std::vector<int> pos;
  std::vector<Eta> etas;
  bool fresh = false;  // x and factors recomputed since the last pivot
  int refactor_base = 0;  // etas produced by the last reinversion
  bool bland = false;
  int degenerate_streak = 0;
  long iters = 0;
  Status last = Status::kInfeasible;

  std::vector<double> work_y;
  std::vector<double> work_alpha;
  std::vector<double> work_cb;

  Impl(const LinearModel& model, LpOptions options) : opt(options) {
    model.check();
    n = model.variable_count();
    m = model.row_count();
    const int total = n + m;
    cost.assign(static_cast<std::size_t>(total), 0.0);
    lb.assign(static_cast<std::size_t>(total), 0.0);
    ub.assign(static_cast<std::size_t>(total), 0.0);
    for (int j = 0; j < n; ++j) {
      const auto& v = model.variable(j);
      cost[static_cast<std::size_t>(j)] = v.objective;
      lb[static_cast<std::size_t>(j)] = v.lower;
      ub[static_cast<std::size_t>(j)] = v.upper;
    }
    for (int i = 0; i < m; ++i) {
      const auto& r = model.row(i);
      const auto k = static_cast<std::size_t>(n + i);
      switch (r.sense) {
        case Sense::kLessEqual: lb[k] = -kInfinity; ub[k] = r.rhs; break;
        case Sense::kGreaterEqual: lb[k] = r.rhs; ub[k] = kInfinity; break;
        case Sense::kEqual: lb[k] = r.rhs; ub[k] = r.rhs; break;
      }
    }
    // CSC copy of the structural columns.
    std::vector<int> count(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& r : model.rows()) {
      for (const auto& t : r.terms) ++count[static_cast<std::size_t>(t.var) + 1];
    }
    std::partial_sum(count.begin(), count.end(), count.begin());
    col_start = count;
    col_row.resize(static_cast<std::size_t>(col_start.back()));
    col_val.resize(col_row.size());
    std::vector<int> fill(col_start.begin(), col_start.end() - 1);
    for (int i = 0; i < m; ++i) {
      for (const auto& t : model.row(i).terms) {
        const auto slot = static_cast<std::size_t>(fill[static_cast<std::size_t>(t.var)]++);
        col_row[slot] = i;
        col_val[slot] = t.coef;
      }
    }
    x.assign(static_cast<std::size_t>(total), 0.0);
    status.assign(static_cast<std::size_t>(total), VarStatus::kAtLower);
    head.assign(static_cast<std::size_t>(m), 0);
    pos.assign(static_cast<std::size_t>(total), -1);
    work_y.assign(static_cast<std::size_t>(m), 0.0);
    work_alpha.assign(static_cast<std::size_t>(m), 0.0);
    work_cb.assign(static_cast<std::size_t>(m), 0.0);
  }

  int total() const { return n + m; }

  // --- linear algebra ------------------------------------------------------

  void load_column(int j, std::vector<double>& dense) const {
    std::fill(dense.begin(), dense.end(), 0.0);
    if (j < n) {
      for (int k = col_start[static_cast<std::size_t>(j)]; k < col_start[static_cast<std::size_t>(j) + 1]; ++k) {
        dense[static_cast<std::size_t>(col_row[static_cast<std::size_t>(k)])] = col_val[static_cast<std::size_t>(k)];
      }
    } else {
      dense[static_cast<std::size_t>(j - n)] = -1.0;
    }
  }

  double dot_column(int j, const std::vector<double>& y) const {
    if (j >= n) return -y[static_cast<std::size_t>(j - n)];
    double s = 0.0;
    for (int k = col_start[static_cast<std::size_t>(j)]; k < col_start[static_cast<std::size_t>(j) + 1]; ++k) {
      s += y[static_cast<std::size_t>(col_row[static_cast<std::size_t>(k)])] * col_val[static_cast<std::size_t>(k)];
    }
    return s;
  }

  int column_nnz(int j) const {
    return j < n ? col_start[static_cast<std::size_t>(j) + 1] - col_start[static_cast<std::size_t>(j)] : 1;
  }

  // a <- B^{-1} a, with B^{-1} = E_k ... E_1 (-I).
  void ftran(std::vector<double>& a) const {
    for (auto& v : a) v = -v;
    for (const auto& eta : etas) {
      double& ar = a[static_cast<std::size_t>(eta.row)];
      if (ar == 0.0) continue;
      ar /= eta.pivot;
      const double xr = ar;
      for (std::size_t k = 0; k < eta.idx.size(); ++k) a[static_cast<std::size_t>(eta.idx[k])] -= eta.val[k] * xr;
    }
  }

  // y <- y^T B^{-1}.
  void btran(std::vector<double>& y) const {
    for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
      double s = y[static_cast<std::size_t>(it->row)];
      for (std::size_t k = 0; k < it->idx.size(); ++k) s -= y[static_cast<std::size_t>(it->idx[k])] * it->val[k];
      y[static_cast<std::size_t>(it->row)] = s / it->pivot;
    }
    for (auto& v : y) v = -v;
  }

  void push_eta(int row, const std::vector<double>& alpha) {
    Eta eta;
    eta.row = row;
    eta.pivot = alpha[static_cast<std::size_t>(row)];
    for (int i = 0; i < m; ++i) {
      const double a = alpha[static_cast<std::size_t>(i)];
      if (i != row && std::abs(a) > kDropTolerance) {
        eta.idx.push_back(i);
        eta.val.push_back(a);
      }
    }
    etas.push_back(std::move(eta));
  }

  // --- basis bookkeeping ---------------------------------------------------

  VarStatus resting_status(int j) const {
    const auto k = static_cast<std::size_t>(j);
    if (std::isfinite(lb[k])) return VarStatus::kAtLower;
    if (std::isfinite(ub[k])) return VarStatus::kAtUpper;
    return VarStatus::kFree;
  }

  double nonbasic_value(int j) const {
    const auto k = static_cast<std::size_t>(j);
    switch (status[k]) {
      case VarStatus::kAtLower: return lb[k];
      case VarStatus::kAtUpper: return ub[k];
      default: return 0.0;
    }
  }

  // Statuses must reference finite bounds.
  void normalize_nonbasic(int j) {
    const auto k = static_cast<std::size_t>(j);
    if (status[k] == VarStatus::kBasic) return;
    if (status[k] == VarStatus::kAtLower && !std::isfinite(lb[k])) status[k] = resting_status(j);
    if (status[k] == VarStatus::kAtUpper && !std::isfinite(ub[k])) status[k] = resting_status(j);
    if (status[k] == VarStatus::kFree && (std::isfinite(lb[k]) || std::isfinite(ub[k]))) status[k] = resting_status(j);
    x[k] = nonbasic_value(j);
  }

  // Rebuilds the product-form inverse for the basic set in `head`; columns
  // that turn out dependent are swapped for logicals.
  void reinvert() {
    etas.clear();
    std::vector<int> target = head;
    std::vector<int> new_head(static_cast<std::size_t>(m), -1);
    std::vector<char> taken(static_cast<std::size_t>(m), 0);
    std::vector<int> structurals;
    for (int j : target) {
      if (j >= n) {
        new_head[static_cast<std::size_t>(j - n)] = j;
        taken[static_cast<std::size_t>(j - n)] = 1;
      } else {
        structurals.push_back(j);
      }
    }
    std::stable_sort(structurals.begin(), structurals.end(),
                     [&](int a, int b) { return column_nnz(a) < column_nnz(b); });
    std::vector<double>& alpha = work_alpha;
    for (int q : structurals) {
      load_column(q, alpha);
      ftran(alpha);
      int best = -1;
      double best_abs = 0.0;
      for (int i = 0; i < m; ++i) {
        if (taken[static_cast<std::size_t>(i)]) continue;
        const double a = std::abs(alpha[static_cast<std::size_t>(i)]);
        if (a > best_abs) {
          best_abs = a;
          best = i;
        }
      }
      if (best < 0 || best_abs < opt.pivot_tol) {
        status[static_cast<std::size_t>(q)] = resting_status(q);
        pos[static_cast<std::size_t>(q)] = -1;
        x[static_cast<std::size_t>(q)] = nonbasic_value(q);
        continue;
      }
      push_eta(best, alpha);
      taken[static_cast<std::size_t>(best)] = 1;
      new_head[static_cast<std::size_t>(best)] = q;
    }
    for (int i = 0; i < m; ++i) {
      if (new_head[static_cast<std::size_t>(i)] < 0) new_head[static_cast<std::size_t>(i)] = n + i;
    }
    head = std::move(new_head);
    std::fill(pos.begin(), pos.end(), -1);
    for (int r = 0; r < m; ++r) {
      const int j = head[static_cast<std::size_t>(r)];
      pos[static_cast<std::size_t>(j)] = r;
      status[static_cast<std::size_t>(j)] = VarStatus::kBasic;
    }
    for (int j = 0; j < total(); ++j) {
      if (pos[static_cast<std::size_t>(j)] < 0 && status[static_cast<std::size_t>(j)] == VarStatus::kBasic) {
        status[static_cast<std::size_t>(j)] = resting_status(j);
      }
      if (pos[static_cast<std::size_t>(j)] < 0) normalize_nonbasic(j);
    }
    refactor_base = static_cast<int>(etas.size());
    compute_basics();
    fresh = true;
  }

  void compute_basics() {
    std::vector<double>& rhs = work_alpha;
    std::fill(rhs.begin(), rhs.end(), 0.0);
    for (int j = 0; j < total(); ++j) {
      if (status[static_cast<std::size_t>(j)] == VarStatus::kBasic) continue;
      const double xj = x[static_cast<std::size_t>(j)];
      if (xj == 0.0) continue;
      if (j < n) {
        for (int k = col_start[static_cast<std::size_t>(j)]; k < col_start[static_cast<std::size_t>(j) + 1]; ++k) {
          rhs[static_cast<std::size_t>(col_row[static_cast<std::size_t>(k)])] -= col_val[static_cast<std::size_t>(k)] * xj;
        }
      } else {
        rhs[static_cast<std::size_t>(j - n)] += xj;
      }
    }
    ftran(rhs);
    for (int r = 0; r < m; ++r) x[static_cast<std::size_t>(head[static_cast<std::size_t>(r)])] = rhs[static_cast<std::size_t>(r)];
  }

  void cold_start() {
    for (int j = 0; j < n; ++j) {
      status[static_cast<std::size_t>(j)] = resting_status(j);
      x[static_cast<std::size_t>(j)] = nonbasic_value(j);
    }
    for (int i = 0; i < m; ++i) head[static_cast<std::size_t>(i)] = n + i;
    reinvert();
  }

  void warm_start(const Basis& basis) {
    if (basis.status.size() != static_cast<std::size_t>(total()) || basis.head.size() != static_cast<std::size_t>(m)) {
      cold_start();
      return;
    }
    status = basis.status;
    head = basis.head;
    for (int j = 0; j < total(); ++j) {
      if (status[static_cast<std::size_t>(j)] != VarStatus::kBasic) normalize_nonbasic(j);
    }
    reinvert();
  }

  // --- iterations ----------------------------------------------------------

  bool deadline_passed() const {
    return opt.deadline && std::chrono::steady_clock::now() > *opt.deadline;
  }

  struct Choice {
    int row = -1;  // -1 with flip == false: unbounded
    double step = 0.0;
    bool to_upper = false;
    bool flip = false;
  };

  Choice ratio_test(int q, int dir, const std::vector<double>& alpha) const {
    const double ftol = opt.feasibility_tol;
    const auto kq = static_cast<std::size_t>(q);
    const double flip_ratio = (std::isfinite(lb[kq]) && std::isfinite(ub[kq])) ? ub[kq] - lb[kq] : kInfinity;

    struct Candidate {
      int row;
      double exact;
      double relaxed;
      bool to_upper;
    };
    thread_local std::vector<Candidate> candidates;
    candidates.clear();
    double theta_max = kInfinity;
    for (int r = 0; r < m; ++r) {
      const double a = alpha[static_cast<std::size_t>(r)];
      if (std::abs(a) <= opt.pivot_tol) continue;
      const auto j = static_cast<std::size_t>(head[static_cast<std::size_t>(r)]);
      const double rate = -dir * a;
      const double xv = x[j];
      double target;
      bool to_upper;
      if (rate > 0) {
        if (xv < lb[j] - ftol) {
          target = lb[j];
          to_upper = false;
        } else if (xv > ub[j] + ftol || !std::isfinite(ub[j])) {
          continue;
        } else {
          target = ub[j];
          to_upper = true;
        }
      } else {
        if (xv > ub[j] + ftol) {
          target = ub[j];
          to_upper = true;
        } else if (xv < lb[j] - ftol || !std::isfinite(lb[j])) {
          continue;
        } else {
          target = lb[j];
          to_upper = false;
        }
      }
      const double slack = rate > 0 ? ftol : -ftol;
      const double exact = std::max(0.0, (target - xv) / rate);
      const double relaxed = std::max(0.0, (target + slack - xv) / rate);
      candidates.push_back({r, exact, relaxed, to_upper});
      theta_max = std::min(theta_max, relaxed);
    }

    Choice choice;
    if (bland) {
      double best = kInfinity;
      int best_var = std::numeric_limits<int>::max();
      for (const auto& c : candidates) {
        const int var = head[static_cast<std::size_t>(c.row)];
        if (c.exact < best - 1e-12 || (c.exact <= best + 1e-12 && var < best_var)) {
          best = c.exact;
          best_var = var;
          choice = {c.row, c.exact, c.to_upper, false};
        }
      }
    } else {
      double best_alpha = 0.0;
      for (const auto& c : candidates) {
        if (c.exact > theta_max) continue;
        const double a = std::abs(alpha[static_cast<std::size_t>(c.row)]);
        if (a > best_alpha) {
          best_alpha = a;
          choice = {c.row, c.exact, c.to_upper, false};
        }
      }
    }
    if (std::isfinite(flip_ratio) && (choice.row < 0 || flip_ratio <= choice.step)) {
      choice = {-1, flip_ratio, dir > 0, true};
    }
    return choice;
  }

  Status iterate() {
    int retries = 0;
    const double ftol = opt.feasibility_tol;
    const double otol = opt.optimality_tol;
    std::vector<double>& y = work_y;
    std::vector<double>& alpha = work_alpha;
    std::vector<double>& cb = work_cb;
    long local = 0;
    while (true) {
      if (iters >= opt.iteration_limit) return Status::kIterationLimit;
      if ((local++ & 63) == 0 && deadline_passed()) return Status::kTimeLimit;
      if (static_cast<int>(etas.size()) >= opt.refactor_interval + refactor_base) reinvert();

      bool phase1 = false;
      for (int r = 0; r < m; ++r) {
        const auto j = static_cast<std::size_t>(head[static_cast<std::size_t>(r)]);
        if (x[j] < lb[j] - ftol || x[j] > ub[j] + ftol) {
          phase1 = true;
          break;
        }
      }
      for (int r = 0; r < m; ++r) {
        const auto j = static_cast<std::size_t>(head[static_cast<std::size_t>(r)]);
        if (phase1) {
          cb[static_cast<std::size_t>(r)] = x[j] < lb[j] - ftol ? -1.0 : (x[j] > ub[j] + ftol ? 1.0 : 0.0);
        } else {
          cb[static_cast<std::size_t>(r)] = cost[j];
        }
      }
      y = cb;
      btran(y);

      int entering = -1;
      int dir = 0;
      double best_score = 0.0;
      for (int j = 0; j < total(); ++j) {
        const auto k = static_cast<std::size_t>(j);
        const VarStatus st = status[k];
        if (st == VarStatus::kBasic || lb[k] == ub[k]) continue;
        const double d = (phase1 ? 0.0 : cost[k]) - dot_column(j, y);
        int candidate_dir = 0;
        if (st == VarStatus::kAtLower && d < -otol) candidate_dir = 1;
        else if (st == VarStatus::kAtUpper && d > otol) candidate_dir = -1;
        else if (st == VarStatus::kFree && std::abs(d) > otol) candidate_dir = d < 0 ? 1 : -1;
        if (candidate_dir == 0) continue;
        if (bland) {
          entering = j;
          dir = candidate_dir;
          break;
        }
        if (std::abs(d) > best_score) {
          best_score = std::abs(d);
          entering = j;
          dir = candidate_dir;
        }
      }

      if (entering < 0) {
        if (!fresh) {
          reinvert();
          continue;
        }
        return phase1 ? Status::kInfeasible : Status::kOptimal;
      }

      load_column(entering, alpha);
      ftran(alpha);
      const Choice choice = ratio_test(entering, dir, alpha);
      if (choice.row < 0 && !choice.flip) {
        if (!phase1) return Status::kUnbounded;
        // A phase 1 ray contradicts the bounded infeasibility objective.
        if (++retries > kMaxNumericalRetries) {
          throw Error(ErrorKind::kNumericalFailure, "phase 1 produced an unbounded ray");
        }
        reinvert();
        continue;
      }
      if (!choice.flip && std::abs(alpha[static_cast<std::size_t>(choice.row)]) < 1e3 * opt.pivot_tol && !fresh) {
        // Tiny pivot on stale factors: refactor and price again.
        if (++retries > kMaxNumericalRetries) {
          throw Error(ErrorKind::kNumericalFailure, "repeated tiny pivots");
        }
        reinvert();
        continue;
      }

      const double step = choice.step;
      const auto kq = static_cast<std::size_t>(entering);
      if (step != 0.0) {
        x[kq] += dir * step;
        for (int r = 0; r < m; ++r) {
          const double a = alpha[static_cast<std::size_t>(r)];
          if (a != 0.0) x[static_cast<std::size_t>(head[static_cast<std::size_t>(r)])] -= dir * step * a;
        }
      }
      if (choice.flip) {
        status[kq] = dir > 0 ? VarStatus::kAtUpper : VarStatus::kAtLower;
        x[kq] = nonbasic_value(entering);
      } else {
        const int r = choice.row;
        const auto out = static_cast<std::size_t>(head[static_cast<std::size_t>(r)]);
        status[out] = choice.to_upper ? VarStatus::kAtUpper : VarStatus::kAtLower;
        x[out] = choice.to_upper ? ub[out] : lb[out];
        pos[out] = -1;
        head[static_cast<std::size_t>(r)] = entering;
        pos[kq] = r;
        status[kq] = VarStatus::kBasic;
        push_eta(r, alpha);
      }
      fresh = false;
      ++iters;
      if (step <= 1e-12) {
        if (++degenerate_streak > opt.degenerate_streak_limit) bland = true;
      } else {
        degenerate_streak = 0;
        bland = false;
      }
    }
  }


  Status solve(const Basis* warm) {
    bland = false;
    degenerate_streak = 0;
    if (warm != nullptr) {
      warm_start(*warm);
    } else {
      cold_start();
    }
    last = iterate();
    return last;
  }

  std::vector<double> phase2_duals() const {
    std::vector<double> y(static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r) y[static_cast<std::size_t>(r)] = cost[static_cast<std::size_t>(head[static_cast<std::size_t>(r)])];
    btran(y);
    return y;
  }
};

Simplex::Simplex(const LinearModel& model, LpOptions options) : impl_(std::make_unique<Impl>(model, options)) {}
Simplex::~Simplex() = default;

void Simplex::set_bounds(int var, double lower, double upper) {
  impl_->lb[static_cast<std::size_t>(var)] = lower;
  impl_->ub[static_cast<std::size_t>(var)] = upper;
}
double Simplex::lower(int var) const { return impl_->lb[static_cast<std::size_t>(var)]; }
double Simplex::upper(int var) const { return impl_->ub[static_cast<std::size_t>(var)]; }
void Simplex::set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline) { impl_->opt.deadline = deadline; }

Status Simplex::solve(const Basis* warm) { return impl_->solve(warm); }

Basis Simplex::basis() const { return {impl_->status, impl_->head}; }

std::vector<double> Simplex::primal() const {
  return {impl_->x.begin(), impl_->x.begin() + impl_->n};
}

double Simplex::objective() const {
  double total = 0.0;
  for (int j = 0; j < impl_->n; ++j) total += impl_->cost[static_cast<std::size_t>(j)] * impl_->x[static_cast<std::size_t>(j)];
  return total;
}

std::vector<double> Simplex::duals() const { return impl_->phase2_duals(); }

std::vector<double> Simplex::reduced_costs() const {
  const auto y = impl_->phase2_duals();
  std::vector<double> d(static_cast<std::size_t>(impl_->n));
  for (int j = 0; j < impl_->n; ++j) d[static_cast<std::size_t>(j)] = impl_->cost[static_cast<std::size_t>(j)] - impl_->dot_column(j, y);
  return d;
}

double Simplex::dual_objective() const {
  const auto y = impl_->phase2_duals();
  double total = 0.0;
  for (int j = 0; j < impl_->total(); ++j) {
    const auto k = static_cast<std::size_t>(j);
    if (impl_->status[k] == VarStatus::kBasic) continue;
    const double d = impl_->cost[k] - impl_->dot_column(j, y);
    total += d * impl_->x[k];
  }
  return total;
}

long Simplex::iterations() const { return impl_->iters; }

SolveResult solve_lp(const LinearModel& model, const LpOptions& options) {
  Simplex simplex(model, options);
  SolveResult result;
  result.status = simplex.solve();
  result.iterations = simplex.iterations();
  result.x = simplex.primal();
  result.objective = simplex.objective();
  if (result.status == Status::kOptimal) {
    result.duals = simplex.duals();
    result.reduced_costs = simplex.reduced_costs();
    result.dual_objective = simplex.dual_objective();
    result.bound = result.objective;
  }
  return result;
}

}  // namespace scnp::milp
