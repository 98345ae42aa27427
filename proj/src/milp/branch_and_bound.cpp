#include "scnp/milp/branch_and_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>

#include "scnp/error.hpp"

namespace scnp::milp {

namespace {

using Clock = std::chrono::steady_clock;

struct Node {
  std::vector<double> lower;  // per integer variable
  std::vector<double> upper;
  double parent_bound = -kInfinity;
  std::shared_ptr<const Basis> basis;
};

struct ByBound {
  bool operator()(const std::unique_ptr<Node>& a, const std::unique_ptr<Node>& b) const {
    return a->parent_bound > b->parent_bound;
  }
};

class Search {
 public:
  Search(const LinearModel& model, const MilpOptions& options)
      : model_(model), options_(options), simplex_(model, options.lp), start_(Clock::now()) {
    for (int j = 0; j < model.variable_count(); ++j) {
      if (model.variable(j).integer) integers_.push_back(j);
    }
    if (std::isfinite(options.time_limit)) {
      deadline_ = start_ + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(options.time_limit));
      simplex_.set_deadline(deadline_);
    }
  }

  SolveResult run() {
    SolveResult result;
    take_initial_incumbent();

    auto root = std::make_unique<Node>();
    for (int j : integers_) {
      root->lower.push_back(std::ceil(model_.variable(j).lower - options_.integrality_tol));
      root->upper.push_back(std::floor(model_.variable(j).upper + options_.integrality_tol));
    }
    Status stop = Status::kOptimal;
    std::unique_ptr<Node> current = std::move(root);
    bool root_done = false;
    while (true) {
      if (!current) {
        if (open_.empty()) break;
        current = std::move(const_cast<std::unique_ptr<Node>&>(open_.top()));
        open_.pop();
        if (prunable(current->parent_bound)) {
          floor_ = std::min(floor_, current->parent_bound);
          current.reset();
          continue;
        }
      }
      if (deadline_ && Clock::now() > *deadline_) {
        stop = Status::kTimeLimit;
        break;
      }
      if (options_.node_limit >= 0 && nodes_ >= options_.node_limit) {
        stop = Status::kIterationLimit;
        break;
      }
      ++nodes_;
      for (std::size_t k = 0; k < integers_.size(); ++k) {
        simplex_.set_bounds(integers_[k], current->lower[k], current->upper[k]);
      }
      Status lp = solve_node(current->basis.get());
      if (lp == Status::kTimeLimit || lp == Status::kIterationLimit) {
        stop = lp == Status::kTimeLimit ? Status::kTimeLimit : Status::kIterationLimit;
        break;
      }
      if (lp == Status::kUnbounded) {
        if (!root_done) {
          result.status = Status::kUnbounded;
          result.nodes = nodes_;
          result.iterations = simplex_.iterations();
          return result;
        }
        throw Error(ErrorKind::kNumericalFailure, "unbounded relaxation below a bounded root");
      }
      root_done = true;
      if (lp == Status::kInfeasible) {
        current.reset();
        continue;
      }
      const double bound = simplex_.objective();
      if (prunable(bound)) {
        floor_ = std::min(floor_, bound);
        current.reset();
        continue;
      }
      const auto x = simplex_.primal();
      const int branch = most_fractional(x);
      if (branch < 0) {
        accept(x);
        current.reset();
        continue;
      }
      const int var = integers_[static_cast<std::size_t>(branch)];
      const double value = x[static_cast<std::size_t>(var)];
      auto basis = std::make_shared<const Basis>(simplex_.basis());
      auto down = std::make_unique<Node>(*current);
      down->upper[static_cast<std::size_t>(branch)] = std::floor(value);
      down->parent_bound = bound;
      down->basis = basis;
      auto up = std::move(current);
      up->lower[static_cast<std::size_t>(branch)] = std::ceil(value);
      up->parent_bound = bound;
      up->basis = basis;
      if (value - std::floor(value) >= 0.5) {
        open_.push(std::move(down));
        current = std::move(up);
      } else {
        open_.push(std::move(up));
        current = std::move(down);
      }
    }

    double bound = std::min(incumbent_value_, floor_);
    if (current) bound = std::min(bound, current->parent_bound);
    while (!open_.empty()) {
      bound = std::min(bound, open_.top()->parent_bound);
      open_.pop();
    }
    result.nodes = nodes_;
    result.iterations = simplex_.iterations();
    if (!incumbent_.empty()) {
      result.x = incumbent_;
      result.objective = incumbent_value_;
    }
    result.bound = bound;
    if (stop == Status::kOptimal) {
      result.status = incumbent_.empty() ? Status::kInfeasible : Status::kOptimal;
      if (incumbent_.empty()) result.bound = kInfinity;
    } else {
      result.status = stop;
    }
    return result;
  }

 private:
  bool prunable(double bound) const {
    return !incumbent_.empty() && bound >= incumbent_value_ - std::max(options_.gap, 1e-9);
  }

  Status solve_node(const Basis* warm) {
    try {
      return simplex_.solve(warm);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNumericalFailure || warm == nullptr) throw;
      return simplex_.solve(nullptr);
    }
  }

  int most_fractional(const std::vector<double>& x) const {
    int best = -1;
    double best_distance = 0.5 + 1e-12;
    for (std::size_t k = 0; k < integers_.size(); ++k) {
      const double v = x[static_cast<std::size_t>(integers_[k])];
      const double frac = v - std::floor(v);
      if (frac <= options_.integrality_tol || frac >= 1.0 - options_.integrality_tol) continue;
      const double distance = std::abs(frac - 0.5);
      if (distance < best_distance) {
        best_distance = distance;
        best = static_cast<int>(k);
      }
    }
    return best;
  }

  void accept(std::vector<double> x) {
    for (int j : integers_) x[static_cast<std::size_t>(j)] = std::round(x[static_cast<std::size_t>(j)]);
    const double value = model_.objective_value(x);
    if (incumbent_.empty() || value < incumbent_value_) {
      incumbent_ = std::move(x);
      incumbent_value_ = value;
    }
  }

  void take_initial_incumbent() {
    if (!options_.initial_incumbent) return;
    const auto& x = *options_.initial_incumbent;
    if (x.size() != static_cast<std::size_t>(model_.variable_count())) return;
    for (int j : integers_) {
      const double v = x[static_cast<std::size_t>(j)];
      if (std::abs(v - std::round(v)) > options_.integrality_tol) return;
    }
    if (model_.max_violation(x) > 1e-6) return;
    accept(x);
  }

  const LinearModel& model_;
  const MilpOptions& options_;
  Simplex simplex_;
  Clock::time_point start_;
  std::optional<Clock::time_point> deadline_;
  std::vector<int> integers_;
  std::priority_queue<std::unique_ptr<Node>, std::vector<std::unique_ptr<Node>>, ByBound> open_;
  std::vector<double> incumbent_;
  double incumbent_value_ = kInfinity;
  double floor_ = kInfinity;
  long nodes_ = 0;
};

}  // namespace

SolveResult solve_milp(const LinearModel& model, const MilpOptions& options) {
  model.check();
  Search search(model, options);
  return search.run();
}

}  // namespace scnp::milp
