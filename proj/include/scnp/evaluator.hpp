#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "scnp/instance.hpp"

namespace scnp {

// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// Survival factor of one node: 1 - (1 - p_k) v_k.
inline double survival_factor(const TreeInstance& instance, const AttackVector& attack, NodeId k) {
  return attack[k] ? instance.survival_prob[static_cast<std::size_t>(k)] : 1.0;
}

// Probability that every node on the path survives.
double path_survival(const TreeInstance& instance, std::span<const NodeId> path, const AttackVector& attack);

// sum_{i<j} c_ij prod_{k in P_ij} (1 - (1 - p_k) v_k), via prefix products
// along one DFS per source node: O(n^2).
double objective_tree(const TreeInstance& instance, const AttackVector& attack);

// Same quantity, walking every stored path.
double objective_tree(const TreeInstance& instance, const PathTable& paths, const AttackVector& attack);

inline constexpr int kMaxScenarioAttacked = 25;

// Expected pairwise connectivity by enumerating the 2^|S| survival outcomes
// of the attacked nodes. Uses only the edge list, so any connected graph works.
// Throws TooManyAttackedNodes when |S| > 25.
double objective_scenarios(const TreeInstance& instance, const AttackVector& attack);

struct ExhaustiveResult {
  AttackVector attack;
  double value = 0.0;
  std::uint64_t evaluated = 0;
};

inline constexpr int kMaxExhaustiveCandidates = 20;

// Enumerates every budget-feasible attack vector that leaves p_i = 1 nodes
// alone. Ties resolve to the lexicographically smallest v. Throws
// InstanceTooLarge when more than 20 nodes are attackable (p_i < 1 and
// kappa_i <= K).
ExhaustiveResult exhaustive_solve(const TreeInstance& instance);

}  // namespace scnp
