#pragma once

#include <cstdint>

#include "scnp/instance.hpp"

namespace scnp {

// Which probability multiplies the child's own term in the sibling merge.
// kChild uses the merged child a_i; kNextSibling uses a_{i+1}. Only the
// former is exact; the latter is kept for comparison in tests.
enum class DpReading { kChild, kNextSibling };

// Scaled connection value of a subtree made of its root alone: 0, or
// mu * pi_a (pi_a = p_a when attacked, 1 otherwise).
enum class DpBaseConvention { kZero, kSelfProbability };

struct DpOptions {
  DpReading reading = DpReading::kChild;
  DpBaseConvention base = DpBaseConvention::kZero;
  // Upper limit on materialised states over the whole run.
  std::int64_t state_cap = 20'000'000;
};

struct DpCounters {
  std::int64_t states = 0;
  std::int64_t transitions = 0;
};

struct ApproxResult {
  double truncated_value = 0.0;  // lower bound on the optimum
  AttackVector attack;
  double exact_value = 0.0;      // objective_tree of `attack`
  double slack = 0.0;            // n(n-1) / (2 mu)
  DpCounters counters;
};

// Tree DP with every cross-connection term truncated to nu decimals.
// Requires unit connection and attack costs (NonUnitCosts otherwise);
// throws StateOverflow past options.state_cap.
ApproxResult dp_solve(const TreeInstance& instance, int budget, int nu, NodeId root = 0, const DpOptions& options = {});

}  // namespace scnp
