#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "scnp/dp.hpp"
#include "scnp/error.hpp"
#include "scnp/evaluator.hpp"
#include "scnp/generator.hpp"

using namespace scnp;
using testing_helpers::make_tree;

namespace {

TreeInstance unit_instance(int n, std::uint64_t seed, int budget) {
  auto t = generate_instance(n, WeightScheme::kUnit, seed);
  t.budget = budget;
  return t;
}

TreeInstance tree_from_edges(int n, const std::vector<Edge>& edges, Rng& rng, int budget) {
  TreeInstance t;
  t.node_count = n;
  t.edges = edges;
  for (int i = 0; i < n; ++i) {
    const auto roll = rng.uniform_int(0, 9);
    t.survival_prob.push_back(roll == 0 ? 0.0 : roll == 1 ? 1.0 : static_cast<double>(rng.uniform_int(0, 100)) / 100.0);
  }
  t.attack_cost.assign(static_cast<std::size_t>(n), 1.0);
  t.connection_cost = ConnectionCosts::unit(n);
  t.budget = budget;
  return t;
}

// Exact agreement with the oracle at nu = 6 on every labeled tree up to `max_n` nodes.
int mismatches(const DpOptions& options, int max_n) {
  Rng rng(99, RandomStream::kAuxiliary);
  int bad = 0;
  for (int n = 2; n <= max_n; ++n) {
    for (const auto& edges : oracle::all_labeled_trees(n)) {
      const int budget = static_cast<int>(rng.uniform_int(0, 3));
      const auto t = tree_from_edges(n, edges, rng, budget);
      const double opt = exhaustive_solve(t).value;
      const auto r = dp_solve(t, budget, 6, static_cast<NodeId>(rng.uniform_int(0, n - 1)), options);
      if (r.truncated_value > opt + 1e-9 || opt - r.truncated_value > 1e-4) ++bad;
    }
  }
  return bad;
}

}  // namespace

TEST(Dp, TwoNodeTree) {
  const auto t = make_tree(2, {{0, 1}}, {0.37, 0.52}, 1.0);
  for (int nu = 1; nu <= 6; ++nu) {
    const auto r = dp_solve(t, 1, nu);
    EXPECT_TRUE(r.attack[0]);
    EXPECT_FALSE(r.attack[1]);
    EXPECT_NEAR(r.exact_value, 0.37, 1e-12);
    EXPECT_LE(r.truncated_value, 0.37 + 1e-12);
    EXPECT_GE(r.truncated_value, 0.37 - std::pow(10.0, -nu) - 1e-12);
  }
}

TEST(Dp, ZeroBudgetIsExact) {
  for (int n = 2; n <= 12; ++n) {
    const auto t = unit_instance(n, static_cast<std::uint64_t>(n), 0);
    const auto r = dp_solve(t, 0, 3);
    EXPECT_EQ(r.truncated_value, n * (n - 1) / 2.0);
    EXPECT_EQ(r.exact_value, n * (n - 1) / 2.0);
    EXPECT_EQ(r.attack.attacked_count(), 0);
  }
}

TEST(Dp, SandwichAtNu4) {
  for (int seed = 0; seed < 60; ++seed) {
    const int n = 3 + seed % 10;
    const int budget = 1 + seed % 3;
    const auto t = unit_instance(n, static_cast<std::uint64_t>(seed), budget);
    const double opt = exhaustive_solve(t).value;
    const auto r = dp_solve(t, budget, 4);
    const double slack = n * (n - 1) / (2.0 * 1e4);
    EXPECT_NEAR(r.slack, slack, 1e-15);
    EXPECT_LE(r.truncated_value, opt + 1e-9) << "seed " << seed;
    EXPECT_LE(opt, r.exact_value + 1e-12) << "seed " << seed;
    EXPECT_LE(r.exact_value, r.truncated_value + slack + 1e-9) << "seed " << seed;
    EXPECT_NEAR(objective_tree(t, r.attack), r.exact_value, 1e-12);
    EXPECT_LE(r.attack.attacked_count(), budget);
    EXPECT_TRUE(r.attack.is_feasible(t));
  }
}

TEST(Dp, RootChoiceDoesNotMatter) {
  const auto t = unit_instance(9, 4, 2);
  const double opt = exhaustive_solve(t).value;
  for (NodeId root = 0; root < 9; ++root) EXPECT_NEAR(dp_solve(t, 2, 6, root).truncated_value, opt, 1e-4);
}

TEST(Dp, ChildReadingWithZeroBaseReproducesOracle) {
  EXPECT_EQ(mismatches({.reading = DpReading::kChild, .base = DpBaseConvention::kZero}, 6), 0);
}

TEST(Dp, OtherVariantsDisagreeWithOracle) {
  EXPECT_GT(mismatches({.reading = DpReading::kNextSibling, .base = DpBaseConvention::kZero}, 5), 0);
  EXPECT_GT(mismatches({.reading = DpReading::kChild, .base = DpBaseConvention::kSelfProbability}, 5), 0);
}

TEST(Dp, RefinementDoesNotWidenGap) {
  for (int seed = 0; seed < 30; ++seed) {
    const int n = 6 + seed % 7;
    const int budget = 1 + seed % 3;
    const auto t = unit_instance(n, static_cast<std::uint64_t>(200 + seed), budget);
    double previous = std::numeric_limits<double>::infinity();
    for (int nu = 1; nu <= 5; ++nu) {
      const auto r = dp_solve(t, budget, nu);
      const double gap = r.exact_value - r.truncated_value;
      EXPECT_LE(gap, previous + 1e-12) << "seed " << seed << " nu " << nu;
      previous = gap;
    }
  }
}

TEST(Dp, CountersWithinEnvelope) {
  for (int n : {4, 6, 8, 10}) {
    for (int nu : {1, 2, 3}) {
      const int budget = 2;
      const auto t = unit_instance(n, static_cast<std::uint64_t>(n + nu), budget);
      const auto r = dp_solve(t, budget, nu);
      const double mu = std::pow(10.0, nu);
      const double per_node = 2.0 * (n * mu + 1.0) * (budget + 1);
      EXPECT_GT(r.counters.states, 0);
      EXPECT_LE(static_cast<double>(r.counters.states), n * per_node);
      EXPECT_LE(static_cast<double>(r.counters.transitions), n * per_node * per_node);
    }
  }
}

TEST(Dp, RejectsNonUnitCosts) {
  auto t = unit_instance(5, 1, 1);
  t.attack_cost[2] = 2.0;
  try {
    (void)dp_solve(t, 1, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNonUnitCosts);
  }
  auto c = unit_instance(5, 1, 1);
  c.connection_cost.set(0, 3, 0.5);
  EXPECT_THROW((void)dp_solve(c, 1, 2), Error);
}

TEST(Dp, RejectsBadArguments) {
  const auto t = unit_instance(5, 1, 1);
  EXPECT_THROW((void)dp_solve(t, -1, 2), Error);
  EXPECT_THROW((void)dp_solve(t, 1, 0), Error);
  EXPECT_THROW((void)dp_solve(t, 1, 10), Error);
  EXPECT_THROW((void)dp_solve(t, 1, 2, 5), Error);
}

TEST(Dp, StateCapRaisesOverflow) {
  const auto t = unit_instance(10, 3, 3);
  try {
    (void)dp_solve(t, 3, 4, 0, {.state_cap = 50});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kStateOverflow);
  }
}
