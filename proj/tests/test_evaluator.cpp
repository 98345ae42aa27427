#include <gtest/gtest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "scnp/evaluator.hpp"
#include "scnp/generator.hpp"

using namespace scnp;
using testing_helpers::make_tree;
using testing_helpers::path3;

TEST(ObjectiveTree, MiddleNodeOfPath) {
  const auto t = path3(0.5);
  const auto a = AttackVector::from_set(3, std::vector<NodeId>{1});
  EXPECT_NEAR(objective_tree(t, a), 1.5, 1e-12);
  EXPECT_NEAR(objective_tree(t, PathTable(t), a), 1.5, 1e-12);
}

TEST(ObjectiveTree, EmptyAttackGivesTotalCost) {
  const auto t = generate_instance(12, WeightScheme::kType1, 3);
  EXPECT_NEAR(objective_tree(t, AttackVector(12)), t.connection_cost.total(), 1e-9);
}

TEST(ObjectiveTree, ZeroProbabilityCutsPath) {
  const auto t = make_tree(4, {{0, 1}, {1, 2}, {2, 3}}, {0.5, 0.0, 0.5, 0.5}, 1.0);
  const auto a = AttackVector::from_set(4, std::vector<NodeId>{1});
  EXPECT_NEAR(objective_tree(t, a), 1.0, 1e-12);
}

TEST(ObjectiveScenarios, MiddleNodeOfPath) {
  const auto t = path3(0.5);
  EXPECT_NEAR(objective_scenarios(t, AttackVector::from_set(3, std::vector<NodeId>{1})), 1.5, 1e-12);
  EXPECT_NEAR(objective_scenarios(t, AttackVector(3)), 3.0, 1e-12);
}

TEST(ObjectiveScenarios, MatchesTreeFormula) {
  Rng rng(17, RandomStream::kAuxiliary);
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const int n = 2 + static_cast<int>(seed % 13);
    const auto t = generate_instance(n, static_cast<WeightScheme>(seed % 4), seed);
    for (int rep = 0; rep < 10; ++rep) {
      AttackVector a(n);
      for (int i = 0; i < n; ++i) {
        if (rng.uniform_int(0, 2) == 0 && t.survival_prob[static_cast<std::size_t>(i)] < 1.0) a.set(i);
      }
      ASSERT_NEAR(objective_scenarios(t, a), objective_tree(t, a), 1e-9);
    }
  }
}

TEST(ObjectiveScenarios, GuardsLargeAttackSets) {
  const auto t = generate_instance(30, WeightScheme::kUnit, 1);
  AttackVector a(30);
  for (int i = 0; i < 26; ++i) a.set(i);
  try {
    objective_scenarios(t, a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTooManyAttackedNodes);
  }
}

TEST(ObjectiveTree, AttackingMoreNeverIncreases) {
  Rng rng(3, RandomStream::kAuxiliary);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto t = generate_instance(15, WeightScheme::kType2, seed);
    AttackVector a(15);
    double prev = objective_tree(t, a);
    for (int step = 0; step < 15; ++step) {
      a.set(static_cast<NodeId>(rng.uniform_int(0, 14)));
      const double now = objective_tree(t, a);
      ASSERT_LE(now, prev + 1e-12);
      prev = now;
    }
  }
}

TEST(ObjectiveTree, ScalesWithCosts) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto t = generate_instance(9, WeightScheme::kType1, seed);
    const auto base = exhaustive_solve(t);
    auto scaled = t;
    for (int i = 0; i < 9; ++i) {
      for (int j = i + 1; j < 9; ++j) scaled.connection_cost.set(i, j, 2.5 * t.connection_cost(i, j));
    }
    const auto attack = AttackVector::from_set(9, std::vector<NodeId>{0, 3});
    EXPECT_NEAR(objective_tree(scaled, attack), 2.5 * objective_tree(t, attack), 1e-9);
    const auto again = exhaustive_solve(scaled);
    EXPECT_NEAR(again.value, 2.5 * base.value, 1e-9);
    EXPECT_NEAR(objective_tree(t, again.attack), base.value, 1e-9);
  }
}

TEST(Exhaustive, SingleNode) {
  TreeInstance t;
  t.node_count = 1;
  t.survival_prob = {0.5};
  t.attack_cost = {1.0};
  t.connection_cost = ConnectionCosts::unit(1);
  t.budget = 1.0;
  const auto r = exhaustive_solve(t);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.attack.attacked_count(), 0);
}

TEST(Exhaustive, ZeroBudget) {
  auto t = generate_instance(10, WeightScheme::kType1, 5);
  t.budget = 0.0;
  const auto r = exhaustive_solve(t);
  EXPECT_EQ(r.attack.attacked_count(), 0);
  EXPECT_NEAR(r.value, t.connection_cost.total(), 1e-9);
}

TEST(Exhaustive, MatchesFullEnumeration) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const int n = 3 + static_cast<int>(seed % 8);
    const auto t = generate_instance(n, static_cast<WeightScheme>(seed % 4), seed);
    const auto r = exhaustive_solve(t);
    double best = std::numeric_limits<double>::infinity();
    AttackVector arg;
    for (const auto& a : oracle::all_feasible_attacks(t)) {
      const double v = objective_scenarios(t, a);
      if (v < best - 1e-12) {
        best = v;
        arg = a;
      }
    }
    EXPECT_NEAR(r.value, best, 1e-9);
    EXPECT_TRUE(r.attack.is_feasible(t));
  }
}

TEST(Exhaustive, TiesPickLexicographicallySmallest) {
  // Symmetric star: attacking any one leaf gives the same value.
  auto t = make_tree(4, {{0, 1}, {0, 2}, {0, 3}}, {1.0, 0.5, 0.5, 0.5}, 1.0);
  const auto r = exhaustive_solve(t);
  EXPECT_EQ(r.attack.attacked_set(), (std::vector<NodeId>{3}));
}

TEST(Exhaustive, GuardsCandidateCount) {
  auto t = generate_instance(30, WeightScheme::kUnit, 2);
  t.budget = 3.0;
  try {
    exhaustive_solve(t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInstanceTooLarge);
  }
}
