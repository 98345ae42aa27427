#include <gtest/gtest.h>

#include "helpers.hpp"
#include "scnp/error.hpp"
#include "scnp/evaluator.hpp"
#include "scnp/generator.hpp"
#include "scnp/milp/simplex.hpp"
#include "scnp/models.hpp"

using namespace scnp;
using testing_helpers::make_tree;
using testing_helpers::path3;

namespace {

milp::MilpOptions tight() {
  milp::MilpOptions o;
  o.gap = 1e-9;
  return o;
}

TreeInstance equal_p(TreeInstance t, double p) {
  std::fill(t.survival_prob.begin(), t.survival_prob.end(), p);
  return t;
}

}  // namespace

TEST(ChainModel, VariableAndRowCountsWithoutSharing) {
  const auto t = path3();
  const auto m = build_chain_milp(t, PathTable(t));
  EXPECT_EQ(m.model.variable_count(), 3 + 2 * (2 + 3 + 2));
  EXPECT_EQ(m.model.row_count(), 1 + 3 * 2 + 4 * 4);
  ASSERT_EQ(m.chains.size(), 3U);
  EXPECT_EQ(m.chains[pair_index(0, 2, 3)].s.size(), 3U);
}

TEST(ChainModel, VariableAndRowCountsWithSharing) {
  const auto t = path3();
  const auto m = build_chain_milp(t, PathTable(t), {.share_prefixes = true});
  EXPECT_EQ(m.model.variable_count(), 3 + 2 * (3 + 2));
  EXPECT_EQ(m.model.row_count(), 1 + 2 * 2 + 3 * 4);
  EXPECT_EQ(m.chains[pair_index(0, 1, 3)].s[1], m.chains[pair_index(0, 2, 3)].s[1]);
}

TEST(ChainModel, FixRowForCertainNodes) {
  auto t = path3(1.0);
  const auto m = build_chain_milp(t, PathTable(t));
  bool found = false;
  for (const auto& r : m.model.rows()) {
    if (r.name == "fix_1") {
      found = true;
      EXPECT_EQ(r.sense, milp::Sense::kEqual);
      EXPECT_EQ(r.rhs, 0.0);
    }
  }
  EXPECT_TRUE(found);
}

TEST(ChainModel, ChainReproducesPathProductForFixedAttack) {
  Rng rng(17, RandomStream::kAuxiliary);
  for (int t = 0; t < 40; ++t) {
    const int n = static_cast<int>(rng.uniform_int(4, 9));
    const auto inst = generate_instance(n, static_cast<WeightScheme>(t % 4), static_cast<std::uint64_t>(t));
    for (bool share : {false, true}) {
      const auto m = build_chain_milp(inst, PathTable(inst), {.share_prefixes = share});
      AttackVector a(n);
      for (int i = 0; i < n; ++i) a.set(i, rng.uniform_int(0, 1) == 1);
      milp::LinearModel fixed = m.model;
      for (int i = 0; i < n; ++i) {
        auto& var = fixed.variable(m.v[static_cast<std::size_t>(i)]);
        var.lower = var.upper = a[i] ? 1.0 : 0.0;
        var.integer = false;
      }
      // Budget and fix rows may now be violated; relax them.
      milp::LinearModel relaxed;
      for (const auto& var : fixed.variables()) relaxed.add_variable(var.name, var.lower, var.upper, var.objective);
      for (const auto& row : fixed.rows()) {
        if (row.name == "budget" || row.name.starts_with("fix")) continue;
        relaxed.add_row(row.name, row.terms, row.sense, row.rhs);
      }
      const auto r = milp::solve_lp(relaxed);
      ASSERT_EQ(r.status, milp::Status::kOptimal);
      EXPECT_NEAR(r.objective, objective_tree(inst, a), 1e-7);
      const auto path = PathTable(inst).path(0, n - 1);
      const auto& chain = m.chains[pair_index(0, n - 1, n)];
      EXPECT_NEAR(r.x[static_cast<std::size_t>(chain.s.back())], path_survival(inst, path, a), 1e-7);
    }
  }
}

TEST(ValidInequalities, LeafNextToCheaperNode) {
  auto t = make_tree(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {3, 5}}, {0.3, 0.5, 0.5, 0.4, 0.5, 0.5}, 1.0);
  const auto vi = valid_inequalities(t);
  ASSERT_EQ(vi.size(), 2U);
  EXPECT_EQ(vi[0], std::make_pair(4, 3));
  EXPECT_EQ(vi[1], std::make_pair(5, 3));
  t.survival_prob[3] = 0.6;
  EXPECT_TRUE(valid_inequalities(t).empty());
  t.survival_prob[3] = 0.4;
  t.attack_cost[3] = 2.0;
  EXPECT_TRUE(valid_inequalities(t).empty());
}

TEST(ValidInequalities, TwoNodeTreeHasNone) {
  const auto t = make_tree(2, {{0, 1}}, {0.5, 0.5}, 1.0);
  EXPECT_TRUE(valid_inequalities(t).empty());
}

TEST(ValidInequalities, KeepOptimumUnchanged) {
  for (int seed = 0; seed < 30; ++seed) {
    const int n = 6 + seed % 9;
    const auto t = generate_instance(n, static_cast<WeightScheme>(seed % 4), static_cast<std::uint64_t>(100 + seed));
    const double opt = exhaustive_solve(t).value;
    const auto with = solve_chain_milp(t, {.add_valid_ineq = true}, tight());
    ASSERT_EQ(with.status, milp::Status::kOptimal);
    EXPECT_NEAR(with.value, opt, 1e-6) << "seed " << seed;
  }
}

TEST(ChainModel, SharingDoesNotChangeOptimum) {
  for (int seed = 0; seed < 20; ++seed) {
    const auto t = generate_instance(6 + seed % 5, static_cast<WeightScheme>(seed % 4), static_cast<std::uint64_t>(seed));
    const auto plain = solve_chain_milp(t, {}, tight());
    const auto shared = solve_chain_milp(t, {.share_prefixes = true}, tight());
    EXPECT_NEAR(plain.value, shared.value, 1e-6);
    EXPECT_NEAR(plain.value, exhaustive_solve(t).value, 1e-6);
    EXPECT_LE(plain.bound, plain.value + 1e-9);
  }
}

TEST(Rho, BudgetOverCheapestNode) {
  auto t = make_tree(3, {{0, 1}, {1, 2}}, {0.5, 0.5, 0.5}, 3.0);
  EXPECT_EQ(rho(t, 2), 2);
  EXPECT_EQ(rho(t, 5), 3);
  t.budget = 0.5;
  EXPECT_EQ(rho(t, 3), 0);
}

TEST(IlpP, PathExample) {
  const auto t = path3(0.5, 1.0);
  const auto r = solve_ilp_p(t, tight());
  ASSERT_EQ(r.status, milp::Status::kOptimal);
  EXPECT_NEAR(r.value, 1.5, 1e-9);
  EXPECT_TRUE(r.attack[1]);
  EXPECT_EQ(r.attack.attacked_count(), 1);
}

TEST(IlpP, ZeroProbability) {
  const auto t = equal_p(path3(), 0.0);
  const auto r = solve_ilp_p(t, tight());
  EXPECT_NEAR(r.value, 0.0, 1e-9);
}

TEST(IlpP, RejectsUnequalProbabilities) {
  const auto t = path3(0.4);
  try {
    (void)build_ilp_p(t, PathTable(t));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnequalProbabilities);
  }
}

TEST(IlpP, MatchesChainModelAndExhaustive) {
  const double ps[] = {0.0, 0.3, 0.5, 0.9};
  for (int seed = 0; seed < 24; ++seed) {
    const int n = 6 + seed % 6;
    const auto t = equal_p(generate_instance(n, static_cast<WeightScheme>(seed % 4), static_cast<std::uint64_t>(seed)),
                           ps[seed % 4]);
    const double opt = exhaustive_solve(t).value;
    const auto ilp = solve_ilp_p(t, tight());
    ASSERT_EQ(ilp.status, milp::Status::kOptimal);
    EXPECT_NEAR(ilp.value, opt, 1e-6) << "seed " << seed;
    EXPECT_NEAR(solve_chain_milp(t, {}, tight()).value, opt, 1e-6);
  }
}

TEST(Models, AttackFromSolutionRounds) {
  const std::vector<double> x{0.9999999, 0.0000001, 1.0, 0.2};
  const std::vector<int> v{0, 1, 2};
  const auto a = attack_from_solution(x, v);
  EXPECT_TRUE(a[0]);
  EXPECT_FALSE(a[1]);
  EXPECT_TRUE(a[2]);
}
