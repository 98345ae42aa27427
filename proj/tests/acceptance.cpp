// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.
#include <boost/math/special_functions/gamma.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "scnp/benders.hpp"
#include "scnp/dp.hpp"
#include "scnp/evaluator.hpp"
#include "scnp/generator.hpp"
#include "scnp/models.hpp"
#include "scnp/reductions.hpp"

using namespace scnp;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

WeightScheme scheme_of(int t) { return static_cast<WeightScheme>(t % 4); }

// Instances shared by criteria 2, 4 and 5.
std::vector<TreeInstance> agreement_instances() {
  std::vector<TreeInstance> out;
  for (int t = 0; t < 120; ++t) out.push_back(generate_instance(6 + t % 7, scheme_of(t), static_cast<std::uint64_t>(1000 + t)));
  return out;
}

milp::MilpOptions milp_gap(double gap) {
  milp::MilpOptions o;
  o.gap = gap;
  return o;
}

Outcome oracle_triangle() {
  const auto start = Clock::now();
  Rng rng(1, RandomStream::kAuxiliary);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto inst = generate_instance(6 + t % 9, scheme_of(t), static_cast<std::uint64_t>(t));
    for (int a = 0; a < 50; ++a) {
      const auto attack = oracle::random_feasible_attack(inst, rng);
      worst = std::max(worst, std::abs(objective_tree(inst, attack) - objective_scenarios(inst, attack)));
    }
  }
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  os << "max |tree - scenarios| = " << worst << " over 10000 evaluations, " << elapsed << " s";
  return {worst <= 1e-9 && elapsed < 120.0, os.str()};
}

struct AgreementData {
  std::vector<TreeInstance> instances;
  std::vector<BendersResult> benders;
  std::vector<double> exhaustive;
};

AgreementData& agreement_data() {
  static AgreementData data;
  return data;
}

Outcome exact_agreement() {
  const auto start = Clock::now();
  auto& data = agreement_data();
  data.instances = agreement_instances();
  double worst = 0.0;
  int failures = 0;
  for (const auto& inst : data.instances) {
    const double ex = exhaustive_solve(inst).value;
    const auto milp = solve_chain_milp(inst, {}, milp_gap(1e-3));
    auto bd = bd_scnp(inst, {.eps = 1e-3});
    if (milp.status != milp::Status::kOptimal || bd.status != BendersStatus::kOptimal) ++failures;
    worst = std::max({worst, std::abs(ex - milp.value), std::abs(ex - bd.upper), std::abs(milp.value - bd.upper)});
    data.exhaustive.push_back(ex);
    data.benders.push_back(std::move(bd));
  }
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  os << "max pairwise difference = " << worst << ", non-optimal runs = " << failures << ", " << elapsed << " s";
  return {worst <= 1e-3 && failures == 0 && elapsed < 900.0, os.str()};
}

Outcome strong_duality() {
  const auto start = Clock::now();
  Rng rng(3, RandomStream::kAuxiliary);
  double worst = 0.0;
  int infeasible = 0;
  for (int t = 0; t < 10000; ++t) {
    PathView view;
    const int len = static_cast<int>(rng.uniform_int(1, 20));
    for (int k = 0; k < len; ++k) {
      const auto roll = rng.uniform_int(0, 9);
      view.p.push_back(roll == 0 ? 0.0 : roll == 1 ? 1.0 : rng.uniform01());
      view.v.push_back(static_cast<int>(rng.uniform_int(0, 1)));
    }
    view.c = 10.0 * rng.uniform01();
    const auto dual = analytic_dual(view);
    if (!dual_feasibility_check(dual, view)) ++infeasible;
    worst = std::max(worst, std::abs(dual_objective(dual, view) - slave_primal(view).objective));
  }
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  os << "max |dual - primal| = " << worst << ", infeasible duals = " << infeasible << ", " << elapsed << " s";
  return {worst <= 1e-9 && infeasible == 0 && elapsed < 10.0, os.str()};
}

Outcome benders_trace() {
  const auto start = Clock::now();
  const auto& data = agreement_data();
  int monotone = 0;
  int unconverged = 0;
  int weak = 0;
  int invalid = 0;
  long cuts = 0;
  for (std::size_t t = 0; t < data.instances.size(); ++t) {
    const auto& inst = data.instances[t];
    const auto& r = data.benders[t];
    for (std::size_t k = 1; k < r.trace.size(); ++k) {
      if (r.trace[k].lower < r.trace[k - 1].lower || r.trace[k].upper > r.trace[k - 1].upper) ++monotone;
    }
    if (r.trace.empty() || r.trace.back().upper - r.trace.back().lower > 1e-3) ++unconverged;
    const auto attacks = inst.node_count <= 10 ? oracle::all_feasible_attacks(inst) : std::vector<AttackVector>{};
    const PathTable paths(inst);
    for (const auto& rec : r.cut_log) {
      ++cuts;
      if (!(rec.cut.rhs(rec.master_v) - rec.master_z > 1e-9)) ++weak;
      const auto path = paths.path(rec.cut.i, rec.cut.j);
      for (const auto& a : attacks) {
        if (rec.cut.rhs(a) > slave_primal(path_view(inst, path, a)).objective + 1e-9) {
          ++invalid;
          break;
        }
      }
    }
  }
  std::ostringstream os;
  os << "monotonicity breaks = " << monotone << ", unconverged = " << unconverged << ", cuts = " << cuts
     << ", not violated at origin = " << weak << ", invalid = " << invalid << ", " << seconds_since(start) << " s";
  return {monotone == 0 && unconverged == 0 && weak == 0 && invalid == 0, os.str()};
}

Outcome valid_inequalities_neutral() {
  const auto start = Clock::now();
  const auto& data = agreement_data();
  double worst_milp = 0.0;
  double worst_bd = 0.0;
  for (std::size_t t = 0; t < data.instances.size(); ++t) {
    const auto& inst = data.instances[t];
    const auto off = solve_chain_milp(inst, {.add_valid_ineq = false}, milp_gap(1e-9));
    const auto on = solve_chain_milp(inst, {.add_valid_ineq = true}, milp_gap(1e-9));
    worst_milp = std::max(worst_milp, std::abs(on.value - off.value));
    const auto bd_on = bd_scnp(inst, {.eps = 1e-9, .use_valid_ineq = true});
    const auto bd_off = bd_scnp(inst, {.eps = 1e-9, .use_valid_ineq = false});
    worst_bd = std::max(worst_bd, std::abs(bd_on.upper - bd_off.upper));
  }
  std::ostringstream os;
  os << "max change: MILP " << worst_milp << ", Benders " << worst_bd << ", " << seconds_since(start) << " s";
  return {worst_milp <= 1e-9 && worst_bd <= 1e-9, os.str()};
}

Outcome ilp_p() {
  const auto start = Clock::now();
  const double ps[] = {0.0, 0.3, 0.5, 0.9};
  double worst = 0.0;
  int failures = 0;
  for (int t = 0; t < 60; ++t) {
    auto inst = generate_instance(4 + t % 9, scheme_of(t / 4), static_cast<std::uint64_t>(2000 + t));
    std::fill(inst.survival_prob.begin(), inst.survival_prob.end(), ps[t % 4]);
    const auto r = solve_ilp_p(inst, milp_gap(1e-3));
    if (r.status != milp::Status::kOptimal) ++failures;
    worst = std::max(worst, std::abs(r.value - exhaustive_solve(inst).value));
  }
  std::ostringstream os;
  os << "max |ILP_p - exhaustive| = " << worst << ", non-optimal = " << failures << ", " << seconds_since(start) << " s";
  return {worst <= 1e-3 && failures == 0, os.str()};
}

Outcome dp_approximation() {
  const auto start = Clock::now();
  int violations = 0;
  double worst_fine = 0.0;
  int fine_runs = 0;
  for (int t = 0; t < 60; ++t) {
    const int n = 4 + t % 9;
    const int budget = 1 + t % 3;
    auto inst = generate_instance(n, WeightScheme::kUnit, static_cast<std::uint64_t>(3000 + t));
    inst.budget = budget;
    const double opt = exhaustive_solve(inst).value;
    for (int nu = 2; nu <= 4; ++nu) {
      const auto r = dp_solve(inst, budget, nu);
      const double slack = n * (n - 1) / (2.0 * std::pow(10.0, nu));
      const bool ok = r.truncated_value <= opt + 1e-9 && opt <= r.truncated_value + slack + 1e-9 &&
                      r.exact_value >= opt - 1e-12 && r.exact_value <= r.truncated_value + slack + 1e-9;
      if (!ok) ++violations;
    }
    if (n <= 8) {
      ++fine_runs;
      worst_fine = std::max(worst_fine, std::abs(dp_solve(inst, budget, 6).truncated_value - opt));
    }
  }
  std::ostringstream os;
  os << "bound violations = " << violations << " of 180, max |DP(nu=6) - OPT| = " << worst_fine << " over " << fine_runs
     << " instances, " << seconds_since(start) << " s";
  return {violations == 0 && worst_fine <= 1e-4, os.str()};
}

Outcome reductions() {
  const auto start = Clock::now();
  Rng rng(8, RandomStream::kAuxiliary);
  int knapsack_bad = 0;
  int yes = 0;
  for (int t = 0; t < 100; ++t) {
    KnapsackInstance k;
    const int items = static_cast<int>(rng.uniform_int(1, 12));
    double weight = 0.0;
    double profit = 0.0;
    for (int i = 0; i < items; ++i) {
      k.items.push_back({static_cast<double>(rng.uniform_int(1, 30)), static_cast<double>(rng.uniform_int(1, 15))});
      weight += k.items.back().weight;
      profit += k.items.back().profit;
    }
    k.capacity = static_cast<double>(rng.uniform_int(0, static_cast<std::int64_t>(weight)));
    k.target = static_cast<double>(rng.uniform_int(1, static_cast<std::int64_t>(profit)));
    const auto g = knapsack_to_dscnp(k);
    const bool expected = oracle::knapsack_yes(k);
    yes += expected ? 1 : 0;
    if ((exhaustive_solve(g.instance).value <= g.gamma + 1e-9) != expected) ++knapsack_bad;
  }
  double cedp_worst = 0.0;
  for (int t = 0; t < 30; ++t) {
    EdgeAugmentedInstance aug;
    aug.base = generate_instance(2 + t % 4, scheme_of(t), static_cast<std::uint64_t>(4000 + t));
    double total = 0.0;
    for (double kappa : aug.base.attack_cost) total += kappa;
    for (std::size_t e = 0; e < aug.base.edges.size(); ++e) {
      aug.edge_p.push_back(static_cast<double>(rng.uniform_int(0, 100)) / 100.0);
      aug.edge_kappa.push_back(static_cast<double>(rng.uniform_int(1, 30)));
      total += aug.edge_kappa.back();
    }
    aug.base.budget = 0.3 * total;
    cedp_worst = std::max(cedp_worst, std::abs(exhaustive_solve(cedp_to_scnp(aug)).value - oracle::cedp_brute_force(aug)));
  }
  double edge_worst = 0.0;
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + t % 9;
    const auto inst = generate_instance(n, scheme_of(t), static_cast<std::uint64_t>(5000 + t));
    std::vector<double> presence;
    for (std::size_t e = 0; e < inst.edges.size(); ++e) presence.push_back(0.01 + 0.98 * rng.uniform01());
    const auto reduced = edge_uncertainty_to_deterministic(inst, presence);
    const auto attack = oracle::random_feasible_attack(inst, rng);
    std::vector<double> alive(static_cast<std::size_t>(n), 1.0);
    for (NodeId i : attack.attacked_set()) alive[static_cast<std::size_t>(i)] = 0.0;
    edge_worst = std::max(edge_worst, std::abs(objective_tree(reduced, attack) - oracle::expected_connectivity(inst, alive, presence)));
  }
  std::ostringstream os;
  os << "knapsack mismatches = " << knapsack_bad << " (" << yes << " yes), CEDP max error = " << cedp_worst
     << ", edge-uncertainty max error = " << edge_worst << ", " << seconds_since(start) << " s";
  return {knapsack_bad == 0 && cedp_worst <= 1e-9 && edge_worst <= 1e-9, os.str()};
}

Outcome generator_uniformity() {
  const auto start = Clock::now();
  std::map<std::vector<Edge>, int> counts;
  for (const auto& tree : oracle::all_labeled_trees(4)) counts[tree] = 0;
  const int samples = 16000;
  int unknown = 0;
  for (int s = 0; s < samples; ++s) {
    const auto it = counts.find(oracle::canonical_edges(broder_tree(4, static_cast<std::uint64_t>(s))));
    if (it == counts.end()) {
      ++unknown;
    } else {
      ++it->second;
    }
  }
  const double expected = samples / static_cast<double>(counts.size());
  double chi2 = 0.0;
  for (const auto& [tree, count] : counts) chi2 += (count - expected) * (count - expected) / expected;
  const double dof = static_cast<double>(counts.size()) - 1.0;
  const double p_value = boost::math::gamma_q(dof / 2.0, chi2 / 2.0);
  std::ostringstream os;
  os << counts.size() << " trees, chi2 = " << chi2 << ", p = " << p_value << ", " << seconds_since(start) << " s";
  return {counts.size() == 16 && unknown == 0 && p_value > 0.01, os.str()};
}

Outcome scale_smoke() {
  const auto inst = generate_instance(40, WeightScheme::kUnit, 1);
  const auto r = bd_scnp(inst, {.eps = 1e-3, .time_limit = 600.0});
  std::ostringstream os;
  os << "status " << to_string(r.status) << ", UB = " << r.upper << ", LB = " << r.lower << ", " << r.iterations
     << " iterations, " << r.cuts << " cuts, " << r.seconds << " s";
  return {r.status == BendersStatus::kOptimal && r.upper - r.lower <= 1e-3 && r.seconds <= 600.0, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 oracle triangle", oracle_triangle},
      {"2 exact-method agreement", exact_agreement},
      {"3 dual strong duality", strong_duality},
      {"4 Benders trace and cuts", benders_trace},
      {"5 valid inequalities", valid_inequalities_neutral},
      {"6 ILP_p equal probabilities", ilp_p},
      {"7 DP approximation", dp_approximation},
      {"8 reductions", reductions},
      {"9 generator uniformity", generator_uniformity},
      {"10 n = 40 Benders", scale_smoke},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failed += outcome.pass ? 0 : 1;
    std::printf("%s criterion %s: %s\n", outcome.pass ? "PASS" : "FAIL", name.c_str(), outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
