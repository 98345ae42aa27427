#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "scnp/bench.hpp"
#include "scnp/benders.hpp"
#include "scnp/error.hpp"
#include "scnp/evaluator.hpp"
#include "scnp/generator.hpp"
#include "scnp/instance.hpp"
#include "scnp/models.hpp"
#include "scnp/reductions.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenArgs {
  int n = 20;
  std::string scheme = "unit";
  int count = 1;
  std::uint64_t seed = 1;
  std::string out = ".";
};

int cmd_gen(const GenArgs& a) {
  const auto scheme = scnp::parse_weight_scheme(a.scheme);
  if (!scheme) throw UsageError("unknown weight scheme: " + a.scheme);
  if (a.n < 2) throw UsageError("--n must be at least 2");
  fs::create_directories(a.out);
  for (int t = 0; t < a.count; ++t) {
    const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(t);
    const auto instance = scnp::generate_instance(a.n, *scheme, seed);
    const fs::path path = fs::path(a.out) / scnp::instance_file_name(a.n, *scheme, seed);
    scnp::write_instance(instance, path);
    std::cout << path.string() << '\n';
  }
  return 0;
}

struct EvalArgs {
  std::string instance;
  std::string attack_file;
  std::vector<int> nodes;
  bool scenarios = false;
};

int cmd_eval(const EvalArgs& a) {
  const auto instance = scnp::read_instance(a.instance);
  scnp::AttackVector attack = a.attack_file.empty() ? scnp::AttackVector::from_set(instance.node_count, a.nodes)
                                                    : scnp::read_attack(a.attack_file, instance.node_count);
  json doc;
  doc["value"] = scnp::objective_tree(instance, attack);
  doc["cost"] = attack.cost(instance);
  doc["feasible"] = attack.is_feasible(instance);
  doc["attack"] = attack.attacked_set();
  if (a.scenarios) doc["scenario_value"] = scnp::objective_scenarios(instance, attack);
  std::cout << doc.dump(2) << '\n';
  return 0;
}

struct SolveArgs {
  std::string instance;
  std::string method = "benders";
  scnp::SolveParams params;
  bool no_vi = false;
  std::string trace;
  std::string lp;
  std::string out;
};

int cmd_solve(SolveArgs a) {
  const auto method = scnp::parse_method(a.method);
  if (!method) throw UsageError("unknown method: " + a.method);
  if (!(a.params.eps > 0.0)) throw UsageError("--eps must be positive");
  a.params.use_valid_ineq = !a.no_vi;
  const auto instance = scnp::read_instance(a.instance);
  if (!a.lp.empty()) {
    std::ofstream lp(a.lp);
    if (!lp) throw scnp::Error(scnp::ErrorKind::kInvalidArgument, "cannot write " + a.lp);
    const scnp::PathTable paths(instance);
    if (*method == scnp::Method::kIlpP) {
      scnp::milp::write_lp(scnp::build_ilp_p(instance, paths).model, lp);
    } else {
      scnp::milp::write_lp(
          scnp::build_chain_milp(instance, paths, {a.params.share_prefixes, a.params.use_valid_ineq}).model, lp);
    }
  }
  scnp::BendersResult benders;
  auto record = scnp::run_method(instance, *method, a.params, &benders);
  record.instance = fs::path(a.instance).filename().string();
  if (auto parsed = scnp::parse_instance_name(record.instance)) record.scheme = parsed->second;
  if (!a.trace.empty() && *method == scnp::Method::kBenders) {
    std::ofstream trace(a.trace);
    if (!trace) throw scnp::Error(scnp::ErrorKind::kInvalidArgument, "cannot write " + a.trace);
    scnp::write_trace_csv(benders.trace, trace);
  }
  const std::string text = scnp::record_to_json(record).dump(2) + "\n";
  if (!a.out.empty()) scnp::write_atomic(a.out, text);
  std::cout << text;
  return 0;
}

struct BenchArgs {
  std::string dir;
  std::vector<std::string> methods{"benders", "milp"};
  scnp::SolveParams params;
  std::string results = "results";
  std::string csv;
  int workers = 1;
};

int cmd_bench(BenchArgs a) {
  scnp::BenchOptions options;
  for (const auto& name : a.methods) {
    const auto m = scnp::parse_method(name);
    if (!m) throw UsageError("unknown method: " + name);
    options.methods.push_back(*m);
  }
  options.params = a.params;
  options.results_dir = a.results;
  options.workers = a.workers;
  const auto records = scnp::run_bench(a.dir, options, std::cerr);
  const auto rows = scnp::aggregate(records, a.params.time_limit);
  if (!a.csv.empty()) {
    std::ostringstream csv;
    scnp::write_bench_csv(rows, csv);
    scnp::write_atomic(a.csv, csv.str());
  }
  std::cout << scnp::render_table(rows);
  return 0;
}

struct ReduceArgs {
  std::string kind;
  std::string input;
  std::string output;
};

int cmd_reduce(const ReduceArgs& a) {
  const std::string text = scnp::read_text(a.input);
  if (a.kind == "knapsack") {
    const auto gadget = scnp::knapsack_to_dscnp(scnp::knapsack_from_json(text));
    scnp::write_instance(gadget.instance, a.output);
    json doc;
    doc["gamma"] = gadget.gamma;
    std::cout << doc.dump() << '\n';
  } else if (a.kind == "cedp") {
    scnp::write_instance(scnp::cedp_to_scnp(scnp::edge_augmented_from_json(text)), a.output);
  } else if (a.kind == "edge-uncertainty") {
    const auto instance = scnp::instance_from_json(text);
    const auto presence = scnp::edge_presence_from_json(text, instance.edges.size());
    scnp::write_instance(scnp::edge_uncertainty_to_deterministic(instance, presence), a.output);
  } else {
    throw UsageError("unknown reduction kind: " + a.kind);
  }
  return 0;
}

struct CheckArgs {
  int count = 20;
  int max_n = 10;
  std::uint64_t seed = 1;
};

int cmd_check(const CheckArgs& a) {
  if (a.max_n < 2) throw UsageError("--max-n must be at least 2");
  int failures = 0;
  const scnp::WeightScheme schemes[] = {scnp::WeightScheme::kUnit, scnp::WeightScheme::kType1, scnp::WeightScheme::kType2,
                                        scnp::WeightScheme::kType3};
  for (int t = 0; t < a.count; ++t) {
    const int n = 2 + t % (a.max_n - 1);
    const auto scheme = schemes[t % 4];
    const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(t);
    const auto instance = scnp::generate_instance(n, scheme, seed);
    const auto exact = scnp::exhaustive_solve(instance);
    const double scenarios = scnp::objective_scenarios(instance, exact.attack);
    scnp::milp::MilpOptions milp_options;
    milp_options.gap = 1e-7;
    const auto milp = scnp::solve_chain_milp(instance, {}, milp_options);
    const auto benders = scnp::bd_scnp(instance);
    const bool ok = std::abs(scenarios - exact.value) <= 1e-9 && std::abs(milp.value - exact.value) <= 1e-3 &&
                    std::abs(benders.upper - exact.value) <= 1e-3;
    if (!ok) ++failures;
    std::cout << (ok ? "ok   " : "FAIL ") << scnp::instance_file_name(n, scheme, seed) << " exhaustive=" << exact.value
              << " scenarios=" << scenarios << " milp=" << milp.value << " benders=" << benders.upper << '\n';
  }
  std::cout << (failures == 0 ? "all checks passed" : std::to_string(failures) + " checks failed") << '\n';
  return failures == 0 ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic critical node problem on trees"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate random tree instances");
  gen_cmd->add_option("--n", gen.n, "Number of nodes")->capture_default_str();
  gen_cmd->add_option("--scheme", gen.scheme, "Weights: unit, type1, type2, type3")->capture_default_str();
  gen_cmd->add_option("--count", gen.count, "Number of instances")->capture_default_str()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "First seed; instance t uses seed + t")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output directory")->capture_default_str();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate an attack set");
  eval_cmd->add_option("instance", eval.instance, "Instance file")->required();
  auto* attack_opt = eval_cmd->add_option("--attack", eval.attack_file, "Attack file");
  eval_cmd->add_option("--nodes", eval.nodes, "Attacked nodes")->excludes(attack_opt);
  eval_cmd->add_flag("--scenarios", eval.scenarios, "Also compute the scenario enumeration value");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance");
  solve_cmd->add_option("instance", solve.instance, "Instance file")->required();
  solve_cmd->add_option("--method", solve.method, "benders, milp, ilp-p, dp or exhaustive")->capture_default_str();
  solve_cmd->add_option("--eps", solve.params.eps, "Absolute optimality tolerance")->capture_default_str();
  solve_cmd->add_flag("--no-vi", solve.no_vi, "Leave out the valid inequalities");
  solve_cmd->add_flag("--share-prefixes", solve.params.share_prefixes, "Share chain prefixes in the MILP");
  solve_cmd->add_option("--time-limit", solve.params.time_limit, "Seconds")->capture_default_str();
  solve_cmd->add_option("--nu", solve.params.nu, "Decimals kept by the DP")->capture_default_str();
  solve_cmd->add_option("--trace", solve.trace, "Benders trace CSV file");
  solve_cmd->add_option("--lp", solve.lp, "Write the MILP model in LP format");
  solve_cmd->add_option("--out", solve.out, "Result JSON file");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Solve a directory of instances and tabulate");
  bench_cmd->add_option("dir", bench.dir, "Instance directory")->required()->check(CLI::ExistingDirectory);
  bench_cmd->add_option("--methods", bench.methods, "Methods to run")->capture_default_str();
  bench_cmd->add_option("--time-limit", bench.params.time_limit, "Seconds per run")->capture_default_str();
  bench_cmd->add_option("--eps", bench.params.eps, "Absolute optimality tolerance")->capture_default_str();
  bench_cmd->add_option("--nu", bench.params.nu, "Decimals kept by the DP")->capture_default_str();
  bench_cmd->add_option("--results", bench.results, "Result cache directory")->capture_default_str();
  bench_cmd->add_option("--csv", bench.csv, "Aggregated CSV file");
  bench_cmd->add_option("--workers", bench.workers, "Parallel workers")->capture_default_str()->check(CLI::PositiveNumber);

  ReduceArgs reduce;
  auto* reduce_cmd = app.add_subcommand("reduce", "Apply a problem transformation");
  reduce_cmd->add_option("--kind", reduce.kind, "knapsack, cedp or edge-uncertainty")->required();
  reduce_cmd->add_option("input", reduce.input, "Input file")->required();
  reduce_cmd->add_option("output", reduce.output, "Output instance file")->required();

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Cross-check solvers against the exhaustive oracle");
  check_cmd->add_option("--count", check.count, "Random instances")->capture_default_str();
  check_cmd->add_option("--max-n", check.max_n, "Largest tree size")->capture_default_str();
  check_cmd->add_option("--seed", check.seed, "First seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen);
    if (eval_cmd->parsed()) return cmd_eval(eval);
    if (solve_cmd->parsed()) return cmd_solve(solve);
    if (bench_cmd->parsed()) return cmd_bench(bench);
    if (reduce_cmd->parsed()) return cmd_reduce(reduce);
    if (check_cmd->parsed()) return cmd_check(check);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const scnp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
