#include "scnp/models.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "scnp/error.hpp"
#include "scnp/evaluator.hpp"

namespace scnp {

namespace {

using milp::Sense;
using milp::Term;

std::string join(std::initializer_list<long> parts, const char* prefix) {
  std::string out = prefix;
  for (long p : parts) {
    out += '_';
    out += std::to_string(p);
  }
  return out;
}

std::vector<int> add_attack_variables(const TreeInstance& instance, milp::LinearModel& model, bool valid_ineq) {
  const int n = instance.node_count;
  std::vector<int> v(static_cast<std::size_t>(n));
  for (NodeId i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = model.add_binary(join({i}, "v"));
  std::vector<Term> budget;
  for (NodeId i = 0; i < n; ++i) budget.push_back({v[static_cast<std::size_t>(i)], instance.attack_cost[static_cast<std::size_t>(i)]});
  model.add_row("budget", std::move(budget), Sense::kLessEqual, instance.budget);
  for (NodeId i = 0; i < n; ++i) {
    if (instance.survival_prob[static_cast<std::size_t>(i)] == 1.0) {
      model.add_row(join({i}, "fix"), {{v[static_cast<std::size_t>(i)], 1.0}}, Sense::kEqual, 0.0);
    }
  }
  if (valid_ineq) {
    for (const auto& [i, j] : valid_inequalities(instance)) {
      model.add_row(join({i, j}, "vi"), {{v[static_cast<std::size_t>(i)], 1.0}, {v[static_cast<std::size_t>(j)], -1.0}},
                    Sense::kLessEqual, 0.0);
    }
  }
  return v;
}

// Adds the variables and rows of one chain position. `prev_s` < 0 marks the
// first position.
std::pair<int, int> add_link(milp::LinearModel& model, const std::string& tag, int v_node, double p, int prev_s) {
  const double q = 1.0 - p;
  const int r = model.add_continuous("r" + tag);
  const int s = model.add_continuous("s" + tag);
  if (prev_s < 0) {
    model.add_row("first_r" + tag, {{r, 1.0}, {v_node, -q}}, Sense::kEqual, 0.0);
    model.add_row("first_s" + tag, {{s, 1.0}, {r, 1.0}}, Sense::kEqual, 1.0);
  } else {
    model.add_row("lin_v" + tag, {{r, 1.0}, {v_node, -q}}, Sense::kLessEqual, 0.0);
    model.add_row("lin_s" + tag, {{r, 1.0}, {prev_s, -q}}, Sense::kLessEqual, 0.0);
    model.add_row("lin_vs" + tag, {{r, 1.0}, {prev_s, -q}, {v_node, -q}}, Sense::kGreaterEqual, -q);
    model.add_row("tele" + tag, {{s, 1.0}, {prev_s, -1.0}, {r, 1.0}}, Sense::kEqual, 0.0);
  }
  return {s, r};
}

}  // namespace

ChainModel build_chain_milp(const TreeInstance& instance, const PathTable& paths, ChainOptions options) {
  const int n = instance.node_count;
  ChainModel out;
  out.v = add_attack_variables(instance, out.model, options.add_valid_ineq);
  out.chains.resize(pair_count(n));
  auto p_of = [&](NodeId k) { return instance.survival_prob[static_cast<std::size_t>(k)]; };

  for (NodeId i = 0; i < n; ++i) {
    // Shared mode: (s, r) of the prefix i..u, keyed by u.
    std::vector<std::pair<int, int>> prefix(options.share_prefixes ? static_cast<std::size_t>(n) : 0, {-1, -1});
    for (NodeId j = i + 1; j < n; ++j) {
      const auto path = paths.path(i, j);
      auto& chain = out.chains[pair_index(i, j, n)];
      int prev_s = -1;
      for (std::size_t k = 0; k < path.size(); ++k) {
        const NodeId u = path[k];
        std::pair<int, int> sr;
        if (options.share_prefixes) {
          sr = prefix[static_cast<std::size_t>(u)];
          if (sr.first < 0) {
            sr = add_link(out.model, join({i, u}, ""), out.v[static_cast<std::size_t>(u)], p_of(u), prev_s);
            prefix[static_cast<std::size_t>(u)] = sr;
          }
        } else {
          sr = add_link(out.model, join({i, j, static_cast<long>(k) + 1}, ""), out.v[static_cast<std::size_t>(u)], p_of(u),
                        prev_s);
        }
        chain.s.push_back(sr.first);
        chain.r.push_back(sr.second);
        prev_s = sr.first;
      }
      const double c = instance.connection_cost(i, j);
      auto& last = out.model.variable(chain.s.back());
      last.objective += c;
    }
  }
  return out;
}

std::vector<std::pair<NodeId, NodeId>> valid_inequalities(const TreeInstance& instance) {
  const auto adj = adjacency(instance);
  std::vector<std::pair<NodeId, NodeId>> out;
  for (NodeId i = 0; i < instance.node_count; ++i) {
    const auto& ni = adj[static_cast<std::size_t>(i)];
    if (ni.size() != 1) continue;
    const NodeId j = ni.front();
    if (adj[static_cast<std::size_t>(j)].size() == 1) continue;
    const auto si = static_cast<std::size_t>(i);
    const auto sj = static_cast<std::size_t>(j);
    if (instance.survival_prob[sj] <= instance.survival_prob[si] && instance.attack_cost[sj] <= instance.attack_cost[si]) {
      out.emplace_back(i, j);
    }
  }
  return out;
}

int rho(const TreeInstance& instance, int path_length) {
  const double min_kappa = *std::min_element(instance.attack_cost.begin(), instance.attack_cost.end());
  const double affordable = std::floor(instance.budget / min_kappa + 1e-9);
  return static_cast<int>(std::min<double>(affordable, path_length));
}

IlpPModel build_ilp_p(const TreeInstance& instance, const PathTable& paths) {
  const int n = instance.node_count;
  const double p = instance.survival_prob.front();
  for (double pi : instance.survival_prob) {
    if (pi != p) throw Error(ErrorKind::kUnequalProbabilities, "all survival probabilities must be equal");
  }
  IlpPModel out;
  out.v = add_attack_variables(instance, out.model, false);
  out.y.resize(pair_count(n));
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      const auto path = paths.path(i, j);
      const int top = rho(instance, static_cast<int>(path.size()));
      const double c = instance.connection_cost(i, j);
      auto& y = out.y[pair_index(i, j, n)];
      std::vector<Term> pick;
      std::vector<Term> link;
      for (int r = 0; r <= top; ++r) {
        const int var = out.model.add_binary(join({i, j, r}, "y"), c * std::pow(p, r));
        y.push_back(var);
        pick.push_back({var, 1.0});
        if (r > 0) link.push_back({var, static_cast<double>(r)});
      }
      for (NodeId k : path) link.push_back({out.v[static_cast<std::size_t>(k)], -1.0});
      out.model.add_row(join({i, j}, "select"), std::move(pick), Sense::kEqual, 1.0);
      out.model.add_row(join({i, j}, "count"), std::move(link), Sense::kEqual, 0.0);
    }
  }
  return out;
}

AttackVector attack_from_solution(std::span<const double> x, std::span<const int> v) {
  AttackVector attack(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (x[static_cast<std::size_t>(v[i])] > 0.5) attack.set(static_cast<NodeId>(i));
  }
  return attack;
}

namespace {

ModelSolution finish(const TreeInstance& instance, const milp::SolveResult& result, std::span<const int> v,
                     std::chrono::steady_clock::time_point start) {
  ModelSolution out;
  out.status = result.status;
  out.nodes = result.nodes;
  out.iterations = result.iterations;
  if (!result.x.empty()) {
    out.attack = attack_from_solution(result.x, v);
  } else {
    out.attack = AttackVector(instance.node_count);
  }
  out.value = objective_tree(instance, out.attack);
  out.bound = std::min(result.bound, out.value);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace

ModelSolution solve_chain_milp(const TreeInstance& instance, ChainOptions options, const milp::MilpOptions& milp_options) {
  const auto start = std::chrono::steady_clock::now();
  const PathTable paths(instance);
  const auto built = build_chain_milp(instance, paths, options);
  const auto result = milp::solve_milp(built.model, milp_options);
  return finish(instance, result, built.v, start);
}

ModelSolution solve_ilp_p(const TreeInstance& instance, const milp::MilpOptions& milp_options) {
  const auto start = std::chrono::steady_clock::now();
  const PathTable paths(instance);
  const auto built = build_ilp_p(instance, paths);
  const auto result = milp::solve_milp(built.model, milp_options);
  return finish(instance, result, built.v, start);
}

}  // namespace scnp
