#include "scnp/evaluator.hpp"

#include <algorithm>
#include <numeric>

namespace scnp {

namespace {

// Holds adjacency so repeated evaluations on one instance skip the rebuild.
class TreeObjective {
 public:
  explicit TreeObjective(const TreeInstance& instance)
      : instance_(instance), adj_(adjacency(instance)), prefix_(static_cast<std::size_t>(instance.node_count)) {}

  double operator()(const AttackVector& attack) {
    const int n = instance_.node_count;
    CompensatedSum total;
    for (NodeId source = 0; source + 1 < n; ++source) {
      // prefix_[u] = survival probability of the path source..u.
      stack_.clear();
      stack_.push_back({source, -1});
      prefix_[static_cast<std::size_t>(source)] = survival_factor(instance_, attack, source);
      while (!stack_.empty()) {
        const auto [u, parent] = stack_.back();
        stack_.pop_back();
        const double pu = prefix_[static_cast<std::size_t>(u)];
        if (u > source) total.add(instance_.connection_cost(source, u) * pu);
        for (NodeId w : adj_[static_cast<std::size_t>(u)]) {
          if (w == parent) continue;
          prefix_[static_cast<std::size_t>(w)] = pu * survival_factor(instance_, attack, w);
          stack_.push_back({w, u});
        }
      }
    }
    return total.value();
  }

 private:
  struct Frame {
    NodeId node;
    NodeId parent;
  };
  const TreeInstance& instance_;
  std::vector<std::vector<NodeId>> adj_;
  std::vector<double> prefix_;
  std::vector<Frame> stack_;
};

}  // namespace

double path_survival(const TreeInstance& instance, std::span<const NodeId> path, const AttackVector& attack) {
  double product = 1.0;
  for (NodeId k : path) product *= survival_factor(instance, attack, k);
  return product;
}

double objective_tree(const TreeInstance& instance, const AttackVector& attack) {
  TreeObjective objective(instance);
  return objective(attack);
}

double objective_tree(const TreeInstance& instance, const PathTable& paths, const AttackVector& attack) {
  CompensatedSum total;
  const int n = instance.node_count;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      total.add(instance.connection_cost(i, j) * path_survival(instance, paths.path(i, j), attack));
    }
  }
  return total.value();
}

double objective_scenarios(const TreeInstance& instance, const AttackVector& attack) {
  const int n = instance.node_count;
  const auto attacked = attack.attacked_set();
  const int s = static_cast<int>(attacked.size());
  if (s > kMaxScenarioAttacked) {
    throw Error(ErrorKind::kTooManyAttackedNodes,
                std::to_string(s) + " attacked nodes exceed the limit of " + std::to_string(kMaxScenarioAttacked));
  }

  std::vector<int> parent(static_cast<std::size_t>(n));
  std::vector<bool> alive(static_cast<std::size_t>(n));
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      auto& px = parent[static_cast<std::size_t>(x)];
      px = parent[static_cast<std::size_t>(px)];
      x = px;
    }
    return x;
  };

  CompensatedSum expectation;
  const std::uint64_t outcomes = std::uint64_t{1} << s;
  for (std::uint64_t mask = 0; mask < outcomes; ++mask) {
    // Bit t of mask set: attacked node t survived.
    double mass = 1.0;
    std::fill(alive.begin(), alive.end(), true);
    for (int t = 0; t < s; ++t) {
      const auto node = static_cast<std::size_t>(attacked[static_cast<std::size_t>(t)]);
      const double p = instance.survival_prob[node];
      if (mask >> t & 1U) {
        mass *= p;
      } else {
        mass *= 1.0 - p;
        alive[node] = false;
      }
    }
    if (mass == 0.0) continue;

    std::iota(parent.begin(), parent.end(), 0);
    for (const auto& e : instance.edges) {
      if (alive[static_cast<std::size_t>(e.u)] && alive[static_cast<std::size_t>(e.v)]) {
        parent[static_cast<std::size_t>(find(e.u))] = find(e.v);
      }
    }
    CompensatedSum connected;
    for (NodeId i = 0; i < n; ++i) {
      if (!alive[static_cast<std::size_t>(i)]) continue;
      const int ri = find(i);
      for (NodeId j = i + 1; j < n; ++j) {
        if (alive[static_cast<std::size_t>(j)] && find(j) == ri) connected.add(instance.connection_cost(i, j));
      }
    }
    expectation.add(mass * connected.value());
  }
  return expectation.value();
}

ExhaustiveResult exhaustive_solve(const TreeInstance& instance) {
  const int n = instance.node_count;
  std::vector<NodeId> candidates;
  for (NodeId i = 0; i < n; ++i) {
    const auto si = static_cast<std::size_t>(i);
    if (instance.survival_prob[si] < 1.0 && within_budget(instance.attack_cost[si], instance.budget)) {
      candidates.push_back(i);
    }
  }
  if (static_cast<int>(candidates.size()) > kMaxExhaustiveCandidates) {
    throw Error(ErrorKind::kInstanceTooLarge, std::to_string(candidates.size()) + " attackable nodes exceed the limit of " +
                                                  std::to_string(kMaxExhaustiveCandidates));
  }

  TreeObjective objective(instance);
  ExhaustiveResult best;
  best.attack = AttackVector(n);
  best.value = objective(best.attack);
  best.evaluated = 1;

  // Depth-first over candidates, "skip" before "attack": vectors are visited
  // in increasing lexicographic order, so keeping only strict improvements
  // leaves the lexicographically smallest minimiser.
  AttackVector current(n);
  const double tie_tolerance = 1e-12 * std::max(1.0, instance.connection_cost.total());
  auto recurse = [&](auto&& self, std::size_t t, double spent) -> void {
    if (t == candidates.size()) return;
    self(self, t + 1, spent);
    const NodeId node = candidates[t];
    const double cost = spent + instance.attack_cost[static_cast<std::size_t>(node)];
    if (!within_budget(cost, instance.budget)) return;
    current.set(node, true);
    const double value = objective(current);
    ++best.evaluated;
    if (value < best.value - tie_tolerance) {
      best.value = value;
      best.attack = current;
    }
    self(self, t + 1, cost);
    current.set(node, false);
  };
  recurse(recurse, 0, 0.0);
  return best;
}

}  // namespace scnp
