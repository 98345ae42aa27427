#include "scnp/dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "scnp/error.hpp"
#include "scnp/evaluator.hpp"

namespace scnp {

namespace {

constexpr double kFloorGuard = 1e-9;

std::int64_t floor_scaled(double x) { return static_cast<std::int64_t>(std::floor(x + kFloorGuard)); }

struct State {
  std::int64_t c = 0;
  std::int64_t value = 0;
  int k = 0;
  int sigma = 0;
  int child = -1;  // state index in the child's F layer
  int rest = -1;   // state index in the next G layer
};

using Layer = std::vector<State>;

class TreeDp {
 public:
  TreeDp(const TreeInstance& instance, int budget, int nu, NodeId root, const DpOptions& options)
      : instance_(instance), budget_(budget), root_(root), options_(options) {
    mu_ = 1;
    for (int t = 0; t < nu; ++t) mu_ *= 10;
    const int n = instance.node_count;
    const auto adj = adjacency(instance);
    children_.resize(static_cast<std::size_t>(n));
    order_.reserve(static_cast<std::size_t>(n));
    std::vector<NodeId> parent(static_cast<std::size_t>(n), -1);
    std::vector<NodeId> stack{root};
    parent[static_cast<std::size_t>(root)] = root;
    while (!stack.empty()) {
      const NodeId a = stack.back();
      stack.pop_back();
      order_.push_back(a);
      for (NodeId w : adj[static_cast<std::size_t>(a)]) {
        if (parent[static_cast<std::size_t>(w)] >= 0) continue;
        parent[static_cast<std::size_t>(w)] = a;
        children_[static_cast<std::size_t>(a)].push_back(w);
        stack.push_back(w);
      }
    }
    for (auto& ch : children_) std::sort(ch.begin(), ch.end());
    layers_.resize(static_cast<std::size_t>(n));
  }

  ApproxResult run() {
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) solve_node(*it);
    const Layer& top = layers_[static_cast<std::size_t>(root_)].front();
    int best = -1;
    for (int idx = 0; idx < static_cast<int>(top.size()); ++idx) {
      if (best < 0 || top[static_cast<std::size_t>(idx)].value < top[static_cast<std::size_t>(best)].value) best = idx;
    }
    ApproxResult out;
    out.attack = AttackVector(instance_.node_count);
    backtrack(best, out.attack);
    out.truncated_value = static_cast<double>(top[static_cast<std::size_t>(best)].value) / static_cast<double>(mu_);
    out.exact_value = objective_tree(instance_, out.attack);
    const double n = instance_.node_count;
    out.slack = n * (n - 1) / (2.0 * static_cast<double>(mu_));
    out.counters = counters_;
    return out;
  }

 private:
  double pi(NodeId a, int sigma) const {
    return sigma != 0 ? instance_.survival_prob[static_cast<std::size_t>(a)] : 1.0;
  }

  bool attackable(NodeId a) const { return budget_ >= 1 && instance_.survival_prob[static_cast<std::size_t>(a)] < 1.0; }

  void account(std::size_t added) {
    counters_.states += static_cast<std::int64_t>(added);
    if (counters_.states > options_.state_cap) {
      throw Error(ErrorKind::kStateOverflow,
                  "more than " + std::to_string(options_.state_cap) + " dynamic programming states");
    }
  }

  void solve_node(NodeId a) {
    const auto& ch = children_[static_cast<std::size_t>(a)];
    auto& layers = layers_[static_cast<std::size_t>(a)];
    layers.assign(ch.size() + 1, {});
    Layer& base = layers.back();
    for (int sigma = 0; sigma <= (attackable(a) ? 1 : 0); ++sigma) {
      State s;
      s.sigma = sigma;
      s.k = sigma;
      s.c = options_.base == DpBaseConvention::kZero ? 0 : floor_scaled(static_cast<double>(mu_) * pi(a, sigma));
      base.push_back(s);
    }
    account(base.size());
    for (std::size_t i = ch.size(); i-- > 0;) {
      const NodeId child = ch[i];
      const NodeId next = i + 1 < ch.size() ? ch[i + 1] : -1;
      layers[i] = merge(a, child, next, layers_[static_cast<std::size_t>(child)].front(), layers[i + 1]);
      account(layers[i].size());
    }
  }

  Layer merge(NodeId a, NodeId child, NodeId next, const Layer& f, const Layer& g) {
    const double mu = static_cast<double>(mu_);
    std::unordered_map<std::int64_t, int> index;
    Layer out;
    const std::int64_t stride = 2 * (static_cast<std::int64_t>(budget_) + 1);
    for (int gi = 0; gi < static_cast<int>(g.size()); ++gi) {
      const State& rest = g[static_cast<std::size_t>(gi)];
      const double pa = pi(a, rest.sigma);
      for (int fi = 0; fi < static_cast<int>(f.size()); ++fi) {
        const State& sub = f[static_cast<std::size_t>(fi)];
        const int k = rest.k + sub.k;
        if (k > budget_) continue;
        ++counters_.transitions;
        const double pc = pi(child, sub.sigma);
        double pc_update = pc;
        if (options_.reading == DpReading::kNextSibling) pc_update = next >= 0 ? pi(next, sub.sigma) : 1.0;
        const std::int64_t b = sub.c;
        const std::int64_t t1 = floor_scaled(mu * pa * pc);
        const std::int64_t t2 = floor_scaled(pc * static_cast<double>(rest.c));
        const std::int64_t t3 = floor_scaled(pa * static_cast<double>(b));
        const std::int64_t t4 = b * rest.c / mu_;
        const std::int64_t value = sub.value + rest.value + t1 + t2 + t3 + t4;
        const std::int64_t c = rest.c + floor_scaled(pa * (static_cast<double>(b) + mu * pc_update));
        const std::int64_t key = c * stride + 2 * k + rest.sigma;
        auto [it, inserted] = index.try_emplace(key, static_cast<int>(out.size()));
        if (inserted) {
          out.push_back({c, value, k, rest.sigma, fi, gi});
        } else if (value < out[static_cast<std::size_t>(it->second)].value) {
          auto& s = out[static_cast<std::size_t>(it->second)];
          s.value = value;
          s.child = fi;
          s.rest = gi;
        }
      }
    }
    return out;
  }

  void backtrack(int state, AttackVector& attack) const {
    struct Frame {
      NodeId node;
      std::size_t layer;
      int state;
    };
    std::vector<Frame> stack{{root_, 0, state}};
    while (!stack.empty()) {
      const Frame fr = stack.back();
      stack.pop_back();
      const auto& layers = layers_[static_cast<std::size_t>(fr.node)];
      const State& s = layers[fr.layer][static_cast<std::size_t>(fr.state)];
      if (fr.layer + 1 == layers.size()) {
        if (s.sigma != 0) attack.set(fr.node);
        continue;
      }
      const NodeId child = children_[static_cast<std::size_t>(fr.node)][fr.layer];
      stack.push_back({child, 0, s.child});
      stack.push_back({fr.node, fr.layer + 1, s.rest});
    }
  }

  const TreeInstance& instance_;
  int budget_;
  NodeId root_;
  const DpOptions& options_;
  std::int64_t mu_ = 1;
  std::vector<std::vector<NodeId>> children_;
  std::vector<NodeId> order_;  // preorder from the root
  std::vector<std::vector<Layer>> layers_;
  DpCounters counters_;
};

}  // namespace

ApproxResult dp_solve(const TreeInstance& instance, int budget, int nu, NodeId root, const DpOptions& options) {
  const int n = instance.node_count;
  for (double kappa : instance.attack_cost) {
    if (kappa != 1.0) throw Error(ErrorKind::kNonUnitCosts, "attack costs must all be 1");
  }
  if (!instance.connection_cost.is_unit()) {
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = i + 1; j < n; ++j) {
        if (instance.connection_cost(i, j) != 1.0) throw Error(ErrorKind::kNonUnitCosts, "connection costs must all be 1");
      }
    }
  }
  if (budget < 0) throw Error(ErrorKind::kNegativeBudget, "budget must be nonnegative");
  if (nu < 1 || nu > 9) throw Error(ErrorKind::kInvalidArgument, "nu must lie in 1..9");
  if (root < 0 || root >= n) throw Error(ErrorKind::kInvalidArgument, "root out of range");
  TreeDp dp(instance, budget, nu, root, options);
  return dp.run();
}

}  // namespace scnp
