#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "scnp/instance.hpp"

namespace testing_helpers {

// Unit-cost instance on the given edges.
inline scnp::TreeInstance make_tree(int n, std::initializer_list<std::pair<int, int>> edges, std::vector<double> p,
                                    double budget) {
  scnp::TreeInstance t;
  t.node_count = n;
  for (const auto& [u, v] : edges) t.edges.push_back({u, v});
  t.survival_prob = std::move(p);
  t.attack_cost.assign(static_cast<std::size_t>(n), 1.0);
  t.connection_cost = scnp::ConnectionCosts::unit(n);
  t.budget = budget;
  return t;
}

inline scnp::TreeInstance path3(double p1 = 0.5, double budget = 1.0) {
  return make_tree(3, {{0, 1}, {1, 2}}, {0.5, p1, 0.5}, budget);
}

}  // namespace testing_helpers
