#include "scnp/generator.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace scnp {

std::string_view to_string(WeightScheme scheme) {
  switch (scheme) {
    case WeightScheme::kUnit: return "unit";
    case WeightScheme::kType1: return "type1";
    case WeightScheme::kType2: return "type2";
    case WeightScheme::kType3: return "type3";
  }
  return "unit";
}

std::optional<WeightScheme> parse_weight_scheme(std::string_view name) {
  if (name == "unit") return WeightScheme::kUnit;
  if (name == "type1") return WeightScheme::kType1;
  if (name == "type2") return WeightScheme::kType2;
  if (name == "type3") return WeightScheme::kType3;
  return std::nullopt;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, RandomStream stream)
    : engine_(splitmix64(seed + static_cast<std::uint64_t>(stream) * 0x9E3779B97F4A7C15ULL)) {}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
  if (range == 0) return lo + static_cast<std::int64_t>(next());  // full 64-bit span
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t draw = next();
  while (draw >= limit) draw = next();
  return lo + static_cast<std::int64_t>(draw % range);
}

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::vector<Edge> broder_tree(int n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "broder_tree needs n >= 1");
  std::vector<Edge> edges;
  if (n == 1) return edges;
  edges.reserve(static_cast<std::size_t>(n - 1));

  Rng rng(seed, RandomStream::kTopology);
  std::vector<bool> visited(static_cast<std::size_t>(n), false);
  auto current = static_cast<NodeId>(rng.uniform_int(0, n - 1));
  visited[static_cast<std::size_t>(current)] = true;
  int remaining = n - 1;
  while (remaining > 0) {
    // Uniform neighbour in K_n: any node other than the current one.
    auto next = static_cast<NodeId>(rng.uniform_int(0, n - 2));
    if (next >= current) ++next;
    if (!visited[static_cast<std::size_t>(next)]) {
      visited[static_cast<std::size_t>(next)] = true;
      edges.push_back({current, next});
      --remaining;
    }
    current = next;
  }
  return edges;
}

TreeInstance assign_weights(int n, const std::vector<Edge>& edges, WeightScheme scheme, std::uint64_t seed) {
  TreeInstance instance;
  instance.node_count = n;
  instance.edges = edges;

  Rng prob_rng(seed, RandomStream::kProbabilities);
  instance.survival_prob.resize(static_cast<std::size_t>(n));
  for (auto& p : instance.survival_prob) p = std::round(prob_rng.uniform01() * 100.0) / 100.0;

  Rng weight_rng(seed, RandomStream::kWeights);
  instance.attack_cost.resize(static_cast<std::size_t>(n));
  if (scheme == WeightScheme::kUnit) {
    std::fill(instance.attack_cost.begin(), instance.attack_cost.end(), 1.0);
    instance.connection_cost = ConnectionCosts::unit(n);
  } else {
    instance.connection_cost = ConnectionCosts::dense(n, 1.0);
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = i + 1; j < n; ++j) {
        instance.connection_cost.set(i, j, static_cast<double>(weight_rng.uniform_int(1, 10)));
      }
    }
    for (std::size_t i = 0; i < instance.attack_cost.size(); ++i) {
      const double p = instance.survival_prob[i];
      switch (scheme) {
        case WeightScheme::kType1:
          instance.attack_cost[i] = static_cast<double>(weight_rng.uniform_int(1, 10));
          break;
        case WeightScheme::kType2:
          instance.attack_cost[i] = static_cast<double>(weight_rng.uniform_int(1, 100));
          break;
        case WeightScheme::kType3:
          instance.attack_cost[i] = p == 0.0 ? 100.0 : 1.0 / p;
          break;
        case WeightScheme::kUnit:
          break;
      }
    }
  }
  const double total_kappa = std::accumulate(instance.attack_cost.begin(), instance.attack_cost.end(), 0.0);
  instance.budget = 0.1 * total_kappa;
  return instance;
}

std::string instance_file_name(int n, WeightScheme scheme, std::uint64_t seed) {
  return "tree_n" + std::to_string(n) + "_" + std::string(to_string(scheme)) + "_" + std::to_string(seed) + ".json";
}

}  // namespace scnp
