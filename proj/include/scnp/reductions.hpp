#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "scnp/instance.hpp"

namespace scnp {

struct KnapsackItem {
  double profit = 0.0;
  double weight = 0.0;
};

struct KnapsackInstance {
  std::vector<KnapsackItem> items;
  double capacity = 0.0;
  double target = 0.0;
};

struct KnapsackGadget {
  TreeInstance instance;
  double gamma = 0.0;  // the knapsack answer is yes iff the gadget optimum is <= gamma
};

// Root 0 (p = 0), intermediates 1..n (p = 1), leaf n+i hanging below i with
// p = 1 - profit_i / max profit and kappa = weight_i; unit kappa elsewhere,
// unit connection costs, K = capacity + 1.
KnapsackGadget knapsack_to_dscnp(const KnapsackInstance& knapsack);

// Tree instance plus per-edge survival probabilities and attack costs, in
// the order of base.edges.
struct EdgeAugmentedInstance {
  TreeInstance base;
  std::vector<double> edge_p;
  std::vector<double> edge_kappa;
};

// Splits edge e = (u, v) with a new node n + e carrying the edge's p and
// kappa. Pairs involving a split node cost 0.
TreeInstance cedp_to_scnp(const EdgeAugmentedInstance& augmented);

// c'_ij = c_ij * product of edge presence probabilities along the path; all
// node survival probabilities become 0.
TreeInstance edge_uncertainty_to_deterministic(const TreeInstance& instance, std::span<const double> edge_presence);

// JSON: {"profits": [...], "weights": [...], "capacity": C, "target": T}.
KnapsackInstance knapsack_from_json(const std::string& text);
std::string knapsack_to_json(const KnapsackInstance& knapsack);

// Instance documents extended with "edge_p" and "edge_kappa" arrays.
EdgeAugmentedInstance edge_augmented_from_json(const std::string& text);
std::string edge_augmented_to_json(const EdgeAugmentedInstance& augmented);

// Instance document extended with an "edge_presence" array.
std::vector<double> edge_presence_from_json(const std::string& text, std::size_t edge_count);

std::string read_text(const std::filesystem::path& path);

}  // namespace scnp
