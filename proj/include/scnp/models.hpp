#pragma once

#include <span>
#include <utility>
#include <vector>

#include "scnp/instance.hpp"
#include "scnp/milp/branch_and_bound.hpp"
#include "scnp/milp/linear_model.hpp"

namespace scnp {

struct ChainOptions {
  // Chains from one start node share the variables of common path prefixes.
  bool share_prefixes = false;
  bool add_valid_ineq = false;
};

// Variable handles of one pair's chain, position k-1 for k = 1..|P_ij|, in
// the orientation of PathTable::path(i, j).
struct ChainVariables {
  std::vector<int> s;
  std::vector<int> r;
};

struct ChainModel {
  milp::LinearModel model;
  std::vector<int> v;                  // binary per node
  std::vector<ChainVariables> chains;  // by pair_index
};

ChainModel build_chain_milp(const TreeInstance& instance, const PathTable& paths, ChainOptions options = {});

// Pairs (i, j) standing for v_i <= v_j: i a leaf, j its neighbour, j not a
// leaf, p_j <= p_i and kappa_j <= kappa_i.
std::vector<std::pair<NodeId, NodeId>> valid_inequalities(const TreeInstance& instance);

// min(floor(K / min kappa), path_length).
int rho(const TreeInstance& instance, int path_length);

struct IlpPModel {
  milp::LinearModel model;
  std::vector<int> v;
  std::vector<std::vector<int>> y;  // by pair_index, y[r] for r = 0..rho_ij
};

// Throws UnequalProbabilities unless every p_i is the same.
IlpPModel build_ilp_p(const TreeInstance& instance, const PathTable& paths);

AttackVector attack_from_solution(std::span<const double> x, std::span<const int> v);

struct ModelSolution {
  AttackVector attack;
  double value = 0.0;  // objective_tree of `attack`
  double bound = 0.0;  // proven lower bound, never above value
  milp::Status status = milp::Status::kInfeasible;
  long nodes = 0;
  long iterations = 0;
  double seconds = 0.0;
};

ModelSolution solve_chain_milp(const TreeInstance& instance, ChainOptions options = {},
                               const milp::MilpOptions& milp_options = {});
ModelSolution solve_ilp_p(const TreeInstance& instance, const milp::MilpOptions& milp_options = {});

}  // namespace scnp
