#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "scnp/error.hpp"

namespace scnp {

using NodeId = int;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  auto operator<=>(const Edge&) const = default;
};

// Number of unordered pairs {i, j}, i != j, on n nodes.
constexpr std::size_t pair_count(int n) {
  return n < 2 ? 0 : static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
}

// Row-major index of pair (i, j), i < j, in the packed upper triangle.
constexpr std::size_t pair_index(int i, int j, int n) {
  const auto si = static_cast<std::size_t>(i);
  return si * static_cast<std::size_t>(n) - si * (si + 1) / 2 + static_cast<std::size_t>(j - i - 1);
}

// Symmetric per-pair connection costs c_ij. Either the compact "all ones"
// form or a packed upper triangle of n(n-1)/2 values.
class ConnectionCosts {
 public:
  static constexpr int kMaxDenseNodes = 10000;

  ConnectionCosts() = default;
  static ConnectionCosts unit(int n);
  // Throws InvalidArgument when n exceeds kMaxDenseNodes.
  static ConnectionCosts dense(int n, double fill = 1.0);

  int node_count() const { return n_; }
  bool is_unit() const { return unit_; }
  double operator()(NodeId i, NodeId j) const;
  // Switches a unit table to dense storage on first write.
  void set(NodeId i, NodeId j, double cost);
  double total() const;

  // Value equality: a dense table of ones equals the unit table.
  bool operator==(const ConnectionCosts& other) const;

 private:
  int n_ = 0;
  bool unit_ = true;
  std::vector<double> packed_;
};

struct TreeInstance {
  int node_count = 0;
  std::vector<Edge> edges;
  std::vector<double> survival_prob;
  std::vector<double> attack_cost;
  ConnectionCosts connection_cost;
  double budget = 0.0;

  bool operator==(const TreeInstance&) const = default;
};

struct ValidationIssue {
  ErrorKind kind;
  std::string message;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<ValidationIssue> issues);
  const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

class ParseError : public Error {
 public:
  ParseError(std::string field, std::size_t line, const std::string& message);
  const std::string& field() const { return field_; }
  std::size_t line() const { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

// Lists every violated invariant; empty means the instance is valid.
std::vector<ValidationIssue> check_instance(const TreeInstance& instance);

// Returns the instance unchanged, or throws ValidationError carrying the full
// report from check_instance.
TreeInstance validate(TreeInstance instance);

std::vector<std::vector<NodeId>> adjacency(const TreeInstance& instance);

// D_1: nodes with exactly one neighbour.
std::vector<NodeId> leaf_nodes(const TreeInstance& instance);

// Unique tree paths for every unordered pair i < j, stored flat and oriented
// from the smaller index toward the larger one.
class PathTable {
 public:
  PathTable() = default;
  explicit PathTable(const TreeInstance& instance);

  int node_count() const { return n_; }
  // Requires i < j. Includes both endpoints.
  std::span<const NodeId> path(NodeId i, NodeId j) const;
  std::span<const NodeId> path_by_index(std::size_t pair) const;
  std::size_t total_length() const { return nodes_.size(); }

 private:
  int n_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> nodes_;
};

inline PathTable build_path_table(const TreeInstance& instance) { return PathTable(instance); }

// First-stage decision v: one flag per node.
class AttackVector {
 public:
  AttackVector() = default;
  explicit AttackVector(int n) : flags_(static_cast<std::size_t>(n), 0) {}
  static AttackVector from_set(int n, std::span<const NodeId> attacked);

  int size() const { return static_cast<int>(flags_.size()); }
  bool operator[](NodeId i) const { return flags_[static_cast<std::size_t>(i)] != 0; }
  void set(NodeId i, bool attacked = true) { flags_[static_cast<std::size_t>(i)] = attacked ? 1 : 0; }

  std::vector<NodeId> attacked_set() const;
  int attacked_count() const;
  double cost(const TreeInstance& instance) const;
  // Budget respected and no node with p_i = 1 attacked.
  bool is_feasible(const TreeInstance& instance) const;

  auto operator<=>(const AttackVector&) const = default;

 private:
  std::vector<std::uint8_t> flags_;
};

// Slack applied to every budget comparison, relative to max(1, K).
inline constexpr double kBudgetTolerance = 1e-9;
bool within_budget(double cost, double budget);

// Canonical JSON form.
std::string instance_to_json(const TreeInstance& instance);
TreeInstance instance_from_json(const std::string& text);
TreeInstance read_instance(const std::filesystem::path& path);
void write_instance(const TreeInstance& instance, const std::filesystem::path& path);

// Attack-set files: {"attack": [node, ...]}.
AttackVector read_attack(const std::filesystem::path& path, int node_count);
void write_attack(const AttackVector& attack, const std::filesystem::path& path);

}  // namespace scnp
