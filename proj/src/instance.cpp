#include "scnp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace scnp {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// ConnectionCosts

ConnectionCosts ConnectionCosts::unit(int n) {
  ConnectionCosts costs;
  costs.n_ = n;
  costs.unit_ = true;
  return costs;
}

ConnectionCosts ConnectionCosts::dense(int n, double fill) {
  if (n > kMaxDenseNodes) {
    throw Error(ErrorKind::kInvalidArgument,
                "dense connection costs rejected for n = " + std::to_string(n) + " > " +
                    std::to_string(kMaxDenseNodes));
  }
  ConnectionCosts costs;
  costs.n_ = n;
  costs.unit_ = false;
  costs.packed_.assign(pair_count(n), fill);
  return costs;
}

double ConnectionCosts::operator()(NodeId i, NodeId j) const {
  if (unit_) return 1.0;
  if (i > j) std::swap(i, j);
  return packed_[pair_index(i, j, n_)];
}

void ConnectionCosts::set(NodeId i, NodeId j, double cost) {
  if (i == j) throw Error(ErrorKind::kInvalidArgument, "connection cost on a diagonal pair");
  if (unit_) {
    if (cost == 1.0) return;
    *this = dense(n_, 1.0);
  }
  if (i > j) std::swap(i, j);
  packed_[pair_index(i, j, n_)] = cost;
}

double ConnectionCosts::total() const {
  if (unit_) return static_cast<double>(pair_count(n_));
  return std::accumulate(packed_.begin(), packed_.end(), 0.0);
}

bool ConnectionCosts::operator==(const ConnectionCosts& other) const {
  if (n_ != other.n_) return false;
  if (unit_ && other.unit_) return true;
  for (NodeId i = 0; i < n_; ++i) {
    for (NodeId j = i + 1; j < n_; ++j) {
      if ((*this)(i, j) != other(i, j)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

std::string join_issues(const std::vector<ValidationIssue>& issues) {
  std::string out;
  for (const auto& issue : issues) {
    if (!out.empty()) out += "; ";
    out += std::string(to_string(issue.kind)) + " (" + issue.message + ")";
  }
  return out;
}

ErrorKind first_kind(const std::vector<ValidationIssue>& issues) {
  return issues.empty() ? ErrorKind::kInvalidArgument : issues.front().kind;
}

}  // namespace

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : Error(first_kind(issues), join_issues(issues)), issues_(std::move(issues)) {}

ParseError::ParseError(std::string field, std::size_t line, const std::string& message)
    : Error(ErrorKind::kParseError,
            "field '" + field + "'" + (line > 0 ? " at line " + std::to_string(line) : "") + ": " +
                message),
      field_(std::move(field)),
      line_(line) {}

std::vector<ValidationIssue> check_instance(const TreeInstance& instance) {
  std::vector<ValidationIssue> issues;
  const int n = instance.node_count;
  auto add = [&](ErrorKind kind, std::string message) { issues.push_back({kind, std::move(message)}); };

  if (n < 1) {
    add(ErrorKind::kNotATree, "node count must be positive");
    return issues;
  }
  if (instance.survival_prob.size() != static_cast<std::size_t>(n)) {
    add(ErrorKind::kInvalidArgument, "p has " + std::to_string(instance.survival_prob.size()) +
                                         " entries, expected " + std::to_string(n));
  }
  if (instance.attack_cost.size() != static_cast<std::size_t>(n)) {
    add(ErrorKind::kInvalidArgument, "kappa has " + std::to_string(instance.attack_cost.size()) +
                                         " entries, expected " + std::to_string(n));
  }
  if (instance.connection_cost.node_count() != n) {
    add(ErrorKind::kInvalidArgument, "connection cost table sized for " +
                                         std::to_string(instance.connection_cost.node_count()) +
                                         " nodes");
  }

  // Tree structure: n - 1 edges, in range, single component.
  bool edges_in_range = true;
  for (const auto& e : instance.edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      add(ErrorKind::kNotATree,
          "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") out of range");
      edges_in_range = false;
    } else if (e.u == e.v) {
      add(ErrorKind::kNotATree, "self loop on node " + std::to_string(e.u));
      edges_in_range = false;
    }
  }
  if (instance.edges.size() != static_cast<std::size_t>(n - 1)) {
    add(ErrorKind::kNotATree, "expected " + std::to_string(n - 1) + " edges, found " +
                                  std::to_string(instance.edges.size()));
  } else if (edges_in_range) {
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[static_cast<std::size_t>(x)] != x) {
        auto& px = parent[static_cast<std::size_t>(x)];
        px = parent[static_cast<std::size_t>(px)];
        x = px;
      }
      return x;
    };
    for (const auto& e : instance.edges) {
      const int a = find(e.u);
      const int b = find(e.v);
      if (a == b) {
        add(ErrorKind::kNotATree,
            "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") closes a cycle");
        break;
      }
      parent[static_cast<std::size_t>(a)] = b;
    }
  }

  for (std::size_t i = 0; i < instance.survival_prob.size(); ++i) {
    const double p = instance.survival_prob[i];
    if (!(p >= 0.0 && p <= 1.0)) {
      add(ErrorKind::kProbabilityOutOfRange, "p_" + std::to_string(i) + " = " + std::to_string(p));
    }
  }
  for (std::size_t i = 0; i < instance.attack_cost.size(); ++i) {
    const double k = instance.attack_cost[i];
    if (!(k > 0.0) || !std::isfinite(k)) {
      add(ErrorKind::kNonpositiveAttackCost, "kappa_" + std::to_string(i) + " = " + std::to_string(k));
    }
  }
  const auto& c = instance.connection_cost;
  if (!c.is_unit() && c.node_count() == n) {
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = i + 1; j < n; ++j) {
        if (!(c(i, j) >= 0.0) || !std::isfinite(c(i, j))) {
          add(ErrorKind::kNegativeConnectionCost,
              "c_" + std::to_string(i) + "," + std::to_string(j) + " = " + std::to_string(c(i, j)));
        }
      }
    }
  }
  if (!(instance.budget >= 0.0) || !std::isfinite(instance.budget)) {
    add(ErrorKind::kNegativeBudget, "K = " + std::to_string(instance.budget));
  }
  return issues;
}

TreeInstance validate(TreeInstance instance) {
  auto issues = check_instance(instance);
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return instance;
}

std::vector<std::vector<NodeId>> adjacency(const TreeInstance& instance) {
  std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(instance.node_count));
  for (const auto& e : instance.edges) {
    adj[static_cast<std::size_t>(e.u)].push_back(e.v);
    adj[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

std::vector<NodeId> leaf_nodes(const TreeInstance& instance) {
  std::vector<int> degree(static_cast<std::size_t>(instance.node_count), 0);
  for (const auto& e : instance.edges) {
    ++degree[static_cast<std::size_t>(e.u)];
    ++degree[static_cast<std::size_t>(e.v)];
  }
  std::vector<NodeId> leaves;
  for (NodeId i = 0; i < instance.node_count; ++i) {
    if (degree[static_cast<std::size_t>(i)] == 1) leaves.push_back(i);
  }
  return leaves;
}

// ---------------------------------------------------------------------------
// PathTable

PathTable::PathTable(const TreeInstance& instance) : n_(instance.node_count) {
  const auto adj = adjacency(instance);
  const auto n = static_cast<std::size_t>(n_);
  offsets_.reserve(pair_count(n_) + 1);
  offsets_.push_back(0);

  std::vector<NodeId> parent(n);
  std::vector<NodeId> stack;
  std::vector<NodeId> scratch;
  for (NodeId source = 0; source < n_; ++source) {
    // One DFS per source; parent pointers lead back to the source.
    std::fill(parent.begin(), parent.end(), -1);
    parent[static_cast<std::size_t>(source)] = source;
    stack.assign(1, source);
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (NodeId w : adj[static_cast<std::size_t>(u)]) {
        if (parent[static_cast<std::size_t>(w)] == -1) {
          parent[static_cast<std::size_t>(w)] = u;
          stack.push_back(w);
        }
      }
    }
    for (NodeId target = source + 1; target < n_; ++target) {
      scratch.clear();
      for (NodeId x = target; x != source; x = parent[static_cast<std::size_t>(x)]) scratch.push_back(x);
      scratch.push_back(source);
      nodes_.insert(nodes_.end(), scratch.rbegin(), scratch.rend());
      offsets_.push_back(nodes_.size());
    }
  }
}

std::span<const NodeId> PathTable::path(NodeId i, NodeId j) const {
  return path_by_index(pair_index(i, j, n_));
}

std::span<const NodeId> PathTable::path_by_index(std::size_t pair) const {
  const auto begin = offsets_[pair];
  const auto end = offsets_[pair + 1];
  return {nodes_.data() + begin, end - begin};
}

// ---------------------------------------------------------------------------
// AttackVector

AttackVector AttackVector::from_set(int n, std::span<const NodeId> attacked) {
  AttackVector v(n);
  for (NodeId i : attacked) {
    if (i < 0 || i >= n) throw Error(ErrorKind::kInvalidArgument, "attacked node out of range");
    v.set(i);
  }
  return v;
}

std::vector<NodeId> AttackVector::attacked_set() const {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < size(); ++i) {
    if ((*this)[i]) out.push_back(i);
  }
  return out;
}

int AttackVector::attacked_count() const {
  return static_cast<int>(std::count(flags_.begin(), flags_.end(), std::uint8_t{1}));
}

double AttackVector::cost(const TreeInstance& instance) const {
  double total = 0.0;
  for (NodeId i = 0; i < size(); ++i) {
    if ((*this)[i]) total += instance.attack_cost[static_cast<std::size_t>(i)];
  }
  return total;
}

bool within_budget(double cost, double budget) {
  return cost <= budget + kBudgetTolerance * std::max(1.0, std::abs(budget));
}

bool AttackVector::is_feasible(const TreeInstance& instance) const {
  if (size() != instance.node_count) return false;
  for (NodeId i = 0; i < size(); ++i) {
    if ((*this)[i] && instance.survival_prob[static_cast<std::size_t>(i)] >= 1.0) return false;
  }
  return within_budget(cost(instance), instance.budget);
}

// ---------------------------------------------------------------------------
// JSON I/O

namespace {

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

std::size_t line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  return pos == std::string::npos ? 0 : line_of_offset(text, pos);
}

const json& require(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw ParseError(key, 0, "missing");
  return doc.at(key);
}

double as_number(const json& value, const std::string& text, const std::string& field) {
  if (!value.is_number()) throw ParseError(field, line_of_key(text, field), "expected a number");
  return value.get<double>();
}

std::vector<double> as_number_list(const json& value, const std::string& text, const std::string& field) {
  if (!value.is_array()) throw ParseError(field, line_of_key(text, field), "expected an array");
  std::vector<double> out;
  out.reserve(value.size());
  for (const auto& item : value) out.push_back(as_number(item, text, field));
  return out;
}

int as_index(const json& value, const std::string& text, const std::string& field) {
  if (!value.is_number_integer()) throw ParseError(field, line_of_key(text, field), "expected an integer");
  return value.get<int>();
}

std::string number(double x) { return json(x).dump(); }

template <class Range, class Fn>
std::string list(const Range& range, Fn&& fn) {
  std::string out = "[";
  bool first = true;
  for (const auto& item : range) {
    if (!first) out += ", ";
    first = false;
    out += fn(item);
  }
  return out + "]";
}

}  // namespace

std::string instance_to_json(const TreeInstance& instance) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"n\": " << instance.node_count << ",\n";
  os << "  \"edges\": "
     << list(instance.edges, [](const Edge& e) { return "[" + std::to_string(e.u) + ", " + std::to_string(e.v) + "]"; })
     << ",\n";
  os << "  \"p\": " << list(instance.survival_prob, number) << ",\n";
  os << "  \"kappa\": " << list(instance.attack_cost, number) << ",\n";
  const auto& c = instance.connection_cost;
  if (c.is_unit()) {
    os << "  \"c\": \"unit\",\n";
  } else {
    std::vector<std::string> entries;
    for (NodeId i = 0; i < instance.node_count; ++i) {
      for (NodeId j = i + 1; j < instance.node_count; ++j) {
        if (c(i, j) != 1.0) {
          entries.push_back("[" + std::to_string(i) + ", " + std::to_string(j) + ", " + number(c(i, j)) + "]");
        }
      }
    }
    os << "  \"c\": " << list(entries, [](const std::string& s) { return s; }) << ",\n";
  }
  os << "  \"K\": " << number(instance.budget) << "\n";
  os << "}\n";
  return os.str();
}

TreeInstance instance_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("<document>", line_of_offset(text, e.byte), e.what());
  }
  if (!doc.is_object()) throw ParseError("<document>", 1, "expected an object");

  TreeInstance instance;
  const auto& n_value = require(doc, "n");
  instance.node_count = as_index(n_value, text, "n");
  if (instance.node_count < 1) throw ParseError("n", line_of_key(text, "n"), "must be positive");

  const auto& edges = require(doc, "edges");
  if (!edges.is_array()) throw ParseError("edges", line_of_key(text, "edges"), "expected an array");
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 2) {
      throw ParseError("edges", line_of_key(text, "edges"), "each edge must be [u, v]");
    }
    instance.edges.push_back({as_index(e[0], text, "edges"), as_index(e[1], text, "edges")});
  }
  instance.survival_prob = as_number_list(require(doc, "p"), text, "p");
  instance.attack_cost = as_number_list(require(doc, "kappa"), text, "kappa");

  const auto& c = require(doc, "c");
  if (c.is_string()) {
    if (c.get<std::string>() != "unit") throw ParseError("c", line_of_key(text, "c"), "expected \"unit\" or a list");
    instance.connection_cost = ConnectionCosts::unit(instance.node_count);
  } else if (c.is_array()) {
    try {
      instance.connection_cost = ConnectionCosts::dense(instance.node_count, 1.0);
    } catch (const Error& e) {
      throw ParseError("c", line_of_key(text, "c"), e.what());
    }
    for (const auto& entry : c) {
      if (!entry.is_array() || entry.size() != 3) {
        throw ParseError("c", line_of_key(text, "c"), "each entry must be [i, j, c]");
      }
      const int i = as_index(entry[0], text, "c");
      const int j = as_index(entry[1], text, "c");
      if (i < 0 || j < 0 || i >= instance.node_count || j >= instance.node_count || i == j) {
        throw ParseError("c", line_of_key(text, "c"), "pair index out of range");
      }
      instance.connection_cost.set(i, j, as_number(entry[2], text, "c"));
    }
  } else {
    throw ParseError("c", line_of_key(text, "c"), "expected \"unit\" or a list");
  }
  instance.budget = as_number(require(doc, "K"), text, "K");
  return validate(std::move(instance));
}

TreeInstance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("<file>", 0, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return instance_from_json(buffer.str());
}

void write_instance(const TreeInstance& instance, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write " + path.string());
  out << instance_to_json(instance);
}

AttackVector read_attack(const std::filesystem::path& path, int node_count) {
  std::ifstream in(path);
  if (!in) throw ParseError("<file>", 0, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("<document>", line_of_offset(text, e.byte), e.what());
  }
  const json* list_ptr = &doc;
  if (doc.is_object()) list_ptr = &require(doc, "attack");
  if (!list_ptr->is_array()) throw ParseError("attack", line_of_key(text, "attack"), "expected an array");
  std::vector<NodeId> nodes;
  for (const auto& item : *list_ptr) nodes.push_back(as_index(item, text, "attack"));
  return AttackVector::from_set(node_count, nodes);
}

void write_attack(const AttackVector& attack, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write " + path.string());
  out << json{{"attack", attack.attacked_set()}}.dump() << "\n";
}

}  // namespace scnp
