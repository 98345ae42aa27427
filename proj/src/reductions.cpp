#include "scnp/reductions.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "scnp/error.hpp"

namespace scnp {

using json = nlohmann::json;

KnapsackGadget knapsack_to_dscnp(const KnapsackInstance& knapsack) {
  const int items = static_cast<int>(knapsack.items.size());
  if (items == 0) throw Error(ErrorKind::kInvalidArgument, "knapsack needs at least one item");
  double best = 0.0;
  for (const auto& item : knapsack.items) {
    if (!(item.profit > 0.0) || !(item.weight > 0.0)) {
      throw Error(ErrorKind::kInvalidArgument, "item profits and weights must be positive");
    }
    best = std::max(best, item.profit);
  }
  KnapsackGadget out;
  auto& t = out.instance;
  t.node_count = 2 * items + 1;
  t.survival_prob.assign(static_cast<std::size_t>(t.node_count), 1.0);
  t.attack_cost.assign(static_cast<std::size_t>(t.node_count), 1.0);
  t.survival_prob[0] = 0.0;
  for (int i = 1; i <= items; ++i) {
    const auto& item = knapsack.items[static_cast<std::size_t>(i - 1)];
    t.edges.push_back({0, i});
    t.edges.push_back({i, items + i});
    t.survival_prob[static_cast<std::size_t>(items + i)] = 1.0 - item.profit / best;
    t.attack_cost[static_cast<std::size_t>(items + i)] = item.weight;
  }
  t.connection_cost = ConnectionCosts::unit(t.node_count);
  t.budget = knapsack.capacity + 1.0;
  out.gamma = items - knapsack.target / best;
  out.instance = validate(std::move(out.instance));
  return out;
}

TreeInstance cedp_to_scnp(const EdgeAugmentedInstance& augmented) {
  const auto& base = augmented.base;
  const int n = base.node_count;
  const auto m = base.edges.size();
  if (augmented.edge_p.size() != m || augmented.edge_kappa.size() != m) {
    throw Error(ErrorKind::kInvalidArgument, "edge data must have one entry per edge");
  }
  TreeInstance out;
  out.node_count = n + static_cast<int>(m);
  out.survival_prob = base.survival_prob;
  out.attack_cost = base.attack_cost;
  out.connection_cost = ConnectionCosts::dense(out.node_count, 0.0);
  for (std::size_t e = 0; e < m; ++e) {
    const NodeId mid = n + static_cast<NodeId>(e);
    out.edges.push_back({base.edges[e].u, mid});
    out.edges.push_back({mid, base.edges[e].v});
    out.survival_prob.push_back(augmented.edge_p[e]);
    out.attack_cost.push_back(augmented.edge_kappa[e]);
  }
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) out.connection_cost.set(i, j, base.connection_cost(i, j));
  }
  out.budget = base.budget;
  return validate(std::move(out));
}

TreeInstance edge_uncertainty_to_deterministic(const TreeInstance& instance, std::span<const double> edge_presence) {
  const int n = instance.node_count;
  if (edge_presence.size() != instance.edges.size()) {
    throw Error(ErrorKind::kInvalidArgument, "edge presence must have one entry per edge");
  }
  for (double q : edge_presence) {
    if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorKind::kProbabilityOutOfRange, "edge presence outside [0, 1]");
  }
  std::vector<std::vector<std::pair<NodeId, double>>> adj(static_cast<std::size_t>(n));
  for (std::size_t e = 0; e < instance.edges.size(); ++e) {
    const auto [u, v] = instance.edges[e];
    adj[static_cast<std::size_t>(u)].emplace_back(v, edge_presence[e]);
    adj[static_cast<std::size_t>(v)].emplace_back(u, edge_presence[e]);
  }
  TreeInstance out = instance;
  out.survival_prob.assign(static_cast<std::size_t>(n), 0.0);
  out.connection_cost = ConnectionCosts::dense(n, 0.0);
  std::vector<double> along(static_cast<std::size_t>(n));
  struct Frame {
    NodeId node;
    NodeId parent;
  };
  std::vector<Frame> stack;
  for (NodeId i = 0; i < n; ++i) {
    along[static_cast<std::size_t>(i)] = 1.0;
    stack.push_back({i, -1});
    while (!stack.empty()) {
      const auto [u, parent] = stack.back();
      stack.pop_back();
      if (u > i) out.connection_cost.set(i, u, instance.connection_cost(i, u) * along[static_cast<std::size_t>(u)]);
      for (const auto& [w, q] : adj[static_cast<std::size_t>(u)]) {
        if (w == parent) continue;
        along[static_cast<std::size_t>(w)] = along[static_cast<std::size_t>(u)] * q;
        stack.push_back({w, u});
      }
    }
  }
  return validate(std::move(out));
}

namespace {

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("<document>", 0, e.what());
  }
}

std::vector<double> number_list(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw ParseError(key, 0, "missing");
  const auto& value = doc.at(key);
  if (!value.is_array()) throw ParseError(key, 0, "expected an array");
  std::vector<double> out;
  for (const auto& item : value) {
    if (!item.is_number()) throw ParseError(key, 0, "expected numbers");
    out.push_back(item.get<double>());
  }
  return out;
}

double number(const json& doc, const std::string& key) {
  if (!doc.contains(key) || !doc.at(key).is_number()) throw ParseError(key, 0, "expected a number");
  return doc.at(key).get<double>();
}

// Appends extra top-level fields to a canonical instance document.
std::string extend_document(const std::string& base, const std::vector<std::pair<std::string, std::vector<double>>>& fields) {
  auto close = base.rfind('}');
  std::string out = base.substr(0, close);
  while (!out.empty() && (out.back() == '\n' || out.back() == ' ')) out.pop_back();
  for (const auto& [key, values] : fields) out += ",\n  \"" + key + "\": " + json(values).dump();
  out += "\n}\n";
  return out;
}

}  // namespace

KnapsackInstance knapsack_from_json(const std::string& text) {
  const json doc = parse_document(text);
  const auto profits = number_list(doc, "profits");
  const auto weights = number_list(doc, "weights");
  if (profits.size() != weights.size()) throw ParseError("weights", 0, "must match profits in length");
  KnapsackInstance out;
  for (std::size_t i = 0; i < profits.size(); ++i) out.items.push_back({profits[i], weights[i]});
  out.capacity = number(doc, "capacity");
  out.target = number(doc, "target");
  return out;
}

std::string knapsack_to_json(const KnapsackInstance& knapsack) {
  json doc;
  std::vector<double> profits;
  std::vector<double> weights;
  for (const auto& item : knapsack.items) {
    profits.push_back(item.profit);
    weights.push_back(item.weight);
  }
  doc["profits"] = profits;
  doc["weights"] = weights;
  doc["capacity"] = knapsack.capacity;
  doc["target"] = knapsack.target;
  return doc.dump(2) + "\n";
}

EdgeAugmentedInstance edge_augmented_from_json(const std::string& text) {
  EdgeAugmentedInstance out;
  out.base = instance_from_json(text);
  const json doc = parse_document(text);
  out.edge_p = number_list(doc, "edge_p");
  out.edge_kappa = number_list(doc, "edge_kappa");
  return out;
}

std::string edge_augmented_to_json(const EdgeAugmentedInstance& augmented) {
  return extend_document(instance_to_json(augmented.base),
                         {{"edge_p", augmented.edge_p}, {"edge_kappa", augmented.edge_kappa}});
}

std::vector<double> edge_presence_from_json(const std::string& text, std::size_t edge_count) {
  const auto out = number_list(parse_document(text), "edge_presence");
  if (out.size() != edge_count) throw ParseError("edge_presence", 0, "needs one entry per edge");
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("<file>", 0, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace scnp
