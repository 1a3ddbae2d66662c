#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace uavneat::neat {

using NodeId = std::int64_t;
using Innovation = std::int64_t;

enum class NodeKind { input, hidden, output };

inline const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::input: return "input";
    case NodeKind::hidden: return "hidden";
    case NodeKind::output: return "output";
  }
  return "?";
}

inline NodeKind node_kind_from_string(const std::string& s) {
  if (s == "input") return NodeKind::input;
  if (s == "hidden") return NodeKind::hidden;
  if (s == "output") return NodeKind::output;
  throw std::invalid_argument("unknown node kind '" + s + "'");
}

struct NodeGene {
  NodeId id = 0;
  NodeKind kind = NodeKind::hidden;
  double bias = 0.0;

  friend bool operator==(const NodeGene&, const NodeGene&) = default;
};

struct ConnectionGene {
  Innovation innovation = 0;
  NodeId from = 0;
  NodeId to = 0;
  double weight = 0.0;
  bool enabled = true;

  friend bool operator==(const ConnectionGene&, const ConnectionGene&) = default;
};

// Hyperparameters of the evolutionary engine. Defaults are the experiment
// settings used throughout the project (population 50, threshold 3, ...).
struct NeatConfig {
  int population_size = 50;
  double weight_min = -30.0;
  double weight_max = 30.0;
  double weight_mutation_rate = 0.8;
  double bias_mutation_rate = 0.7;
  double node_add_prob = 0.2;
  double node_delete_prob = 0.2;
  double conn_add_prob = 0.2;
  double conn_delete_prob = 0.2;
  double compat_threshold = 3.0;
  double c_excess = 1.0;
  double c_disjoint = 1.0;
  double c_weight = 0.4;
  int elite_count = 1;
  double perturb_stddev = 1.0;
  double crossover_prob = 0.75;
  // 0 disables stagnation removal.
  int stagnation_generations = 0;
  // Resampling budget for cycle-free connection additions.
  int add_connection_attempts = 20;

  friend bool operator==(const NeatConfig&, const NeatConfig&) = default;

  void validate() const {
    auto prob = [](double p, const char* name) {
      if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument(std::string(name) + " must be a probability in [0,1]");
    };
    if (population_size < 2) throw std::invalid_argument("population_size must be >= 2");
    if (!(weight_min < weight_max)) throw std::invalid_argument("weight range must satisfy min < max");
    prob(weight_mutation_rate, "weight_mutation_rate");
    prob(bias_mutation_rate, "bias_mutation_rate");
    prob(node_add_prob, "node_add_prob");
    prob(node_delete_prob, "node_delete_prob");
    prob(conn_add_prob, "conn_add_prob");
    prob(conn_delete_prob, "conn_delete_prob");
    prob(crossover_prob, "crossover_prob");
    if (!(compat_threshold > 0.0)) throw std::invalid_argument("compat_threshold must be > 0");
    if (c_excess < 0.0 || c_disjoint < 0.0 || c_weight < 0.0)
      throw std::invalid_argument("distance coefficients must be >= 0");
    if (elite_count < 0 || elite_count >= population_size)
      throw std::invalid_argument("elite_count must lie in [0, population_size)");
    if (!(perturb_stddev >= 0.0)) throw std::invalid_argument("perturb_stddev must be >= 0");
    if (stagnation_generations < 0) throw std::invalid_argument("stagnation_generations must be >= 0");
    if (add_connection_attempts < 1) throw std::invalid_argument("add_connection_attempts must be >= 1");
  }

  [[nodiscard]] double clamp_weight(double w) const { return std::clamp(w, weight_min, weight_max); }
};

// Variable-topology feed-forward network encoding. Nodes are kept sorted by
// id and connections by innovation number; inputs occupy ids
// [0, input_count) and outputs [input_count, input_count + output_count).
struct Genome {
  std::vector<NodeGene> nodes;
  std::vector<ConnectionGene> connections;
  std::optional<double> fitness;

  friend bool operator==(const Genome&, const Genome&) = default;

  [[nodiscard]] std::size_t count(NodeKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [kind](const NodeGene& n) { return n.kind == kind; }));
  }
  [[nodiscard]] std::size_t input_count() const { return count(NodeKind::input); }
  [[nodiscard]] std::size_t output_count() const { return count(NodeKind::output); }

  [[nodiscard]] std::size_t enabled_count() const {
    return static_cast<std::size_t>(std::count_if(connections.begin(), connections.end(),
                                                  [](const ConnectionGene& c) { return c.enabled; }));
  }

  [[nodiscard]] const NodeGene* find_node(NodeId id) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                               [](const NodeGene& n, NodeId v) { return n.id < v; });
    return (it != nodes.end() && it->id == id) ? &*it : nullptr;
  }
  [[nodiscard]] bool has_node(NodeId id) const { return find_node(id) != nullptr; }

  [[nodiscard]] const ConnectionGene* find_connection(NodeId from, NodeId to) const {
    for (const auto& c : connections)
      if (c.from == from && c.to == to) return &c;
    return nullptr;
  }

  [[nodiscard]] Innovation max_innovation() const {
    return connections.empty() ? -1 : connections.back().innovation;
  }

  void sort_genes() {
    std::sort(nodes.begin(), nodes.end(), [](const NodeGene& a, const NodeGene& b) { return a.id < b.id; });
    std::sort(connections.begin(), connections.end(),
              [](const ConnectionGene& a, const ConnectionGene& b) { return a.innovation < b.innovation; });
  }
};

// Historical marking shared by all genomes of a generation. The structural
// registries are cleared at every generation turnover; the counters never
// go backwards.
class InnovationTracker {
 public:
  InnovationTracker() = default;
  InnovationTracker(Innovation next_innovation, NodeId next_node_id)
      : next_innovation_(next_innovation), next_node_id_(next_node_id) {}

  // Innovation number for a (from, to) connection, allocating on first use
  // within the current generation.
  Innovation connection(NodeId from, NodeId to) {
    auto [it, inserted] = registry_.try_emplace({from, to}, next_innovation_);
    if (inserted) ++next_innovation_;
    return it->second;
  }

  struct Split {
    NodeId node;
    Innovation in;
    Innovation out;
  };

  // Node id and the two connection innovations produced when the connection
  // with the given innovation is split. Identical splits in one generation
  // share markers.
  Split split(Innovation innovation, NodeId from, NodeId to) {
    auto it = splits_.find(innovation);
    if (it != splits_.end()) return it->second;
    NodeId node = next_node_id_++;
    Split s{node, connection(from, node), connection(node, to)};
    splits_.emplace(innovation, s);
    return s;
  }

  NodeId fresh_node() { return next_node_id_++; }

  void reset_generation() {
    registry_.clear();
    splits_.clear();
  }

  [[nodiscard]] Innovation next_innovation() const { return next_innovation_; }
  [[nodiscard]] NodeId next_node_id() const { return next_node_id_; }
  [[nodiscard]] std::size_t registered() const { return registry_.size(); }

 private:
  std::map<std::pair<NodeId, NodeId>, Innovation> registry_;
  std::map<Innovation, Split> splits_;
  Innovation next_innovation_ = 0;
  NodeId next_node_id_ = 0;
};

}  // namespace uavneat::neat
