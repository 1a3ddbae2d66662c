#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "uavneat/neat/genome.hpp"

namespace uavneat::neat {

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

// Topological order of the nodes under the given edge set (Kahn's algorithm,
// smallest ready id first). Returns an empty vector if the graph has a cycle.
template <typename EdgePredicate>
std::vector<NodeId> topological_order(const Genome& genome, EdgePredicate use_edge) {
  std::unordered_map<NodeId, std::size_t> index;
  index.reserve(genome.nodes.size());
  for (std::size_t i = 0; i < genome.nodes.size(); ++i) index.emplace(genome.nodes[i].id, i);

  std::vector<std::vector<std::size_t>> out(genome.nodes.size());
  std::vector<std::size_t> indegree(genome.nodes.size(), 0);
  for (const auto& c : genome.connections) {
    if (!use_edge(c)) continue;
    auto f = index.find(c.from);
    auto t = index.find(c.to);
    if (f == index.end() || t == index.end())
      throw std::invalid_argument("connection references a missing node");
    out[f->second].push_back(t->second);
    ++indegree[t->second];
  }

  // Nodes are sorted by id, so a min-heap over indices yields id order.
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < indegree.size(); ++i)
    if (indegree[i] == 0) ready.push_back(i);
  std::make_heap(ready.begin(), ready.end(), std::greater<>{});

  std::vector<NodeId> order;
  order.reserve(genome.nodes.size());
  while (!ready.empty()) {
    std::pop_heap(ready.begin(), ready.end(), std::greater<>{});
    std::size_t i = ready.back();
    ready.pop_back();
    order.push_back(genome.nodes[i].id);
    for (std::size_t j : out[i]) {
      if (--indegree[j] == 0) {
        ready.push_back(j);
        std::push_heap(ready.begin(), ready.end(), std::greater<>{});
      }
    }
  }
  if (order.size() != genome.nodes.size()) return {};
  return order;
}

inline bool is_acyclic(const Genome& genome) {
  return genome.nodes.empty() ||
         !topological_order(genome, [](const ConnectionGene& c) { return c.enabled; }).empty();
}

// Acyclicity over every gene, enabled or not. Mutation keeps this stronger
// property so that any choice of enabled flags stays feed-forward.
inline bool is_structurally_acyclic(const Genome& genome) {
  return genome.nodes.empty() ||
         !topological_order(genome, [](const ConnectionGene&) { return true; }).empty();
}

// A genome compiled into a flat evaluation plan. Build once per episode and
// call `activate` per time step.
class FeedForwardNetwork {
 public:
  explicit FeedForwardNetwork(const Genome& genome) {
    auto order = topological_order(genome, [](const ConnectionGene& c) { return c.enabled; });
    if (order.empty() && !genome.nodes.empty())
      throw std::invalid_argument("genome contains a cycle");

    std::unordered_map<NodeId, std::size_t> slot;
    slot.reserve(genome.nodes.size());
    for (std::size_t i = 0; i < genome.nodes.size(); ++i) slot.emplace(genome.nodes[i].id, i);

    kinds_.reserve(genome.nodes.size());
    biases_.reserve(genome.nodes.size());
    for (const auto& n : genome.nodes) {
      kinds_.push_back(n.kind);
      biases_.push_back(n.kind == NodeKind::input ? 0.0 : n.bias);
      if (n.kind == NodeKind::input) inputs_.push_back(slot.at(n.id));
      if (n.kind == NodeKind::output) outputs_.push_back(slot.at(n.id));
    }

    std::vector<std::vector<Edge>> incoming(genome.nodes.size());
    for (const auto& c : genome.connections)
      if (c.enabled) incoming[slot.at(c.to)].push_back({slot.at(c.from), c.weight});

    for (NodeId id : order) {
      std::size_t s = slot.at(id);
      if (kinds_[s] == NodeKind::input) continue;
      steps_.push_back({s, edges_.size(), incoming[s].size()});
      edges_.insert(edges_.end(), incoming[s].begin(), incoming[s].end());
    }
    values_.assign(genome.nodes.size(), 0.0);
  }

  [[nodiscard]] std::size_t input_count() const { return inputs_.size(); }
  [[nodiscard]] std::size_t output_count() const { return outputs_.size(); }

  // Writes output-node values (in output id order) into `result`.
  void activate(std::span<const double> inputs, std::span<double> result) {
    if (inputs.size() != inputs_.size())
      throw std::invalid_argument("input length does not match the genome's input count");
    if (result.size() != outputs_.size())
      throw std::invalid_argument("output buffer length does not match the genome's output count");
    for (std::size_t i = 0; i < inputs_.size(); ++i) values_[inputs_[i]] = inputs[i];
    for (const auto& step : steps_) {
      double sum = biases_[step.node];
      for (std::size_t e = step.first; e < step.first + step.count; ++e)
        sum += edges_[e].weight * values_[edges_[e].from];
      values_[step.node] = kinds_[step.node] == NodeKind::hidden ? relu(sum) : sum;
    }
    for (std::size_t i = 0; i < outputs_.size(); ++i) result[i] = values_[outputs_[i]];
  }

  std::vector<double> activate(std::span<const double> inputs) {
    std::vector<double> result(outputs_.size());
    activate(inputs, result);
    return result;
  }

 private:
  struct Edge {
    std::size_t from;
    double weight;
  };
  struct Step {
    std::size_t node;
    std::size_t first;
    std::size_t count;
  };

  std::vector<NodeKind> kinds_;
  std::vector<double> biases_;
  std::vector<std::size_t> inputs_;
  std::vector<std::size_t> outputs_;
  std::vector<Edge> edges_;
  std::vector<Step> steps_;
  std::vector<double> values_;
};

// Hidden nodes use relu, outputs are linear so the action decoder sees
// signed values.
inline std::vector<double> activate(const Genome& genome, std::span<const double> inputs) {
  FeedForwardNetwork net(genome);
  return net.activate(inputs);
}

}  // namespace uavneat::neat
