#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "uavneat/neat/genome.hpp"

namespace uavneat::neat {

// Genome document: {state_dim, action_dim, fitness, nodes: [...], connections: [...]}.
// nlohmann/json prints doubles in shortest round-trip form, so write -> read
// is lossless.
inline nlohmann::ordered_json genome_to_json(const Genome& genome) {
  nlohmann::ordered_json doc;
  doc["state_dim"] = genome.input_count();
  doc["action_dim"] = genome.output_count();
  doc["fitness"] = genome.fitness ? nlohmann::ordered_json(*genome.fitness) : nlohmann::ordered_json(nullptr);
  auto& nodes = doc["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : genome.nodes)
    nodes.push_back({{"id", n.id}, {"kind", to_string(n.kind)}, {"bias", n.bias}});
  auto& conns = doc["connections"] = nlohmann::ordered_json::array();
  for (const auto& c : genome.connections)
    conns.push_back(
        {{"innovation", c.innovation}, {"from", c.from}, {"to", c.to}, {"weight", c.weight}, {"enabled", c.enabled}});
  return doc;
}

inline Genome genome_from_json(const nlohmann::ordered_json& doc) {
  Genome g;
  for (const auto& n : doc.at("nodes"))
    g.nodes.push_back({n.at("id").get<NodeId>(), node_kind_from_string(n.at("kind").get<std::string>()),
                       n.at("bias").get<double>()});
  for (const auto& c : doc.at("connections"))
    g.connections.push_back({c.at("innovation").get<Innovation>(), c.at("from").get<NodeId>(),
                             c.at("to").get<NodeId>(), c.at("weight").get<double>(), c.at("enabled").get<bool>()});
  if (doc.contains("fitness") && !doc.at("fitness").is_null()) g.fitness = doc.at("fitness").get<double>();
  g.sort_genes();

  for (std::size_t i = 1; i < g.nodes.size(); ++i)
    if (g.nodes[i].id == g.nodes[i - 1].id) throw std::invalid_argument("duplicate node id in genome document");
  for (std::size_t i = 1; i < g.connections.size(); ++i)
    if (g.connections[i].innovation == g.connections[i - 1].innovation)
      throw std::invalid_argument("duplicate innovation number in genome document");
  for (const auto& c : g.connections)
    if (!g.has_node(c.from) || !g.has_node(c.to))
      throw std::invalid_argument("connection references a node missing from the genome document");
  if (doc.at("state_dim").get<std::size_t>() != g.input_count() ||
      doc.at("action_dim").get<std::size_t>() != g.output_count())
    throw std::invalid_argument("state_dim/action_dim disagree with the node list");
  return g;
}

inline void write_genome(const Genome& genome, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << genome_to_json(genome).dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

inline Genome read_genome(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open genome file '" + path + "'");
  return genome_from_json(nlohmann::ordered_json::parse(in));
}

}  // namespace uavneat::neat
