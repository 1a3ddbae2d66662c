#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "uavneat/neat/genome.hpp"
#include "uavneat/neat/network.hpp"
#include "uavneat/neat/species.hpp"

namespace uavneat::neat {

struct Population {
  std::vector<Genome> genomes;
  std::vector<Species> species;
  InnovationTracker tracker;
  int generation = 0;
  int next_species_id = 0;
  std::size_t state_dim = 0;
  std::size_t action_dim = 0;
};

namespace detail {

inline double standard_normal(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return n(rng);
}

inline bool chance(std::mt19937_64& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return u(rng) < p;
}

template <typename T>
std::size_t pick_index(std::mt19937_64& rng, const std::vector<T>& v) {
  std::uniform_int_distribution<std::size_t> d(0, v.size() - 1);
  return d(rng);
}

// True if `target` is reachable from `start` following every gene.
inline bool reachable(const Genome& g, NodeId start, NodeId target) {
  std::vector<NodeId> stack{start};
  std::vector<NodeId> seen;
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (n == target) return true;
    if (std::find(seen.begin(), seen.end(), n) != seen.end()) continue;
    seen.push_back(n);
    for (const auto& c : g.connections)
      if (c.from == n) stack.push_back(c.to);
  }
  return false;
}

}  // namespace detail

// Creates a population of fully connected input->output genomes with
// standard-normal weights and biases. All genomes share the same innovation
// numbers: connection (input i, output o) carries i * action_dim + o.
inline Population init_population(const NeatConfig& config, std::size_t state_dim, std::size_t action_dim,
                                  std::mt19937_64& rng) {
  config.validate();
  if (state_dim < 1 || action_dim < 1) throw std::invalid_argument("state_dim and action_dim must be >= 1");

  Population pop;
  pop.state_dim = state_dim;
  pop.action_dim = action_dim;
  const auto inputs = static_cast<NodeId>(state_dim);
  const auto outputs = static_cast<NodeId>(action_dim);
  pop.tracker = InnovationTracker(0, inputs + outputs);
  for (NodeId i = 0; i < inputs; ++i)
    for (NodeId o = 0; o < outputs; ++o) pop.tracker.connection(i, inputs + o);

  pop.genomes.reserve(static_cast<std::size_t>(config.population_size));
  for (int k = 0; k < config.population_size; ++k) {
    Genome g;
    for (NodeId i = 0; i < inputs; ++i) g.nodes.push_back({i, NodeKind::input, 0.0});
    for (NodeId o = 0; o < outputs; ++o)
      g.nodes.push_back({inputs + o, NodeKind::output, config.clamp_weight(detail::standard_normal(rng))});
    for (NodeId i = 0; i < inputs; ++i)
      for (NodeId o = 0; o < outputs; ++o)
        g.connections.push_back({pop.tracker.connection(i, inputs + o), i, inputs + o,
                                 config.clamp_weight(detail::standard_normal(rng)), true});
    g.sort_genes();
    pop.genomes.push_back(std::move(g));
  }
  pop.species = speciate(pop.genomes, pop.next_species_id, config, rng);
  return pop;
}

inline Population init_population(const NeatConfig& config, std::size_t state_dim, std::size_t action_dim,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return init_population(config, state_dim, action_dim, rng);
}

// Offspring quota per species. Each member's fitness is divided by its
// species size; quotas are proportional to the summed adjusted fitness and
// rounded by largest remainder (ties to the earlier species) so they add up
// to `total` exactly. Fitnesses are indexed by population position and must
// already be shifted to be non-negative. Species with `eligible[k] == false`
// receive nothing unless no species is eligible.
inline std::vector<int> allot_offspring(const std::vector<Species>& species, std::span<const double> fitnesses,
                                        int total, const std::vector<bool>& eligible = {}) {
  if (total < 0) throw std::invalid_argument("offspring total must be >= 0");
  std::vector<int> quota(species.size(), 0);
  if (species.empty() || total == 0) return quota;

  std::vector<bool> allowed = eligible.empty() ? std::vector<bool>(species.size(), true) : eligible;
  if (allowed.size() != species.size()) throw std::invalid_argument("eligibility mask size mismatch");
  if (std::none_of(allowed.begin(), allowed.end(), [](bool b) { return b; }))
    allowed.assign(species.size(), true);

  std::vector<double> share(species.size(), 0.0);
  for (std::size_t k = 0; k < species.size(); ++k) {
    if (!allowed[k] || species[k].members.empty()) continue;
    double sum = 0.0;
    for (std::size_t m : species[k].members) {
      double f = fitnesses[m];
      if (!(f >= 0.0)) throw std::invalid_argument("fitnesses must be shifted to be non-negative");
      sum += f;
    }
    share[k] = sum / static_cast<double>(species[k].members.size());
  }
  double grand = std::accumulate(share.begin(), share.end(), 0.0);
  if (!(grand > 0.0)) {
    for (std::size_t k = 0; k < species.size(); ++k) share[k] = allowed[k] ? 1.0 : 0.0;
    grand = std::accumulate(share.begin(), share.end(), 0.0);
  }

  std::vector<double> remainder(species.size(), 0.0);
  int assigned = 0;
  for (std::size_t k = 0; k < species.size(); ++k) {
    double exact = static_cast<double>(total) * share[k] / grand;
    double whole = std::floor(exact);
    quota[k] = static_cast<int>(whole);
    remainder[k] = allowed[k] ? exact - whole : -1.0;
    assigned += quota[k];
  }
  // Guard against floor() rounding pushing the sum above total.
  while (assigned > total) {
    auto it = std::max_element(quota.begin(), quota.end());
    --*it;
    --assigned;
  }
  std::vector<std::size_t> order(species.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t r = 0; assigned < total; r = (r + 1) % order.size()) {
    if (!allowed[order[r]]) continue;
    ++quota[order[r]];
    ++assigned;
  }
  return quota;
}

inline std::vector<int> allot_offspring(const std::vector<Species>& species, std::span<const double> fitnesses,
                                        const NeatConfig& config) {
  return allot_offspring(species, fitnesses, config.population_size - config.elite_count);
}

// Fitness-proportionate draw among `members` (population indices) using the
// shifted, non-negative fitnesses. Uniform if the members' mass is zero.
inline std::size_t select_parent(std::span<const std::size_t> members, std::span<const double> fitnesses,
                                 std::mt19937_64& rng) {
  if (members.empty()) throw std::invalid_argument("cannot select from an empty species");
  double total = 0.0;
  for (std::size_t m : members) total += std::max(fitnesses[m], 0.0);
  if (!(total > 0.0)) {
    std::uniform_int_distribution<std::size_t> d(0, members.size() - 1);
    return members[d(rng)];
  }
  std::uniform_real_distribution<double> u(0.0, total);
  double r = u(rng);
  double acc = 0.0;
  for (std::size_t m : members) {
    acc += std::max(fitnesses[m], 0.0);
    if (r < acc) return m;
  }
  // r landed on the upper edge: last member with positive mass.
  for (auto it = members.rbegin(); it != members.rend(); ++it)
    if (fitnesses[*it] > 0.0) return *it;
  return members.back();
}

// Child takes each matching gene from either parent with probability 1/2 and
// every disjoint or excess gene from `fitter`.
inline Genome crossover(const Genome& fitter, const Genome& weaker, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  Genome child;
  child.connections.reserve(fitter.connections.size());

  std::size_t j = 0;
  for (const auto& gene : fitter.connections) {
    while (j < weaker.connections.size() && weaker.connections[j].innovation < gene.innovation) ++j;
    if (j < weaker.connections.size() && weaker.connections[j].innovation == gene.innovation) {
      const auto& other = weaker.connections[j];
      child.connections.push_back(coin(rng) ? gene : ConnectionGene{gene.innovation, gene.from, gene.to,
                                                                     other.weight, other.enabled});
    } else {
      child.connections.push_back(gene);
    }
  }

  std::vector<NodeId> referenced;
  for (const auto& c : child.connections) {
    referenced.push_back(c.from);
    referenced.push_back(c.to);
  }
  std::sort(referenced.begin(), referenced.end());
  referenced.erase(std::unique(referenced.begin(), referenced.end()), referenced.end());

  for (const auto& node : fitter.nodes) {
    bool keep = node.kind != NodeKind::hidden ||
                std::binary_search(referenced.begin(), referenced.end(), node.id);
    if (!keep) continue;
    NodeGene n = node;
    if (const NodeGene* other = weaker.find_node(node.id); other && coin(rng)) n.bias = other->bias;
    child.nodes.push_back(n);
  }
  child.sort_genes();
  return child;
}

// Applies weight/bias perturbation and the four structural mutations, each
// with its configured probability. Mutations that cannot apply are skipped.
inline void mutate(Genome& genome, InnovationTracker& tracker, const NeatConfig& config, std::mt19937_64& rng) {
  std::normal_distribution<double> perturb(0.0, config.perturb_stddev);

  for (auto& c : genome.connections)
    if (detail::chance(rng, config.weight_mutation_rate)) c.weight = config.clamp_weight(c.weight + perturb(rng));
  for (auto& n : genome.nodes)
    if (n.kind != NodeKind::input && detail::chance(rng, config.bias_mutation_rate))
      n.bias = config.clamp_weight(n.bias + perturb(rng));

  if (detail::chance(rng, config.node_add_prob)) {
    std::vector<std::size_t> enabled;
    for (std::size_t i = 0; i < genome.connections.size(); ++i)
      if (genome.connections[i].enabled) enabled.push_back(i);
    if (!enabled.empty()) {
      ConnectionGene& old = genome.connections[enabled[detail::pick_index(rng, enabled)]];
      old.enabled = false;
      const ConnectionGene split_gene = old;
      auto s = tracker.split(split_gene.innovation, split_gene.from, split_gene.to);
      auto has_innovation = [&](Innovation inn) {
        return std::any_of(genome.connections.begin(), genome.connections.end(),
                           [inn](const ConnectionGene& c) { return c.innovation == inn; });
      };
      if (genome.has_node(s.node) || has_innovation(s.in) || has_innovation(s.out)) {
        NodeId node = tracker.fresh_node();
        s = {node, tracker.connection(split_gene.from, node), tracker.connection(node, split_gene.to)};
      }
      genome.nodes.push_back({s.node, NodeKind::hidden, 0.0});
      // Incoming link keeps the old weight, outgoing link gets weight 1.
      genome.connections.push_back({s.in, split_gene.from, s.node, split_gene.weight, true});
      genome.connections.push_back({s.out, s.node, split_gene.to, config.clamp_weight(1.0), true});
      genome.sort_genes();
    }
  }

  if (detail::chance(rng, config.conn_add_prob)) {
    std::vector<NodeId> sources;
    std::vector<NodeId> targets;
    for (const auto& n : genome.nodes) {
      if (n.kind != NodeKind::output) sources.push_back(n.id);
      if (n.kind != NodeKind::input) targets.push_back(n.id);
    }
    if (!sources.empty() && !targets.empty()) {
      for (int attempt = 0; attempt < config.add_connection_attempts; ++attempt) {
        NodeId from = sources[detail::pick_index(rng, sources)];
        NodeId to = targets[detail::pick_index(rng, targets)];
        if (from == to || genome.find_connection(from, to) || detail::reachable(genome, to, from)) continue;
        Innovation inn = tracker.connection(from, to);
        if (std::any_of(genome.connections.begin(), genome.connections.end(),
                        [inn](const ConnectionGene& c) { return c.innovation == inn; }))
          continue;
        genome.connections.push_back({inn, from, to, config.clamp_weight(detail::standard_normal(rng)), true});
        genome.sort_genes();
        break;
      }
    }
  }

  if (detail::chance(rng, config.conn_delete_prob) && !genome.connections.empty()) {
    genome.connections.erase(genome.connections.begin() +
                             static_cast<std::ptrdiff_t>(detail::pick_index(rng, genome.connections)));
  }

  if (detail::chance(rng, config.node_delete_prob)) {
    std::vector<NodeId> hidden;
    for (const auto& n : genome.nodes)
      if (n.kind == NodeKind::hidden) hidden.push_back(n.id);
    if (!hidden.empty()) {
      NodeId victim = hidden[detail::pick_index(rng, hidden)];
      std::erase_if(genome.nodes, [victim](const NodeGene& n) { return n.id == victim; });
      std::erase_if(genome.connections,
                    [victim](const ConnectionGene& c) { return c.from == victim || c.to == victim; });
    }
  }
  genome.fitness.reset();
}

// Fitness order used to pick the "fitter" crossover parent: higher fitness,
// then fewer connections, then argument order.
inline bool fitter_than(const Genome& a, double fa, const Genome& b, double fb) {
  if (fa != fb) return fa > fb;
  return a.connections.size() <= b.connections.size();
}

// Produces the successor population: elites copied unchanged, the remaining
// slots filled per species quota by crossover (or cloning) and mutation, and
// the result re-speciated against representatives drawn from the current
// species.
inline Population next_generation(const Population& pop, std::span<const double> fitnesses,
                                  const NeatConfig& config, std::mt19937_64& rng) {
  config.validate();
  const std::size_t n = pop.genomes.size();
  if (fitnesses.size() != n) throw std::invalid_argument("one fitness per genome is required");
  if (n == 0) throw std::invalid_argument("population is empty");
  for (double f : fitnesses)
    if (!std::isfinite(f)) throw std::invalid_argument("fitness must be finite");

  Population next;
  next.tracker = pop.tracker;
  next.tracker.reset_generation();
  next.generation = pop.generation + 1;
  next.next_species_id = pop.next_species_id;
  next.state_dim = pop.state_dim;
  next.action_dim = pop.action_dim;

  std::vector<std::size_t> ranked(n);
  std::iota(ranked.begin(), ranked.end(), std::size_t{0});
  std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
    if (fitnesses[a] != fitnesses[b]) return fitnesses[a] > fitnesses[b];
    return pop.genomes[a].connections.size() < pop.genomes[b].connections.size();
  });

  const auto target = static_cast<std::size_t>(config.population_size);
  const auto elites = std::min(static_cast<std::size_t>(config.elite_count), n);
  next.genomes.reserve(target);
  for (std::size_t e = 0; e < elites; ++e) {
    Genome g = pop.genomes[ranked[e]];
    g.fitness = fitnesses[ranked[e]];
    next.genomes.push_back(std::move(g));
  }

  const double floor_fitness = *std::min_element(fitnesses.begin(), fitnesses.end());
  std::vector<double> shifted(n);
  for (std::size_t i = 0; i < n; ++i) shifted[i] = fitnesses[i] - floor_fitness;

  std::vector<Species> species = pop.species;
  std::vector<bool> eligible(species.size(), true);
  for (std::size_t k = 0; k < species.size(); ++k) {
    auto& s = species[k];
    double best = -std::numeric_limits<double>::infinity();
    bool holds_champion = false;
    for (std::size_t m : s.members) {
      best = std::max(best, fitnesses[m]);
      holds_champion = holds_champion || m == ranked.front();
    }
    if (best > s.best_fitness) {
      s.best_fitness = best;
      s.last_improved = pop.generation;
    }
    if (config.stagnation_generations > 0 && !holds_champion &&
        pop.generation - s.last_improved >= config.stagnation_generations)
      eligible[k] = false;
  }

  const auto quotas = allot_offspring(species, shifted, static_cast<int>(target - elites), eligible);
  for (std::size_t k = 0; k < species.size(); ++k) {
    const auto& members = species[k].members;
    for (int q = 0; q < quotas[k]; ++q) {
      Genome child;
      if (detail::chance(rng, config.crossover_prob)) {
        std::size_t a = select_parent(members, shifted, rng);
        std::size_t b = select_parent(members, shifted, rng);
        if (fitter_than(pop.genomes[a], fitnesses[a], pop.genomes[b], fitnesses[b]))
          child = crossover(pop.genomes[a], pop.genomes[b], rng);
        else
          child = crossover(pop.genomes[b], pop.genomes[a], rng);
      } else {
        child = pop.genomes[select_parent(members, shifted, rng)];
      }
      mutate(child, next.tracker, config, rng);
      next.genomes.push_back(std::move(child));
    }
  }

  next.species = speciate(next.genomes, species, pop.genomes, next.next_species_id, config, rng);
  return next;
}

}  // namespace uavneat::neat
