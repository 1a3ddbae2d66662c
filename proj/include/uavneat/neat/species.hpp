#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "uavneat/neat/genome.hpp"

namespace uavneat::neat {

// Weighted sum of excess genes, disjoint genes and the mean absolute weight
// difference of matching genes. Gene counts are normalised by the larger
// genome's connection count (floored at 1).
inline double compat_distance(const Genome& a, const Genome& b, const NeatConfig& config) {
  const auto& ca = a.connections;
  const auto& cb = b.connections;
  const Innovation max_a = a.max_innovation();
  const Innovation max_b = b.max_innovation();

  std::size_t excess = 0;
  std::size_t disjoint = 0;
  std::size_t matching = 0;
  double weight_diff = 0.0;

  auto unmatched = [&](Innovation inn, Innovation other_max) {
    if (inn > other_max)
      ++excess;
    else
      ++disjoint;
  };

  std::size_t i = 0;
  std::size_t j = 0;
  while (i < ca.size() || j < cb.size()) {
    if (j == cb.size() || (i < ca.size() && ca[i].innovation < cb[j].innovation)) {
      unmatched(ca[i++].innovation, max_b);
    } else if (i == ca.size() || cb[j].innovation < ca[i].innovation) {
      unmatched(cb[j++].innovation, max_a);
    } else {
      weight_diff += std::abs(ca[i].weight - cb[j].weight);
      ++matching;
      ++i;
      ++j;
    }
  }

  const double n = static_cast<double>(std::max<std::size_t>({ca.size(), cb.size(), 1}));
  const double mean_diff = matching ? weight_diff / static_cast<double>(matching) : 0.0;
  return config.c_excess * static_cast<double>(excess) / n +
         config.c_disjoint * static_cast<double>(disjoint) / n + config.c_weight * mean_diff;
}

struct Species {
  int id = 0;
  Genome representative;
  std::vector<std::size_t> members;  // indices into the population
  // Stagnation bookkeeping; unused when stagnation removal is off.
  double best_fitness = -std::numeric_limits<double>::infinity();
  int last_improved = 0;
};

// Assigns every genome to the first species (in id order) whose
// representative lies closer than the compatibility threshold; otherwise the
// genome founds a new species. Representatives of carried-over species are
// drawn at random from their previous members, which are looked up in
// `previous_population`. Species left empty are dropped.
inline std::vector<Species> speciate(const std::vector<Genome>& population,
                                     const std::vector<Species>& previous_species,
                                     const std::vector<Genome>& previous_population, int& next_species_id,
                                     const NeatConfig& config, std::mt19937_64& rng) {
  std::vector<Species> species;
  species.reserve(previous_species.size());
  for (const auto& prev : previous_species) {
    Species s;
    s.id = prev.id;
    s.best_fitness = prev.best_fitness;
    s.last_improved = prev.last_improved;
    if (prev.members.empty()) {
      s.representative = prev.representative;
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, prev.members.size() - 1);
      s.representative = previous_population.at(prev.members[pick(rng)]);
    }
    s.representative.fitness.reset();
    species.push_back(std::move(s));
  }

  for (std::size_t g = 0; g < population.size(); ++g) {
    bool placed = false;
    for (auto& s : species) {
      if (compat_distance(population[g], s.representative, config) < config.compat_threshold) {
        s.members.push_back(g);
        placed = true;
        break;
      }
    }
    if (!placed) {
      Species s;
      s.id = next_species_id++;
      s.representative = population[g];
      s.representative.fitness.reset();
      s.members.push_back(g);
      species.push_back(std::move(s));
    }
  }

  std::erase_if(species, [](const Species& s) { return s.members.empty(); });
  return species;
}

// First-generation convenience overload: no species carried over.
inline std::vector<Species> speciate(const std::vector<Genome>& population, int& next_species_id,
                                     const NeatConfig& config, std::mt19937_64& rng) {
  return speciate(population, {}, {}, next_species_id, config, rng);
}

}  // namespace uavneat::neat
