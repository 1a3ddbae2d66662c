#include <gtest/gtest.h>

#include <set>

#include "support/properties.hpp"
#include "uavneat/neat/network.hpp"
#include "uavneat/neat/reproduction.hpp"

using namespace uavneat::neat;

namespace {

NeatConfig frozen() {
  NeatConfig c;
  c.weight_mutation_rate = 0.0;
  c.bias_mutation_rate = 0.0;
  c.node_add_prob = 0.0;
  c.node_delete_prob = 0.0;
  c.conn_add_prob = 0.0;
  c.conn_delete_prob = 0.0;
  return c;
}

Genome with_innovations(std::initializer_list<Innovation> inns, double weight = 1.0) {
  Genome g;
  g.nodes = {{0, NodeKind::input, 0.0}, {1, NodeKind::output, 0.0}};
  for (auto i : inns) g.connections.push_back({i, 0, 1, weight, true});
  return g;
}

Species species_of(std::vector<std::size_t> members) {
  Species s;
  s.members = std::move(members);
  return s;
}

}  // namespace

TEST(InitPopulation, DefaultSceneDimensions) {
  NeatConfig c;
  auto pop = init_population(c, 17, 5, std::uint64_t{42});
  ASSERT_EQ(pop.genomes.size(), 50u);
  std::set<Innovation> shared;
  for (const auto& g : pop.genomes) {
    EXPECT_EQ(g.nodes.size(), 22u);
    EXPECT_EQ(g.connections.size(), 85u);
    EXPECT_EQ(g.enabled_count(), 85u);
    EXPECT_EQ(g.count(NodeKind::hidden), 0u);
    EXPECT_TRUE(uavneat::testing::weights_in_range(g, c));
    for (const auto& n : g.nodes)
      if (n.kind == NodeKind::input) EXPECT_EQ(n.bias, 0.0);
    for (const auto& x : g.connections) shared.insert(x.innovation);
  }
  EXPECT_EQ(shared.size(), 85u);  // identical markers across genomes
  EXPECT_EQ(pop.tracker.next_innovation(), 85);
  EXPECT_EQ(pop.tracker.next_node_id(), 22);
  EXPECT_FALSE(pop.species.empty());
}

TEST(InitPopulation, MinimalCase) {
  NeatConfig c;
  auto pop = init_population(c, 1, 1, std::uint64_t{1});
  const auto& g = pop.genomes.front();
  ASSERT_EQ(g.nodes.size(), 2u);
  ASSERT_EQ(g.connections.size(), 1u);
  EXPECT_EQ(g.connections[0].innovation, 0);
  EXPECT_EQ(g.connections[0].from, 0);
  EXPECT_EQ(g.connections[0].to, 1);
}

TEST(InitPopulation, SameSeedIsBitIdentical) {
  NeatConfig c;
  auto a = init_population(c, 17, 5, std::uint64_t{9});
  auto b = init_population(c, 17, 5, std::uint64_t{9});
  EXPECT_EQ(a.genomes, b.genomes);
  auto d = init_population(c, 17, 5, std::uint64_t{10});
  EXPECT_NE(a.genomes, d.genomes);
}

TEST(InitPopulation, InvalidInputsRejected) {
  NeatConfig c;
  c.population_size = 1;
  EXPECT_THROW(init_population(c, 3, 2, std::uint64_t{1}), std::invalid_argument);
  EXPECT_THROW(init_population(NeatConfig{}, 0, 2, std::uint64_t{1}), std::invalid_argument);
}

TEST(AllotOffspring, SingleSpeciesTakesEverything) {
  NeatConfig c;
  std::vector<Species> s{species_of({0, 1, 2})};
  std::vector<double> f{1.0, 2.0, 3.0};
  EXPECT_EQ(allot_offspring(s, f, c), (std::vector<int>{49}));
}

TEST(AllotOffspring, EqualSharesSplitEvenly) {
  std::vector<Species> s{species_of({0, 1}), species_of({2, 3})};
  std::vector<double> f{1.0, 3.0, 2.0, 2.0};
  EXPECT_EQ(allot_offspring(s, f, 48), (std::vector<int>{24, 24}));
}

TEST(AllotOffspring, SharingNormalisesBySpeciesSize) {
  // A: 2 members at 4 -> adjusted sum 4. B: 4 members at 4 -> adjusted sum 4.
  std::vector<Species> s{species_of({0, 1}), species_of({2, 3, 4, 5})};
  std::vector<double> f(6, 4.0);
  EXPECT_EQ(allot_offspring(s, f, 48), (std::vector<int>{24, 24}));
}

TEST(AllotOffspring, LargestRemainderRounding) {
  // Shares 1:1:1 of 10 -> 3.33 each; the first species gets the extra one.
  std::vector<Species> s{species_of({0}), species_of({1}), species_of({2})};
  std::vector<double> f{1.0, 1.0, 1.0};
  EXPECT_EQ(allot_offspring(s, f, 10), (std::vector<int>{4, 3, 3}));
  // Shares 1:3 of 5 -> 1.25, 3.75.
  std::vector<double> g{1.0, 3.0, 0.0};
  std::vector<Species> two{species_of({0}), species_of({1})};
  EXPECT_EQ(allot_offspring(two, g, 5), (std::vector<int>{1, 4}));
}

TEST(AllotOffspring, ZeroTotalIsUniformAndWeakSpeciesVanish) {
  std::vector<Species> s{species_of({0}), species_of({1})};
  std::vector<double> zero{0.0, 0.0};
  EXPECT_EQ(allot_offspring(s, zero, 7), (std::vector<int>{4, 3}));
  std::vector<double> lopsided{0.0, 5.0};
  EXPECT_EQ(allot_offspring(s, lopsided, 7), (std::vector<int>{0, 7}));
  std::vector<double> negative{-1.0, 5.0};
  EXPECT_THROW(allot_offspring(s, negative, 7), std::invalid_argument);
}

TEST(AllotOffspring, QuotasAlwaysSumToTotal) {
  EXPECT_EQ(uavneat::testing::check_offspring_conservation(5000, 17), "");
}

TEST(SelectParent, SingleMember) {
  std::mt19937_64 rng(1);
  std::vector<std::size_t> members{3};
  std::vector<double> f{0, 0, 0, 5.0};
  for (int i = 0; i < 100; ++i) EXPECT_EQ(select_parent(members, f, rng), 3u);
}

TEST(SelectParent, ProportionateFrequencies) {
  std::mt19937_64 rng(2);
  std::vector<std::size_t> members{0, 1};
  std::vector<double> f{3.0, 1.0};
  const int draws = 200000;
  int first = 0;
  for (int i = 0; i < draws; ++i) first += select_parent(members, f, rng) == 0;
  EXPECT_NEAR(static_cast<double>(first) / draws, 0.75, 0.01);
}

TEST(SelectParent, EqualOrZeroFitnessIsUniform) {
  std::mt19937_64 rng(3);
  std::vector<std::size_t> members{0, 1, 2, 3};
  for (std::vector<double> f : {std::vector<double>{2, 2, 2, 2}, std::vector<double>{0, 0, 0, 0}}) {
    std::vector<int> hits(4, 0);
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) ++hits[select_parent(members, f, rng)];
    for (int h : hits) EXPECT_NEAR(static_cast<double>(h) / draws, 0.25, 0.01);
  }
}

TEST(Crossover, SelfCrossoverPreservesStructure) {
  uavneat::testing::GenomePool pool(4);
  std::mt19937_64 rng(4);
  for (int k = 0; k < 200; ++k) {
    Genome g = pool.random_genome();
    mutate(g, pool.tracker(), pool.config(), pool.rng());
    // Hidden nodes without connections are not inherited.
    Genome expected = crossover(g, g, rng);
    Genome child = crossover(g, g, rng);
    EXPECT_EQ(child.connections, g.connections);
    EXPECT_EQ(child, expected);
    pool.replace_random(std::move(g));
    pool.tick();
  }
}

TEST(Crossover, DisjointAndExcessComeFromFitter) {
  std::mt19937_64 rng(5);
  auto fitter = with_innovations({1, 2, 4, 5});
  auto weaker = with_innovations({1, 2, 3});
  for (int k = 0; k < 50; ++k) {
    auto child = crossover(fitter, weaker, rng);
    std::set<Innovation> inns;
    for (const auto& c : child.connections) inns.insert(c.innovation);
    EXPECT_EQ(inns, (std::set<Innovation>{1, 2, 4, 5}));
  }
}

TEST(Crossover, MatchingGenesInheritedUniformly) {
  std::mt19937_64 rng(6);
  auto a = with_innovations({0}, 1.0);
  auto b = with_innovations({0}, -1.0);
  b.connections[0].enabled = false;
  const int trials = 40000;
  int from_a = 0;
  for (int i = 0; i < trials; ++i) {
    auto child = crossover(a, b, rng);
    const auto& gene = child.connections[0];
    // Weight and enabled flag travel together.
    if (gene.weight == 1.0) {
      EXPECT_TRUE(gene.enabled);
      ++from_a;
    } else {
      EXPECT_FALSE(gene.enabled);
    }
  }
  EXPECT_NEAR(static_cast<double>(from_a) / trials, 0.5, 0.02);
}

TEST(Mutate, AddNodeWeightRule) {
  // 17 inputs, 5 outputs, a single link 0 -> 17 with weight 2.5.
  Genome g;
  for (NodeId i = 0; i < 17; ++i) g.nodes.push_back({i, NodeKind::input, 0.0});
  for (NodeId o = 17; o < 22; ++o) g.nodes.push_back({o, NodeKind::output, 0.0});
  g.connections = {{0, 0, 17, 2.5, true}};
  InnovationTracker tracker(1, 22);
  NeatConfig c = frozen();
  c.node_add_prob = 1.0;
  std::mt19937_64 rng(7);
  mutate(g, tracker, c, rng);

  ASSERT_EQ(g.connections.size(), 3u);
  EXPECT_FALSE(g.connections[0].enabled);
  const auto* in = g.find_connection(0, 22);
  const auto* out = g.find_connection(22, 17);
  ASSERT_TRUE(in && out);
  EXPECT_EQ(in->weight, 2.5);
  EXPECT_EQ(out->weight, 1.0);
  EXPECT_TRUE(in->enabled && out->enabled);
  ASSERT_TRUE(g.find_node(22));
  EXPECT_EQ(g.find_node(22)->kind, NodeKind::hidden);
}

TEST(Mutate, NothingHappensWithZeroProbabilities) {
  NeatConfig c = frozen();
  auto pop = init_population(NeatConfig{}, 5, 3, std::uint64_t{8});
  std::mt19937_64 rng(8);
  for (auto g : pop.genomes) {
    g.fitness.reset();
    Genome before = g;
    mutate(g, pop.tracker, c, rng);
    EXPECT_EQ(g, before);
  }
}

TEST(Mutate, SameStructuralAdditionSharesInnovation) {
  Genome g;
  g.nodes = {{0, NodeKind::input, 0.0}, {1, NodeKind::output, 0.0}, {2, NodeKind::hidden, 0.0}};
  g.connections = {{0, 0, 2, 1.0, true}, {1, 2, 1, 1.0, true}};
  InnovationTracker tracker(2, 3);
  NeatConfig c = frozen();
  c.conn_add_prob = 1.0;
  std::mt19937_64 rng(9);
  Genome a = g;
  Genome b = g;
  mutate(a, tracker, c, rng);
  mutate(b, tracker, c, rng);
  const auto* ca = a.find_connection(0, 1);
  const auto* cb = b.find_connection(0, 1);
  ASSERT_TRUE(ca && cb);
  EXPECT_EQ(ca->innovation, cb->innovation);
  EXPECT_EQ(ca->innovation, 2);
}

TEST(Mutate, AddConnectionRejectsCycles) {
  // 0 -> 2 -> 3 -> 1: the only new links allowed are forward ones.
  Genome g;
  g.nodes = {{0, NodeKind::input, 0.0}, {1, NodeKind::output, 0.0}, {2, NodeKind::hidden, 0.0},
             {3, NodeKind::hidden, 0.0}};
  g.connections = {{0, 0, 2, 1.0, true}, {1, 2, 3, 1.0, true}, {2, 3, 1, 1.0, true}};
  NeatConfig c = frozen();
  c.conn_add_prob = 1.0;
  std::mt19937_64 rng(10);
  for (int k = 0; k < 200; ++k) {
    Genome h = g;
    InnovationTracker tracker(3, 4);
    mutate(h, tracker, c, rng);
    EXPECT_TRUE(is_structurally_acyclic(h));
    EXPECT_EQ(h.find_connection(3, 2), nullptr);
  }
}

TEST(Mutate, DeleteNodeNeverRemovesInputsOrOutputs) {
  auto pop = init_population(NeatConfig{}, 3, 2, std::uint64_t{11});
  NeatConfig c = frozen();
  c.node_delete_prob = 1.0;
  c.conn_delete_prob = 1.0;
  std::mt19937_64 rng(11);
  Genome g = pop.genomes[0];
  for (int k = 0; k < 20; ++k) mutate(g, pop.tracker, c, rng);
  EXPECT_EQ(g.input_count(), 3u);
  EXPECT_EQ(g.output_count(), 2u);
  EXPECT_TRUE(g.connections.empty());
}

TEST(NextGeneration, ElitismAndConservation) {
  NeatConfig c;
  auto pop = init_population(c, 6, 3, std::uint64_t{12});
  std::mt19937_64 rng(12);
  std::vector<double> f(pop.genomes.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = static_cast<double>((i * 37) % 11);
  const auto best = static_cast<std::size_t>(std::max_element(f.begin(), f.end()) - f.begin());

  auto next = next_generation(pop, f, c, rng);
  EXPECT_EQ(next.genomes.size(), 50u);
  EXPECT_EQ(next.generation, 1);
  Genome elite = next.genomes.front();
  EXPECT_EQ(elite.connections, pop.genomes[best].connections);
  EXPECT_EQ(elite.nodes, pop.genomes[best].nodes);
  EXPECT_EQ(elite.fitness, f[best]);
  std::size_t covered = 0;
  for (const auto& s : next.species) covered += s.members.size();
  EXPECT_EQ(covered, 50u);
}

TEST(NextGeneration, Deterministic) {
  NeatConfig c;
  auto pop = init_population(c, 6, 3, std::uint64_t{13});
  std::vector<double> f(pop.genomes.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::sin(static_cast<double>(i));
  std::mt19937_64 r1(99);
  std::mt19937_64 r2(99);
  auto a = next_generation(pop, f, c, r1);
  auto b = next_generation(pop, f, c, r2);
  EXPECT_EQ(a.genomes, b.genomes);
  EXPECT_EQ(a.tracker.next_innovation(), b.tracker.next_innovation());
}

TEST(NextGeneration, SizeConservedOverManyGenerations) {
  NeatConfig c = uavneat::testing::structural_config();
  c.population_size = 20;
  c.elite_count = 2;
  c.compat_threshold = 0.5;
  auto pop = init_population(c, 4, 2, std::uint64_t{14});
  std::mt19937_64 rng(14);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int gen = 0; gen < 60; ++gen) {
    std::vector<double> f(pop.genomes.size());
    for (auto& x : f) x = noise(rng);
    pop = next_generation(pop, f, c, rng);
    ASSERT_EQ(pop.genomes.size(), 20u);
    for (const auto& g : pop.genomes) ASSERT_TRUE(is_acyclic(g));
  }
  EXPECT_EQ(pop.generation, 60);
}

TEST(NextGeneration, StagnantSpeciesGetNoOffspring) {
  NeatConfig c = frozen();
  c.population_size = 4;
  c.elite_count = 1;
  c.stagnation_generations = 1;
  c.crossover_prob = 0.0;
  auto a = with_innovations({0}, 0.0);
  auto b = with_innovations({0}, 50.0);
  Population pop;
  pop.genomes = {a, a, b, b};
  pop.state_dim = 1;
  pop.action_dim = 1;
  std::mt19937_64 rng(15);
  pop.species = speciate(pop.genomes, pop.next_species_id, c, rng);
  ASSERT_EQ(pop.species.size(), 2u);
  std::vector<double> f{1.0, 1.0, 5.0, 5.0};
  // Generation 0 records the best fitness; the first species never improves.
  pop = next_generation(pop, f, c, rng);
  pop.genomes = {a, a, b, b};
  pop.species = speciate(pop.genomes, pop.next_species_id, c, rng);
  pop.species[0].last_improved = -10;
  pop.species[0].best_fitness = 100.0;
  auto next = next_generation(pop, f, c, rng);
  for (const auto& g : next.genomes) EXPECT_EQ(g.connections[0].weight, 50.0);
}

TEST(FitterThan, TieBreaks) {
  auto small = with_innovations({0});
  auto big = with_innovations({0, 1});
  EXPECT_TRUE(fitter_than(small, 1.0, big, 1.0));
  EXPECT_FALSE(fitter_than(big, 1.0, small, 1.0));
  EXPECT_TRUE(fitter_than(big, 2.0, small, 1.0));
  EXPECT_TRUE(fitter_than(small, 1.0, small, 1.0));
}
