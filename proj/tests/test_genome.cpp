#include <gtest/gtest.h>

#include <filesystem>

#include "support/properties.hpp"
#include "uavneat/neat/genome.hpp"
#include "uavneat/neat/serialize.hpp"

using namespace uavneat::neat;

TEST(InnovationTracker, SamePairSameNumberWithinGeneration) {
  InnovationTracker t(10, 5);
  auto a = t.connection(0, 3);
  auto b = t.connection(1, 3);
  EXPECT_EQ(t.connection(0, 3), a);
  EXPECT_EQ(a, 10);
  EXPECT_EQ(b, 11);
  EXPECT_EQ(t.next_innovation(), 12);
}

TEST(InnovationTracker, ResetKeepsCountersMonotone) {
  InnovationTracker t;
  auto first = t.connection(0, 1);
  t.reset_generation();
  auto again = t.connection(0, 1);
  EXPECT_GT(again, first);
  EXPECT_EQ(t.registered(), 1u);
}

TEST(InnovationTracker, SplitsShareMarkers) {
  InnovationTracker t(4, 3);
  auto s1 = t.split(2, 0, 2);
  auto s2 = t.split(2, 0, 2);
  EXPECT_EQ(s1.node, s2.node);
  EXPECT_EQ(s1.in, s2.in);
  EXPECT_EQ(s1.out, s2.out);
  EXPECT_EQ(s1.node, 3);
  EXPECT_NE(t.split(3, 1, 2).node, s1.node);
}

TEST(NeatConfig, RejectsInvalidSettings) {
  NeatConfig c;
  EXPECT_NO_THROW(c.validate());
  c.population_size = 1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.node_add_prob = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.compat_threshold = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(GenomeSerialization, RoundTripIsLossless) {
  uavneat::testing::GenomePool pool(7, 4, 3);
  for (int k = 0; k < 500; ++k) {
    Genome g = pool.random_genome();
    mutate(g, pool.tracker(), pool.config(), pool.rng());
    if (k % 2) g.fitness = 0.1 * k + 1.0 / 3.0;
    auto back = genome_from_json(nlohmann::ordered_json::parse(genome_to_json(g).dump()));
    ASSERT_EQ(back, g);
    pool.replace_random(std::move(g));
    pool.tick();
  }
}

TEST(GenomeSerialization, DocumentShape) {
  Genome g;
  g.nodes = {{0, NodeKind::input, 0.0}, {1, NodeKind::output, 0.25}};
  g.connections = {{0, 0, 1, -1.5, true}};
  g.fitness = 2.0;
  auto doc = genome_to_json(g);
  EXPECT_EQ(doc["state_dim"], 1);
  EXPECT_EQ(doc["action_dim"], 1);
  EXPECT_EQ(doc["nodes"][1]["kind"], "output");
  EXPECT_EQ(doc["connections"][0]["innovation"], 0);
  EXPECT_EQ(doc["connections"][0]["enabled"], true);
  EXPECT_DOUBLE_EQ(doc["fitness"].get<double>(), 2.0);
}

TEST(GenomeSerialization, RejectsDanglingConnection) {
  auto doc = nlohmann::ordered_json::parse(R"({"state_dim":1,"action_dim":1,"fitness":null,
    "nodes":[{"id":0,"kind":"input","bias":0},{"id":1,"kind":"output","bias":0}],
    "connections":[{"innovation":0,"from":0,"to":7,"weight":1,"enabled":true}]})");
  EXPECT_THROW(genome_from_json(doc), std::invalid_argument);
}

TEST(GenomeSerialization, FileRoundTrip) {
  Genome g;
  g.nodes = {{0, NodeKind::input, 0.0}, {1, NodeKind::output, 0.1}};
  g.connections = {{0, 0, 1, 0.30000000000000004, false}};
  auto path = std::filesystem::temp_directory_path() / "uavneat_genome_roundtrip.json";
  write_genome(g, path.string());
  EXPECT_EQ(read_genome(path.string()), g);
  std::filesystem::remove(path);
}
