#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "uavneat/io/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "uavneat");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int status = uavneat::io::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("uavneat_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    config = dir / "small.ini";
    std::ofstream(config) << "[neat]\npopulation_size = 8\n[schedule]\ngenerations = 3\nsteps_per_episode = 15\n"
                             "[sweep]\np_min_dbm = 0\np_max_dbm = 10\nstep_dbm = 5\n[run]\nthreads = 1\n";
  }
  void TearDown() override { fs::remove_all(dir); }
  fs::path dir;
  fs::path config;
};

}  // namespace

TEST_F(Cli, TrainEvalSweep) {
  auto t = run({"train", "--config", config.string(), "--out", (dir / "a").string()});
  ASSERT_EQ(t.status, 0) << t.err;
  EXPECT_NE(t.out.find("train: generations=3"), std::string::npos) << t.out;
  EXPECT_EQ(first_line(dir / "a" / "generations.csv"),
            "generation,best_fitness,mean_fitness,species_count,best_mean_sum_se,min_rate_satisfaction");
  EXPECT_EQ(first_line(dir / "a" / "trace.csv"),
            "step,x,y,h,alpha_1,alpha_2,alpha_3,alpha_4,se_1,se_2,se_3,se_4,reward");

  const auto champion = (dir / "a" / "champion.json").string();
  auto e = run({"eval", "--genome", champion, "--config", config.string(), "--out", (dir / "e").string()});
  ASSERT_EQ(e.status, 0) << e.err;
  EXPECT_EQ(slurp(dir / "e" / "trace.csv"), slurp(dir / "a" / "trace.csv"));

  auto s = run({"sweep", "--genome", champion, "--config", config.string(), "--out", (dir / "s").string()});
  ASSERT_EQ(s.status, 0) << s.err;
  EXPECT_EQ(first_line(dir / "s" / "ee_curve.csv"), "pt_dbm,mean_se,ee");
  EXPECT_NE(s.out.find("points=3"), std::string::npos) << s.out;
}

TEST_F(Cli, TrainIsByteIdentical) {
  ASSERT_EQ(run({"train", "--config", config.string(), "--seed", "5", "--out", (dir / "x").string()}).status, 0);
  ASSERT_EQ(run({"train", "--config", config.string(), "--seed", "5", "--out", (dir / "y").string()}).status, 0);
  EXPECT_EQ(slurp(dir / "x" / "generations.csv"), slurp(dir / "y" / "generations.csv"));
  EXPECT_EQ(slurp(dir / "x" / "champion.json"), slurp(dir / "y" / "champion.json"));
}

TEST_F(Cli, Oracle) {
  auto r = run({"oracle", "--spacing", "25", "--heights", "10,50", "--alpha-step", "0.1", "--out", dir.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("oracle: sum_se="), std::string::npos);
  auto doc = nlohmann::json::parse(slurp(dir / "oracle.json"));
  EXPECT_TRUE(doc["feasible"].get<bool>());
  EXPECT_EQ(doc["positions_scanned"].get<int>(), 50);
  EXPECT_EQ(doc["user_se"].size(), 4u);
}

TEST_F(Cli, Ci) {
  auto r = run({"ci", "--config", config.string(), "--runs", "2", "--out", dir.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  std::ifstream in(dir / "ci.csv");
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 4);
  EXPECT_EQ(first_line(dir / "ci.csv"),
            "generation,runs,best_fitness_mean,best_fitness_std,mean_fitness_mean,mean_fitness_std");
}

TEST_F(Cli, Errors) {
  EXPECT_NE(run({}).status, 0);
  EXPECT_NE(run({"fly"}).status, 0);
  EXPECT_NE(run({"eval"}).status, 0);
  EXPECT_NE(run({"ci", "--runs", "1"}).status, 0);
  std::ofstream(dir / "bad.ini") << "[nope]\n";
  auto r = run({"train", "--config", (dir / "bad.ini").string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("error: "), std::string::npos);
  std::ofstream(dir / "bad.json") << "{}";
  EXPECT_EQ(run({"eval", "--genome", (dir / "bad.json").string()}).status, 1);
}
