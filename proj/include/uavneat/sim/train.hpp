#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>
#include <vector>

#include "uavneat/config.hpp"
#include "uavneat/neat/reproduction.hpp"
#include "uavneat/sim/episode.hpp"

namespace uavneat::sim {

struct GenerationRecord {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  int species_count = 0;
  double best_mean_sum_se = 0.0;
  double min_rate_satisfaction = 0.0;

  friend bool operator==(const GenerationRecord&, const GenerationRecord&) = default;
};

struct TrainResult {
  neat::Genome champion;
  EpisodeMetrics champion_metrics;
  std::vector<GenerationRecord> records;
};

// Evaluates every genome of a generation. Evaluation is a pure function of
// the genome, so results are identical for any thread count.
inline std::vector<EpisodeMetrics> evaluate_population(const std::vector<neat::Genome>& genomes,
                                                       const RunConfig& config) {
  std::vector<EpisodeMetrics> results(genomes.size());
  unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads) : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(std::max<std::size_t>(genomes.size(), 1)));

  auto eval = [&](std::size_t i) {
    results[i] = run_episode(genomes[i], config.scene, config.channel, config.reward,
                             config.schedule.steps_per_episode);
  };
  if (workers == 1) {
    for (std::size_t i = 0; i < genomes.size(); ++i) eval(i);
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < genomes.size(); i = next++) {
        try {
          eval(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

using GenerationCallback = std::function<void(const GenerationRecord&)>;

// Evolves a population for `schedule.generations` generations. Each
// generation is evaluated, logged, and turned over; the champion is the best
// genome seen in any generation (earliest wins ties).
inline TrainResult train(const RunConfig& config, std::uint64_t seed, const GenerationCallback& on_generation = {}) {
  std::mt19937_64 rng(seed);
  auto pop = neat::init_population(config.neat, config.scene.state_dim(), config.scene.action_dim(), rng);

  TrainResult result;
  result.records.reserve(static_cast<std::size_t>(config.schedule.generations));
  bool have_champion = false;

  for (int gen = 0; gen < config.schedule.generations; ++gen) {
    const auto metrics = evaluate_population(pop.genomes, config);
    std::vector<double> fitness(metrics.size());
    for (std::size_t i = 0; i < metrics.size(); ++i) {
      fitness[i] = metrics[i].mean_reward;
      pop.genomes[i].fitness = fitness[i];
    }
    const auto best = static_cast<std::size_t>(std::max_element(fitness.begin(), fitness.end()) - fitness.begin());

    GenerationRecord rec;
    rec.generation = gen;
    rec.best_fitness = fitness[best];
    rec.mean_fitness = std::accumulate(fitness.begin(), fitness.end(), 0.0) / static_cast<double>(fitness.size());
    rec.species_count = static_cast<int>(pop.species.size());
    rec.best_mean_sum_se = metrics[best].mean_sum_se;
    rec.min_rate_satisfaction = metrics[best].satisfaction;
    result.records.push_back(rec);
    if (on_generation) on_generation(rec);

    if (!have_champion || fitness[best] > *result.champion.fitness) {
      result.champion = pop.genomes[best];
      result.champion_metrics = metrics[best];
      have_champion = true;
    }
    if (gen + 1 < config.schedule.generations) pop = neat::next_generation(pop, fitness, config.neat, rng);
  }
  return result;
}

inline TrainResult train(const RunConfig& config, const GenerationCallback& on_generation = {}) {
  return train(config, config.master_seed, on_generation);
}

// First generation whose best fitness reaches `fraction` of the final
// generation's best fitness; -1 for an empty log.
inline int convergence_generation(const std::vector<GenerationRecord>& records, double fraction = 0.96) {
  if (records.empty()) return -1;
  const double target = fraction * records.back().best_fitness;
  for (const auto& r : records)
    if (r.best_fitness >= target) return r.generation;
  return records.back().generation;
}

struct CiRow {
  int generation = 0;
  double best_mean = 0.0;
  double best_std = 0.0;
  double mean_mean = 0.0;
  double mean_std = 0.0;
};

namespace detail {
inline std::pair<double, double> mean_std(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}
}  // namespace detail

// Per-generation mean and sample standard deviation of the best and mean
// fitness across independent training runs.
inline std::vector<CiRow> multi_seed(const RunConfig& config, const std::vector<std::uint64_t>& seeds,
                                     std::vector<TrainResult>* runs = nullptr) {
  if (seeds.size() < 2) throw std::invalid_argument("confidence intervals need at least two runs");
  std::vector<std::vector<GenerationRecord>> logs;
  for (auto seed : seeds) {
    auto r = train(config, seed);
    logs.push_back(r.records);
    if (runs) runs->push_back(std::move(r));
  }
  std::vector<CiRow> rows;
  for (std::size_t g = 0; g < logs.front().size(); ++g) {
    std::vector<double> best;
    std::vector<double> mean;
    for (const auto& log : logs) {
      best.push_back(log[g].best_fitness);
      mean.push_back(log[g].mean_fitness);
    }
    auto [bm, bs] = detail::mean_std(best);
    auto [mm, ms] = detail::mean_std(mean);
    rows.push_back({static_cast<int>(g), bm, bs, mm, ms});
  }
  return rows;
}

// Seeds for `n` runs: the configured list if it is long enough, otherwise
// consecutive values from the master seed.
inline std::vector<std::uint64_t> run_seeds(const RunConfig& config, std::size_t n) {
  if (config.schedule.seeds.size() >= n)
    return {config.schedule.seeds.begin(), config.schedule.seeds.begin() + static_cast<std::ptrdiff_t>(n)};
  std::vector<std::uint64_t> seeds(n);
  for (std::size_t k = 0; k < n; ++k) seeds[k] = config.master_seed + k;
  return seeds;
}

}  // namespace uavneat::sim
