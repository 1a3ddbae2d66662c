#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "uavneat/env/environment.hpp"
#include "uavneat/sim/episode.hpp"

namespace uavneat::oracle {

struct GridSpec {
  double xy_spacing = 5.0;
  std::vector<double> heights{10.0, 30.0, 50.0};
  double alpha_step = 0.01;
  bool enforce_fairness = false;

  void validate(const env::Scene& scene) const {
    if (!(xy_spacing > 0.0)) throw std::invalid_argument("grid spacing must be > 0");
    if (!(alpha_step > 0.0 && alpha_step <= 0.5)) throw std::invalid_argument("alpha step must lie in (0, 0.5]");
    if (heights.empty()) throw std::invalid_argument("grid needs at least one height");
    for (double h : heights)
      if (h < scene.min_height) throw std::invalid_argument("grid heights must be >= the minimum height");
  }
};

struct GridResult {
  bool feasible = false;
  env::Vec3 position;
  std::vector<double> alpha;  // per user
  std::vector<double> user_se;
  double sum_se = 0.0;
  std::size_t positions_scanned = 0;
  GridSpec grid;
};

// Grid coordinates start + k * step for k = 0, 1, ... up to `stop`. Halving
// `step` yields an exact superset of the points.
inline std::vector<double> grid_axis(double start, double stop, double step) {
  std::vector<double> v;
  for (std::size_t k = 0;; ++k) {
    const double x = start + static_cast<double>(k) * step;
    if (x > stop + 1e-9 * std::max(1.0, std::abs(stop))) break;
    v.push_back(std::min(x, stop));
  }
  return v;
}

struct ClusterChoice {
  bool feasible = false;
  double alpha_strong = 0.0;
  double se_strong = 0.0;
  double se_weak = 0.0;
};

// Best strong-member coefficient for one cluster at fixed SNRs. First
// (smallest) coefficient wins ties.
inline ClusterChoice best_cluster_alpha(double snr_strong, double snr_weak, const std::vector<double>& alphas,
                                        double min_se, bool enforce_fairness) {
  ClusterChoice best;
  double best_value = -std::numeric_limits<double>::infinity();
  for (double a : alphas) {
    const double s = env::rate_se_from_sinr(env::sinr_value(snr_strong, a, 0.0));
    const double w = env::rate_se_from_sinr(env::sinr_value(snr_weak, 1.0 - a, a));
    if (enforce_fairness && (s < min_se || w < min_se)) continue;
    if (s + w > best_value) {
      best_value = s + w;
      best = {true, a, s, w};
    }
  }
  return best;
}

// Static optimum of the sum spectral efficiency over a grid of UAV positions
// and per-cluster power splits. Users are re-paired at every candidate
// position. Each user's rate depends only on its own cluster, so the power
// split is optimised cluster by cluster; this is exactly the joint argmax.
// Scan order is x, then y, then height; the first maximum is kept.
inline GridResult grid_search(const env::Scene& scene, const env::ChannelParams& params,
                              const env::RewardWeights& weights, const GridSpec& grid) {
  scene.validate();
  grid.validate(scene);
  const double half = scene.side / 2.0;
  const auto xs = grid_axis(-half, half, grid.xy_spacing);
  const auto alphas = grid_axis(scene.alpha_floor, 1.0 - scene.alpha_floor, grid.alpha_step);

  GridResult result;
  result.grid = grid;
  result.sum_se = -std::numeric_limits<double>::infinity();
  env::EnvState probe;
  const std::size_t users = scene.user_count();

  for (double x : xs) {
    for (double y : xs) {
      for (double h : grid.heights) {
        ++result.positions_scanned;
        probe.uav = {x, y, h};
        env::update_gains(probe, scene, params);
        const auto clusters = env::pair_users(probe.gains);

        std::vector<double> alpha(users, 0.0);
        std::vector<double> se(users, 0.0);
        double total = 0.0;
        bool feasible = true;
        for (const auto& c : clusters) {
          const double snr_s = env::snr_from_gain(probe.gains[c.first], params);
          if (c.single()) {
            alpha[c.first] = 1.0;
            se[c.first] = env::rate_se_from_sinr(snr_s);
            if (grid.enforce_fairness && se[c.first] < weights.min_se) feasible = false;
            total += se[c.first];
            continue;
          }
          const double snr_w = env::snr_from_gain(probe.gains[c.second], params);
          const auto choice = best_cluster_alpha(snr_s, snr_w, alphas, weights.min_se, grid.enforce_fairness);
          if (!choice.feasible) {
            feasible = false;
            break;
          }
          alpha[c.first] = choice.alpha_strong;
          alpha[c.second] = 1.0 - choice.alpha_strong;
          se[c.first] = choice.se_strong;
          se[c.second] = choice.se_weak;
          total += choice.se_strong + choice.se_weak;
        }
        if (!feasible) continue;
        if (total > result.sum_se) {
          result.feasible = true;
          result.sum_se = total;
          result.position = probe.uav;
          result.alpha = alpha;
          result.user_se = se;
        }
      }
    }
  }
  if (!result.feasible) result.sum_se = 0.0;
  return result;
}

// Uniformly random +/-1 actions; a sanity floor for learned policies.
inline sim::EpisodeMetrics random_policy(const env::Scene& scene, const env::ChannelParams& params,
                                         const env::RewardWeights& weights, int steps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  const std::size_t clusters = scene.cluster_count();
  auto policy = [&](const std::vector<double>&, const env::EnvState&) {
    env::Action a;
    a.dx = coin(rng) ? 1 : -1;
    a.dy = coin(rng) ? 1 : -1;
    a.dh = coin(rng) ? 1 : -1;
    a.dalpha.resize(clusters);
    for (auto& d : a.dalpha) d = coin(rng) ? 1 : -1;
    return a;
  };
  return sim::simulate(policy, scene, params, weights, steps);
}

}  // namespace uavneat::oracle
