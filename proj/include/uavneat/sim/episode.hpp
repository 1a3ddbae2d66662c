#pragma once

#include <random>
#include <stdexcept>
#include <vector>

#include "uavneat/env/environment.hpp"
#include "uavneat/neat/network.hpp"

namespace uavneat::sim {

struct TraceRow {
  int step = 0;
  env::Vec3 uav;
  std::vector<double> alpha;
  std::vector<double> se;
  double reward = 0.0;
};

using EpisodeTrace = std::vector<TraceRow>;

struct EpisodeMetrics {
  double mean_reward = 0.0;
  double mean_sum_se = 0.0;
  std::vector<double> mean_user_se;
  double satisfaction = 0.0;  // fraction of (user, step) pairs with se >= min_se
  double all_satisfied = 0.0;  // fraction of steps where every user has se >= min_se
  env::Vec3 final_position;
};

// Runs one episode of `steps` time steps driven by `policy`, which maps the
// network input vector to an action. Rewards and rates are accumulated as
// the episode goes; rows are appended to `trace` when it is non-null.
template <typename Policy>
EpisodeMetrics simulate(Policy&& policy, const env::Scene& scene, const env::ChannelParams& params,
                        const env::RewardWeights& weights, int steps, EpisodeTrace* trace = nullptr) {
  if (steps < 1) throw std::invalid_argument("an episode needs at least one step");
  env::EnvState state = env::reset(scene, params);
  const std::size_t users = scene.user_count();
  std::vector<double> input(scene.state_dim());
  std::vector<double> se(users);

  EpisodeMetrics m;
  m.mean_user_se.assign(users, 0.0);
  double reward_sum = 0.0;
  double sum_se = 0.0;
  long satisfied = 0;
  long all_ok_steps = 0;
  if (trace) trace->reserve(trace->size() + static_cast<std::size_t>(steps));

  for (int t = 0; t < steps; ++t) {
    env::build_state(state, scene, input);
    const env::Action action = policy(input, state);
    env::step_in_place(state, action, scene, params);
    bool all_ok = true;
    for (std::size_t i = 0; i < users; ++i) {
      se[i] = env::rate_se(i, state, params);
      m.mean_user_se[i] += se[i];
      sum_se += se[i];
      if (se[i] >= weights.min_se)
        ++satisfied;
      else
        all_ok = false;
    }
    if (all_ok) ++all_ok_steps;
    const double r = env::reward(se, weights);
    reward_sum += r;
    if (trace) trace->push_back({state.step_index, state.uav, state.alpha, se, r});
  }

  const double n = static_cast<double>(steps);
  m.mean_reward = reward_sum / n;
  m.mean_sum_se = sum_se / n;
  for (double& v : m.mean_user_se) v /= n;
  m.satisfaction = static_cast<double>(satisfied) / (n * static_cast<double>(users));
  m.all_satisfied = static_cast<double>(all_ok_steps) / n;
  m.final_position = state.uav;
  return m;
}

// Network-driven episode. The genome's fitness is the returned mean reward.
inline EpisodeMetrics run_episode(const neat::Genome& genome, const env::Scene& scene,
                                  const env::ChannelParams& params, const env::RewardWeights& weights, int steps,
                                  EpisodeTrace* trace = nullptr) {
  if (genome.input_count() != scene.state_dim() || genome.output_count() != scene.action_dim())
    throw std::invalid_argument("genome dimensions do not match the scene");
  neat::FeedForwardNetwork net(genome);
  std::vector<double> out(net.output_count());
  const std::size_t clusters = scene.cluster_count();
  auto policy = [&](const std::vector<double>& input, const env::EnvState&) {
    net.activate(input, out);
    return env::decode_action(out, clusters);
  };
  return simulate(policy, scene, params, weights, steps, trace);
}

inline EpisodeMetrics evaluate_champion(const neat::Genome& genome, const env::Scene& scene,
                                        const env::ChannelParams& params, const env::RewardWeights& weights,
                                        int steps) {
  return run_episode(genome, scene, params, weights, steps);
}

}  // namespace uavneat::sim
