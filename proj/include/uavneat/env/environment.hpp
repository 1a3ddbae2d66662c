#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "uavneat/env/channel.hpp"

namespace uavneat::env {

struct Scene {
  double side = 100.0;  // L
  std::vector<Point2> users{{4.0, 15.0}, {-44.0, -49.0}, {-5.0, 21.0}, {47.0, 49.0}};
  double min_height = 10.0;  // h_0
  Vec3 uav_start{0.0, 0.0, 50.0};
  double step_x = 1.0;
  double step_y = 1.0;
  double step_h = 1.0;
  double alpha_step = 0.01;   // power-coefficient change per action
  double alpha_floor = 0.01;  // coefficients stay in [floor, 1 - floor]

  friend bool operator==(const Scene&, const Scene&) = default;

  [[nodiscard]] std::size_t user_count() const { return users.size(); }
  [[nodiscard]] std::size_t cluster_count() const { return (users.size() + 1) / 2; }
  [[nodiscard]] std::size_t state_dim() const { return 4 * users.size() + 1; }
  [[nodiscard]] std::size_t action_dim() const { return 3 + cluster_count(); }

  void validate() const {
    if (!(side > 0.0)) throw std::invalid_argument("scene side length must be > 0");
    if (users.empty()) throw std::invalid_argument("scene needs at least one user");
    const double half = side / 2.0;
    for (const auto& u : users)
      if (std::abs(u.x) > half || std::abs(u.y) > half)
        throw std::invalid_argument("user coordinates must lie in [-L/2, L/2]");
    if (!(min_height > 0.0)) throw std::invalid_argument("minimum height must be > 0");
    if (!(step_x > 0.0 && step_y > 0.0 && step_h > 0.0 && alpha_step > 0.0))
      throw std::invalid_argument("move magnitudes must be > 0");
    if (!(alpha_floor > 0.0 && alpha_floor < 0.5)) throw std::invalid_argument("alpha floor must lie in (0, 0.5)");
    if (std::abs(uav_start.x) > half || std::abs(uav_start.y) > half || uav_start.h < min_height)
      throw std::invalid_argument("UAV start position is outside the flight region");
  }
};

// A NOMA cluster. `first == second` marks a single-user cluster.
struct Cluster {
  std::size_t first = 0;   // stronger member at pairing time
  std::size_t second = 0;  // weaker member at pairing time
  std::size_t strong = 0;  // current SIC decoder

  friend bool operator==(const Cluster&, const Cluster&) = default;

  [[nodiscard]] bool single() const { return first == second; }
  [[nodiscard]] std::size_t weak() const { return strong == first ? second : first; }
  [[nodiscard]] bool contains(std::size_t u) const { return u == first || u == second; }
};

struct EnvState {
  Vec3 uav;
  std::vector<double> alpha;
  std::vector<double> gains;
  std::vector<Cluster> clusters;
  std::vector<std::size_t> cluster_of;  // user -> cluster index
  int step_index = 0;

  friend bool operator==(const EnvState&, const EnvState&) = default;
};

struct Action {
  int dx = -1;
  int dy = -1;
  int dh = -1;
  std::vector<int> dalpha;  // one entry per cluster
  friend bool operator==(const Action&, const Action&) = default;
};

struct RewardWeights {
  double w_rate = 1.0;
  double w_satisfied = 100.0;
  double w_unsatisfied = 1.0;
  double min_se = 0.5;  // R_min / W

  friend bool operator==(const RewardWeights&, const RewardWeights&) = default;

  void validate() const {
    if (w_rate < 0.0 || w_satisfied < 0.0 || w_unsatisfied < 0.0 || min_se < 0.0)
      throw std::invalid_argument("reward weights and minimum SE must be >= 0");
  }
};

inline bool stronger(std::span<const double> gains, std::size_t a, std::size_t b) {
  return gains[a] > gains[b] || (gains[a] == gains[b] && a < b);
}

// Strong-weak pairing: the k-th strongest user is paired with the k-th
// weakest. With an odd count the median user is left alone.
inline std::vector<Cluster> pair_users(std::span<const double> gains) {
  std::vector<std::size_t> order(gains.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return stronger(gains, a, b); });
  std::vector<Cluster> clusters;
  const std::size_t n = order.size();
  for (std::size_t k = 0; k < (n + 1) / 2; ++k) {
    std::size_t s = order[k];
    std::size_t w = order[n - 1 - k];
    clusters.push_back({s, w, s});
  }
  return clusters;
}

inline void update_strong(EnvState& state) {
  for (auto& c : state.clusters) c.strong = stronger(state.gains, c.first, c.second) ? c.first : c.second;
}

inline void update_gains(EnvState& state, const Scene& scene, const ChannelParams& params) {
  state.gains.resize(scene.users.size());
  for (std::size_t i = 0; i < scene.users.size(); ++i)
    state.gains[i] = channel_gain(distance_3d(state.uav, scene.users[i]), params);
}

inline double snr(std::size_t user, const EnvState& state, const ChannelParams& params) {
  return snr_from_gain(state.gains.at(user), params);
}

inline double sinr(std::size_t user, const EnvState& state, const ChannelParams& params) {
  const Cluster& c = state.clusters.at(state.cluster_of.at(user));
  const double s = snr(user, state, params);
  const double beta = (c.single() || c.strong == user) ? 0.0 : state.alpha[c.strong];
  return sinr_value(s, state.alpha[user], beta);
}

inline double rate_se(std::size_t user, const EnvState& state, const ChannelParams& params) {
  return rate_se_from_sinr(sinr(user, state, params));
}

inline std::vector<double> user_se(const EnvState& state, const ChannelParams& params) {
  std::vector<double> se(state.alpha.size());
  for (std::size_t i = 0; i < se.size(); ++i) se[i] = rate_se(i, state, params);
  return se;
}

inline double sum_rate_se(const EnvState& state, const ChannelParams& params) {
  double total = 0.0;
  for (std::size_t i = 0; i < state.alpha.size(); ++i) total += rate_se(i, state, params);
  return total;
}

// Per-step reward in spectral-efficiency units: a total-rate term that only
// pays when every user meets the minimum, a bonus per satisfied user, and
// the rates of unsatisfied users.
inline double reward(std::span<const double> se, const RewardWeights& w) {
  double total = 0.0;
  double unsatisfied_sum = 0.0;
  int satisfied = 0;
  for (double s : se) {
    total += s;
    if (s >= w.min_se)
      ++satisfied;
    else
      unsatisfied_sum += s;
  }
  const bool all = satisfied == static_cast<int>(se.size());
  return (all ? w.w_rate * total : 0.0) + w.w_satisfied * satisfied + w.w_unsatisfied * unsatisfied_sum;
}

inline double reward(const EnvState& state, const ChannelParams& params, const RewardWeights& w) {
  auto se = user_se(state, params);
  return reward(se, w);
}

// Network input: per user [dx/L, dy/L, alpha, log10(gain)/10], then h/L.
inline void build_state(const EnvState& state, const Scene& scene, std::span<double> out) {
  if (out.size() != scene.state_dim()) throw std::invalid_argument("state buffer has the wrong length");
  std::size_t k = 0;
  for (std::size_t i = 0; i < scene.users.size(); ++i) {
    out[k++] = (state.uav.x - scene.users[i].x) / scene.side;
    out[k++] = (state.uav.y - scene.users[i].y) / scene.side;
    out[k++] = state.alpha[i];
    out[k++] = std::log10(state.gains[i]) / 10.0;
  }
  out[k] = state.uav.h / scene.side;
}

inline std::vector<double> build_state(const EnvState& state, const Scene& scene) {
  std::vector<double> out(scene.state_dim());
  build_state(state, scene, out);
  return out;
}

inline int sign_of(double v) { return v > 0.0 ? 1 : -1; }

// Positive -> +1, zero or negative -> -1. Layout: x, y, h, then one entry
// per cluster.
inline Action decode_action(std::span<const double> outputs, std::size_t cluster_count) {
  if (outputs.size() != 3 + cluster_count) throw std::invalid_argument("action vector has the wrong length");
  Action a;
  a.dx = sign_of(outputs[0]);
  a.dy = sign_of(outputs[1]);
  a.dh = sign_of(outputs[2]);
  a.dalpha.resize(cluster_count);
  for (std::size_t c = 0; c < cluster_count; ++c) a.dalpha[c] = sign_of(outputs[3 + c]);
  return a;
}

inline Action decode_action(std::span<const double> outputs) {
  if (outputs.size() < 3) throw std::invalid_argument("action vector has the wrong length");
  return decode_action(outputs, outputs.size() - 3);
}

// Episode start: UAV at its start position, every coefficient at 1/2 (1 for
// a lone user), pairing computed from the initial gains and then frozen.
inline EnvState reset(const Scene& scene, const ChannelParams& params) {
  scene.validate();
  EnvState s;
  s.uav = scene.uav_start;
  update_gains(s, scene, params);
  s.clusters = pair_users(s.gains);
  s.cluster_of.assign(scene.users.size(), 0);
  s.alpha.assign(scene.users.size(), 0.5);
  for (std::size_t c = 0; c < s.clusters.size(); ++c) {
    s.cluster_of[s.clusters[c].first] = c;
    s.cluster_of[s.clusters[c].second] = c;
    if (s.clusters[c].single()) s.alpha[s.clusters[c].first] = 1.0;
  }
  s.step_index = 0;
  return s;
}

// Applies the power-coefficient change to each cluster's current strong
// member (the weak member keeps the complement), moves the UAV with
// clamping to the flight region, then refreshes gains and SIC roles.
inline void step_in_place(EnvState& s, const Action& action, const Scene& scene, const ChannelParams& params) {
  if (action.dalpha.size() != s.clusters.size()) throw std::invalid_argument("action has the wrong cluster count");
  for (std::size_t c = 0; c < s.clusters.size(); ++c) {
    const Cluster& cl = s.clusters[c];
    if (cl.single()) continue;
    const double a = std::clamp(s.alpha[cl.strong] + action.dalpha[c] * scene.alpha_step, scene.alpha_floor,
                                1.0 - scene.alpha_floor);
    s.alpha[cl.strong] = a;
    s.alpha[cl.weak()] = 1.0 - a;
  }
  const double half = scene.side / 2.0;
  s.uav.x = std::clamp(s.uav.x + action.dx * scene.step_x, -half, half);
  s.uav.y = std::clamp(s.uav.y + action.dy * scene.step_y, -half, half);
  s.uav.h = std::max(s.uav.h + action.dh * scene.step_h, scene.min_height);
  update_gains(s, scene, params);
  update_strong(s);
  ++s.step_index;
}

inline EnvState step(EnvState state, const Action& action, const Scene& scene, const ChannelParams& params) {
  step_in_place(state, action, scene, params);
  return state;
}

}  // namespace uavneat::env
