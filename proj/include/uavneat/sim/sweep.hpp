#pragma once

#include <cmath>
#include <vector>

#include "uavneat/config.hpp"
#include "uavneat/sim/episode.hpp"

namespace uavneat::sim {

struct SweepPoint {
  double pt_dbm = 0.0;
  double mean_se = 0.0;
  double ee = 0.0;  // bit/s/Hz per watt
};

// Number of points in the inclusive grid p_min, p_min + step, ..., p_max.
inline std::size_t sweep_size(const SweepSpec& spec) {
  spec.validate();
  return static_cast<std::size_t>(std::floor((spec.p_max_dbm - spec.p_min_dbm) / spec.step_dbm + 1e-9)) + 1;
}

inline double energy_efficiency(double mean_se, double pt_dbm, double p_static_dbm) {
  return mean_se / (env::dbm_to_watts(pt_dbm) + env::dbm_to_watts(p_static_dbm));
}

// Replays a fixed policy at every transmit power of the grid and reports the
// mean sum spectral efficiency and the energy efficiency at each point.
inline std::vector<SweepPoint> power_sweep(const neat::Genome& genome, const env::Scene& scene,
                                           env::ChannelParams params, const env::RewardWeights& weights,
                                           const SweepSpec& spec, int steps) {
  const std::size_t n = sweep_size(spec);
  std::vector<SweepPoint> curve;
  curve.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double pt = spec.p_min_dbm + static_cast<double>(k) * spec.step_dbm;
    params.tx_power_w = env::dbm_to_watts(pt);
    const auto m = evaluate_champion(genome, scene, params, weights, steps);
    curve.push_back({pt, m.mean_sum_se, energy_efficiency(m.mean_sum_se, pt, spec.p_static_dbm)});
  }
  return curve;
}

}  // namespace uavneat::sim
