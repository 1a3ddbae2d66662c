#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavneat/env/channel.hpp"
#include "uavneat/env/environment.hpp"
#include "uavneat/neat/genome.hpp"

namespace uavneat {

// Channel settings in the units they are written in: powers in dBm,
// antenna counts per side.
struct ChannelInput {
  double intercept = std::pow(10.0, -6.4);
  double exponent = 2.0;
  double noise_dbm = -84.0;
  double tx_power_dbm = 20.0;
  int antennas_uav = 8;
  int antennas_ue = 8;
  double bandwidth_hz = 2e9;

  friend bool operator==(const ChannelInput&, const ChannelInput&) = default;

  [[nodiscard]] env::ChannelParams to_params() const {
    if (antennas_uav < 1 || antennas_ue < 1) throw std::invalid_argument("antenna counts must be >= 1");
    env::ChannelParams p;
    p.intercept = intercept;
    p.exponent = exponent;
    p.noise_w = env::dbm_to_watts(noise_dbm);
    p.tx_power_w = env::dbm_to_watts(tx_power_dbm);
    p.mimo_gain = static_cast<double>(antennas_uav) * static_cast<double>(antennas_ue);
    p.bandwidth_hz = bandwidth_hz;
    p.validate();
    return p;
  }
};

struct Schedule {
  int generations = 1000;
  int steps_per_episode = 300;
  std::vector<std::uint64_t> seeds;

  friend bool operator==(const Schedule&, const Schedule&) = default;

  void validate() const {
    if (generations < 1) throw std::invalid_argument("generations must be >= 1");
    if (steps_per_episode < 1) throw std::invalid_argument("steps_per_episode must be >= 1");
  }
};

struct SweepSpec {
  double p_min_dbm = -20.0;
  double p_max_dbm = 80.0;
  double step_dbm = 0.1;
  double p_static_dbm = 40.0;

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;

  void validate() const {
    if (!(p_min_dbm < p_max_dbm)) throw std::invalid_argument("sweep requires p_min_dbm < p_max_dbm");
    if (!(step_dbm > 0.0)) throw std::invalid_argument("sweep step must be > 0");
  }
};

struct RunConfig {
  env::Scene scene;
  ChannelInput channel_input;
  env::ChannelParams channel = channel_input.to_params();
  neat::NeatConfig neat;
  env::RewardWeights reward;
  Schedule schedule;
  SweepSpec sweep;
  std::string output_dir = "run";
  std::uint64_t master_seed = 1;
  int threads = 0;  // 0 = hardware concurrency

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  // Recomputes the SI channel parameters and checks every section.
  void finalize() {
    channel = channel_input.to_params();
    scene.validate();
    neat.validate();
    reward.validate();
    schedule.validate();
    sweep.validate();
    if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  }
};

}  // namespace uavneat
