#pragma once

#include <cmath>
#include <stdexcept>

namespace uavneat::env {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double h = 0.0;
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

// Link-level parameters in SI units (watts, hertz, linear gains).
struct ChannelParams {
  double intercept = std::pow(10.0, -6.4);  // C
  double exponent = 2.0;                    // a
  double noise_w = dbm_to_watts(-84.0);     // sigma^2
  double mimo_gain = 64.0;                  // G = N_uav * N_ue
  double tx_power_w = dbm_to_watts(20.0);   // P_T, per cluster
  double bandwidth_hz = 2e9;                // W

  friend bool operator==(const ChannelParams&, const ChannelParams&) = default;

  void validate() const {
    if (!(intercept > 0.0 && noise_w > 0.0 && mimo_gain > 0.0 && tx_power_w > 0.0 && bandwidth_hz > 0.0))
      throw std::invalid_argument("channel parameters must be strictly positive");
    if (!(exponent >= 1.0)) throw std::invalid_argument("path-loss exponent must be >= 1");
  }
};

// Euclidean UAV-user distance; users sit at ground level.
inline double distance_3d(const Vec3& uav, const Point2& user) {
  const double dx = uav.x - user.x;
  const double dy = uav.y - user.y;
  return std::sqrt(dx * dx + dy * dy + uav.h * uav.h);
}

// mmWave line-of-sight power-law gain C * d^-a.
inline double channel_gain(double d, const ChannelParams& params) {
  if (!(d > 0.0)) throw std::invalid_argument("channel_gain requires a positive distance");
  if (params.exponent == 2.0) return params.intercept / (d * d);
  return params.intercept * std::pow(d, -params.exponent);
}

inline double snr_from_gain(double gain, const ChannelParams& params) {
  return params.tx_power_w * params.mimo_gain * gain / params.noise_w;
}

// SINR of a user with power share `alpha` that still sees the partner's
// share `beta` as interference (beta = 0 after SIC).
inline double sinr_value(double snr, double alpha, double beta) { return snr * alpha / (snr * beta + 1.0); }

inline double rate_se_from_sinr(double sinr) { return std::log2(1.0 + sinr); }

// Smallest power share that lets an interference-free user reach
// `min_se` bit/s/Hz.
inline double min_alpha_feasible(double min_se, double snr) {
  if (!(snr > 0.0)) throw std::invalid_argument("min_alpha_feasible requires snr > 0");
  return (std::exp2(min_se) - 1.0) / snr;
}

}  // namespace uavneat::env
