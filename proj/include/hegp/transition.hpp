#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "hegp/model.hpp"

namespace hegp {

struct Attitude {
  double pitch = 0.0;  // deg
  double roll = 0.0;  // deg
  double yaw = 0.0;  // deg

  friend bool operator==(const Attitude&, const Attitude&) = default;
};

class OutOfWindowError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Attitude required to image `request` at time t. Pitch sweeps linearly from
/// +limit at ws to -limit at we; roll is the request's fixed roll; yaw is fixed.
/// Throws OutOfWindowError when t is outside [ws, we].
Attitude attitude_at(const Request& request, double t, const SatelliteConfig& sat);

/// L1 distance over pitch, roll and yaw.
inline double delta_g(const Attitude& a, const Attitude& b) noexcept {
  const auto abs = [](double x) { return x < 0.0 ? -x : x; };
  return abs(a.pitch - b.pitch) + abs(a.roll - b.roll) + abs(a.yaw - b.yaw);
}

/// Piecewise-linear maneuver time for an angle dg. The first segment whose
/// closed interval contains dg wins. Throws std::domain_error for dg < 0.
double trans_time(double dg, const SatelliteConfig& sat);

/// Precomputed upper bounds on maneuver time, global and per request pair.
struct TransitionTables {
  double m_trans = 0.0;
  std::size_t n = 0;
  std::vector<double> mtt;  // row-major n x n, symmetric
  std::vector<int> window_order;  // request ids by (ws, id)
  std::vector<int> window_rank;  // 1-based position in window_order, indexed by id

  [[nodiscard]] double pair(std::size_t i, std::size_t j) const noexcept { return mtt[i * n + j]; }
};

/// Largest maneuver time between any attitude of request a's window and any
/// attitude of request b's window.
double max_pair_transition(const Request& a, const Request& b, const SatelliteConfig& sat);

TransitionTables precompute_tables(const ScenarioSpec& scenario);

}  // namespace hegp
