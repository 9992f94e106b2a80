#include "hegp/transition.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include <fmt/core.h>

namespace hegp {

Attitude attitude_at(const Request& request, double t, const SatelliteConfig& sat) {
  if (t < request.ws || t > request.we)
    throw OutOfWindowError(
        fmt::format("t={} outside window [{}, {}] of request {}", t, request.ws, request.we, request.id));
  const double limit = sat.attitude_limit_deg;
  const double frac = (t - request.ws) / (request.we - request.ws);
  return {limit - 2.0 * limit * frac, request.roll_fixed, sat.yaw_fixed_deg};
}

double trans_time(double dg, const SatelliteConfig& sat) {
  if (dg < 0.0) throw std::domain_error(fmt::format("negative maneuver angle {}", dg));
  for (const auto& seg : sat.trans_segments) {
    if (!seg.to_deg || dg <= *seg.to_deg) return seg.offset_s + dg / seg.rate_deg_s;
  }
  // Unreachable for a validated table (last segment is open).
  const auto& last = sat.trans_segments.back();
  return last.offset_s + dg / last.rate_deg_s;
}

double max_pair_transition(const Request& a, const Request& b, const SatelliteConfig& sat) {
  // Each attitude component is linear (or constant) in time, so |difference| is
  // convex over the window product and peaks at a corner.
  const std::array<Attitude, 2> ends_a{attitude_at(a, a.ws, sat), attitude_at(a, a.we, sat)};
  const std::array<Attitude, 2> ends_b{attitude_at(b, b.ws, sat), attitude_at(b, b.we, sat)};
  double worst = 0.0;
  for (const auto& x : ends_a) {
    for (const auto& y : ends_b) worst = std::max(worst, delta_g(x, y));
  }
  // The maneuver function is not monotone at its breakpoints, so bound it by
  // its maximum over [0, worst] rather than its value at worst.
  double bound = trans_time(worst, sat);
  for (const auto& seg : sat.trans_segments) {
    if (seg.to_deg && *seg.to_deg <= worst) bound = std::max(bound, trans_time(*seg.to_deg, sat));
  }
  return bound;
}

TransitionTables precompute_tables(const ScenarioSpec& scenario) {
  const auto& sat = scenario.satellite;
  TransitionTables tables;
  tables.n = scenario.size();
  tables.mtt.assign(tables.n * tables.n, 0.0);
  for (std::size_t i = 0; i < tables.n; ++i) {
    for (std::size_t j = i; j < tables.n; ++j) {
      const double v = max_pair_transition(scenario.requests[i], scenario.requests[j], sat);
      tables.mtt[i * tables.n + j] = v;
      tables.mtt[j * tables.n + i] = v;
    }
  }

  const double limit = sat.attitude_limit_deg;
  const Attitude hi{limit, limit, sat.yaw_fixed_deg};
  const Attitude lo{-limit, -limit, sat.yaw_fixed_deg};
  const double widest = delta_g(hi, lo);
  double m = trans_time(widest, sat);
  for (const auto& seg : sat.trans_segments) {
    if (seg.to_deg && *seg.to_deg <= widest) m = std::max(m, trans_time(*seg.to_deg, sat));
  }
  tables.m_trans = m;

  tables.window_order.resize(tables.n);
  std::iota(tables.window_order.begin(), tables.window_order.end(), 0);
  std::stable_sort(tables.window_order.begin(), tables.window_order.end(), [&](int a, int b) {
    const auto& ra = scenario.requests[static_cast<std::size_t>(a)];
    const auto& rb = scenario.requests[static_cast<std::size_t>(b)];
    return ra.ws != rb.ws ? ra.ws < rb.ws : a < b;
  });
  tables.window_rank.resize(tables.n);
  for (std::size_t k = 0; k < tables.n; ++k)
    tables.window_rank[static_cast<std::size_t>(tables.window_order[k])] = static_cast<int>(k) + 1;
  return tables;
}

}  // namespace hegp
