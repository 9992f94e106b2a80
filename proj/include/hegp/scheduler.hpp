#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hegp/model.hpp"
#include "hegp/policy.hpp"
#include "hegp/transition.hpp"

namespace hegp {

enum class Mode { Exact, Approximate };

struct SchedulerConfig {
  double pre = 0.1;  // OW search resolution (s)
};

/// Earliest observation start for `req` on the grid ws + k * pre, given the
/// satellite is free at t with attitude att_now. Binary search over the grid
/// index for the first start s with s + dur <= we and
/// s >= t + trans_time(delta_g(att_now, attitude_at(req, s))).
std::optional<double> earliest_ow(const Request& req, double t, const Attitude& att_now, double pre,
                                  const SatelliteConfig& sat);

/// Mutable state of one OSA run.
struct SchedulerState {
  const ScenarioSpec* scenario = nullptr;
  const EnvironmentRealization* env = nullptr;
  double t_now = 0.0;
  Attitude att_now;
  double mmc_now = 0.0;
  std::optional<int> prev;  // last scheduled request
  std::vector<int> pool;  // unobserved requests, sorted by (ws, id)
  std::vector<double> cached_os;  // last computed OW start per request id
  Schedule sol;

  /// Initial state: t = 0, zero attitude, full memory, visible requests only.
  static SchedulerState initial(const ScenarioSpec& scenario, const EnvironmentRealization& env);
  /// Same state, reusing the window ordering precomputed in tables.
  static SchedulerState initial(const ScenarioSpec& scenario, const EnvironmentRealization& env,
                                const TransitionTables& tables);
};

struct FilterResult {
  std::vector<Candidate> survivors;  // in pool order
};

struct FilterStats {
  std::size_t filter_calls = 0;
  std::size_t binary_searches = 0;
  std::size_t pruned = 0;  // OW reused from cache
};

FilterResult filter_exact(const SchedulerState& state, const TransitionTables& tables,
                          const SchedulerConfig& cfg = {}, FilterStats* stats = nullptr);

FilterResult filter_approx(const SchedulerState& state, const TransitionTables& tables,
                           const SchedulerConfig& cfg = {}, FilterStats* stats = nullptr);

struct OsaResult {
  Schedule schedule;
  bool truncated = false;  // stopped because the chosen request overflowed memory
  FilterStats stats;
};

OsaResult run_osa(const DecisionPolicy& policy, const ScenarioSpec& scenario, const EnvironmentRealization& env,
                  Mode mode, const TransitionTables& tables, const SchedulerConfig& cfg = {});

/// Mean total profit over envs. Throws std::invalid_argument if envs is empty.
double fitness(const DecisionPolicy& policy, const ScenarioSpec& scenario,
               std::span<const EnvironmentRealization> envs, Mode mode, const TransitionTables& tables,
               const SchedulerConfig& cfg = {});

}  // namespace hegp
