#include "hegp/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hegp {
namespace {

/// Smallest grid start ws + k * pre that is >= v.
double snap_up(double ws, double v, double pre) {
  if (v <= ws) return ws;
  auto k = static_cast<long>(std::ceil((v - ws) / pre));
  while (ws + static_cast<double>(k) * pre < v) ++k;
  return ws + static_cast<double>(k) * pre;
}

}  // namespace

std::optional<double> earliest_ow(const Request& req, double t, const Attitude& att_now, double pre,
                                  const SatelliteConfig& sat) {
  if (!(pre > 0.0)) throw std::invalid_argument("pre must be positive");
  if (req.we - req.ws < req.dur) return std::nullopt;

  // Last grid index whose start still leaves room for the full duration.
  auto last = static_cast<long>(std::floor((req.we - req.dur - req.ws) / pre));
  while (last >= 0 && req.ws + static_cast<double>(last) * pre + req.dur > req.we) --last;
  if (last < 0) return std::nullopt;

  const auto feasible = [&](double s) {
    return s + req.dur <= req.we && s >= t + trans_time(delta_g(att_now, attitude_at(req, s, sat)), sat);
  };

  long lp = 0;
  long rp = last;
  std::optional<double> best;
  while (lp <= rp) {
    const long mid = lp + (rp - lp) / 2;
    const double s = req.ws + static_cast<double>(mid) * pre;
    if (feasible(s)) {
      best = s;
      rp = mid - 1;
    } else {
      lp = mid + 1;
    }
  }
  return best;
}

SchedulerState SchedulerState::initial(const ScenarioSpec& scenario, const EnvironmentRealization& env) {
  SchedulerState s;
  s.scenario = &scenario;
  s.env = &env;
  s.mmc_now = scenario.mmc;
  s.cached_os.resize(scenario.size());
  for (const auto& r : scenario.requests) {
    s.cached_os[static_cast<std::size_t>(r.id)] = r.ws;
    if (env.visible[static_cast<std::size_t>(r.id)]) s.pool.push_back(r.id);
  }
  std::stable_sort(s.pool.begin(), s.pool.end(), [&](int a, int b) {
    const double wa = scenario.requests[static_cast<std::size_t>(a)].ws;
    const double wb = scenario.requests[static_cast<std::size_t>(b)].ws;
    return wa != wb ? wa < wb : a < b;
  });
  return s;
}

SchedulerState SchedulerState::initial(const ScenarioSpec& scenario, const EnvironmentRealization& env,
                                       const TransitionTables& tables) {
  SchedulerState s;
  s.scenario = &scenario;
  s.env = &env;
  s.mmc_now = scenario.mmc;
  s.cached_os.resize(scenario.size());
  for (const auto& r : scenario.requests) s.cached_os[static_cast<std::size_t>(r.id)] = r.ws;
  s.pool.reserve(scenario.size());
  for (const int id : tables.window_order) {
    if (env.visible[static_cast<std::size_t>(id)]) s.pool.push_back(id);
  }
  return s;
}

FilterResult filter_exact(const SchedulerState& state, const TransitionTables& tables, const SchedulerConfig& cfg,
                          FilterStats* stats) {
  const ScenarioSpec& sc = *state.scenario;
  const double rate = sc.satellite.nominal_write_rate;
  FilterResult out;
  out.survivors.reserve(state.pool.size());
  if (stats) ++stats->filter_calls;
  for (const int id : state.pool) {
    const Request& r = sc.requests[static_cast<std::size_t>(id)];
    if (r.we < state.t_now + r.dur) continue;
    if (r.dur * rate > state.mmc_now) continue;
    if (r.ws >= state.t_now + tables.m_trans) {
      const double os = std::max(r.ws, state.cached_os[static_cast<std::size_t>(id)]);
      if (stats) ++stats->pruned;
      if (os + r.dur <= r.we) out.survivors.push_back({id, os});
      continue;
    }
    if (stats) ++stats->binary_searches;
    if (const auto os = earliest_ow(r, state.t_now, state.att_now, cfg.pre, sc.satellite))
      out.survivors.push_back({id, *os});
  }
  return out;
}

FilterResult filter_approx(const SchedulerState& state, const TransitionTables& tables, const SchedulerConfig& cfg,
                           FilterStats* stats) {
  const ScenarioSpec& sc = *state.scenario;
  FilterResult out;
  out.survivors.reserve(state.pool.size());
  if (stats) ++stats->filter_calls;
  for (const int id : state.pool) {
    const auto i = static_cast<std::size_t>(id);
    const Request& r = sc.requests[i];
    if (r.we < state.t_now + r.dur) continue;
    double os = 0.0;
    if (r.ws >= state.t_now + tables.m_trans) {
      os = std::max(r.ws, state.cached_os[i]);
      if (stats) ++stats->pruned;
    } else {
      const double bound = state.prev ? tables.pair(static_cast<std::size_t>(*state.prev), i) : 0.0;
      os = snap_up(r.ws, state.t_now + bound, cfg.pre);
    }
    if (os + r.dur <= r.we) out.survivors.push_back({id, os});
  }
  return out;
}

OsaResult run_osa(const DecisionPolicy& policy, const ScenarioSpec& scenario, const EnvironmentRealization& env,
                  Mode mode, const TransitionTables& tables, const SchedulerConfig& cfg) {
  OsaResult result;
  SchedulerState state = SchedulerState::initial(scenario, env, tables);
  const std::vector<int>& rank = tables.window_rank;

  while (!state.pool.empty()) {
    FilterResult fr = mode == Mode::Exact ? filter_exact(state, tables, cfg, &result.stats)
                                          : filter_approx(state, tables, cfg, &result.stats);
    state.pool.clear();
    for (const auto& c : fr.survivors) {
      state.pool.push_back(c.request_id);
      state.cached_os[static_cast<std::size_t>(c.request_id)] = c.os;
    }
    if (fr.survivors.empty()) break;

    DecisionContext ctx{&scenario, &env, state.t_now, state.att_now, state.mmc_now, fr.survivors, rank};
    const std::size_t pick = policy.select(ctx);
    const Candidate chosen = fr.survivors.at(pick);
    const auto u = static_cast<std::size_t>(chosen.request_id);
    const Request& r = scenario.requests[u];

    const double used = r.dur * env.actual_write_rate[u];
    state.mmc_now -= used;
    if (state.mmc_now < 0.0) {
      result.truncated = true;
      break;
    }
    const double oe = chosen.os + r.dur;
    state.sol.entries.push_back({chosen.request_id, chosen.os, oe});
    state.sol.total_profit += env.actual_profit[u];
    state.sol.memory_used += used;
    state.t_now = oe;
    state.att_now = attitude_at(r, oe, scenario.satellite);
    state.prev = chosen.request_id;
    state.pool.erase(state.pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  result.schedule = std::move(state.sol);
  return result;
}

double fitness(const DecisionPolicy& policy, const ScenarioSpec& scenario,
               std::span<const EnvironmentRealization> envs, Mode mode, const TransitionTables& tables,
               const SchedulerConfig& cfg) {
  if (envs.empty()) throw std::invalid_argument("fitness needs at least one environment");
  double sum = 0.0;
  for (const auto& env : envs) sum += run_osa(policy, scenario, env, mode, tables, cfg).schedule.total_profit;
  return sum / static_cast<double>(envs.size());
}

}  // namespace hegp
