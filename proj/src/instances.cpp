#include "hegp/instances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <fmt/core.h>

#include "hegp/rng.hpp"

namespace hegp {
namespace {

constexpr int kMaxRejections = 10000;

/// Normal(mean, sd) conditioned on [lo, hi] by rejection; falls back to
/// clamping if the interval carries negligible mass.
double truncated_normal(RngStream& rng, double mean, double sd, double lo, double hi) {
  boost::random::normal_distribution<double> normal(mean, sd);
  for (int i = 0; i < kMaxRejections; ++i) {
    const double x = normal(rng);
    if (x >= lo && x <= hi) return x;
  }
  return std::clamp(mean, lo, hi);
}

double uniform(RngStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform01(); }

}  // namespace

std::string GenerationParams::scenario_name() const {
  return fmt::format("{}_{}_{}_{:.2f}", n_requests, static_cast<long>(std::floor(horizon / 100.0)),
                     static_cast<long>(std::floor(mmc / 100.0)), p_cc);
}

void GenerationParams::validate() const {
  if (n_requests < 1) throw GenerationError("n_requests must be at least 1");
  if (!(horizon > 0.0)) throw GenerationError("horizon must be positive");
  if (!(mmc > 0.0)) throw GenerationError("mmc must be positive");
  if (!(p_cc >= 0.0 && p_cc <= 1.0)) throw GenerationError("p_cc must lie in [0, 1]");
  if (!(alpha_p > 0.0) || !(alpha_cr > 0.0)) throw GenerationError("gamma shapes must be positive");
  const auto [wmin, wmax] = vtw_width_range;
  if (!(wmin > 0.0) || wmax < wmin) throw GenerationError("vtw_width_range must satisfy 0 < min <= max");
  const auto& s = sampling;
  if (!(s.dur_min > 0.0) || s.dur_max < s.dur_min || !(s.dur_sd > 0.0))
    throw GenerationError("duration model must satisfy 0 < dur_min <= dur_max and sd > 0");
  if (!(s.profit_min > 0.0) || !(s.profit_sd > 0.0)) throw GenerationError("profit model must be positive");
  // A window centred at 0 or at the horizon keeps only half its width after clipping.
  if (std::min(wmin, horizon) / 2.0 < s.dur_min)
    throw GenerationError(fmt::format("vtw width {} cannot hold the minimum duration {} after clipping", wmin,
                                      s.dur_min));
  try {
    satellite.validate();
  } catch (const ConfigError& e) {
    throw GenerationError(e.what());
  }
}

ScenarioSpec generate_scenario(const GenerationParams& params) {
  params.validate();
  const RngStream root(params.seed);
  const auto& s = params.sampling;

  ScenarioSpec scenario;
  scenario.name = params.scenario_name();
  scenario.satellite = params.satellite;
  scenario.horizon = params.horizon;
  scenario.mmc = params.mmc;
  scenario.p_cc = params.p_cc;
  scenario.alpha_p = params.alpha_p;
  scenario.alpha_cr = params.alpha_cr;
  scenario.requests.reserve(static_cast<std::size_t>(params.n_requests));

  const double limit = params.satellite.attitude_limit_deg;
  for (int i = 0; i < params.n_requests; ++i) {
    RngStream rng = root.derive("request", static_cast<std::uint64_t>(i));
    Request r;
    r.id = i;
    const double center = uniform(rng, 0.0, params.horizon);
    const double width = uniform(rng, params.vtw_width_range.first, params.vtw_width_range.second);
    r.ws = std::max(0.0, center - width / 2.0);
    r.we = std::min(params.horizon, center + width / 2.0);
    r.roll_fixed = uniform(rng, -limit, limit);
    r.dur = truncated_normal(rng, s.dur_mean, s.dur_sd, s.dur_min, std::min(r.we - r.ws, s.dur_max));
    r.nominal_profit = truncated_normal(rng, s.profit_per_second * r.dur, s.profit_sd, s.profit_min,
                                        std::numeric_limits<double>::infinity());
    scenario.requests.push_back(r);
  }
  scenario.validate();
  return scenario;
}

EnvironmentRealization realize_environment(const ScenarioSpec& scenario, std::uint64_t env_seed, int env_id) {
  const RngStream root(env_seed);
  const double rate_mean = scenario.satellite.nominal_write_rate;
  EnvironmentRealization env;
  env.env_id = env_id;
  env.seed = env_seed;
  const auto n = scenario.size();
  env.actual_profit.resize(n);
  env.actual_write_rate.resize(n);
  env.visible.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream rng = root.derive("request", i);
    const double profit_mean = scenario.requests[i].nominal_profit;
    // Boost parameterizes by (shape, scale); scale = mean / shape pins the mean.
    boost::random::gamma_distribution<double> profit(scenario.alpha_p, profit_mean / scenario.alpha_p);
    boost::random::gamma_distribution<double> rate(scenario.alpha_cr, rate_mean / scenario.alpha_cr);
    env.actual_profit[i] = profit(rng);
    env.actual_write_rate[i] = rate(rng);
    env.visible[i] = !(rng.uniform01() < scenario.p_cc);
    // Gamma draws are positive in exact arithmetic; guard against underflow.
    env.actual_profit[i] = std::max(env.actual_profit[i], std::numeric_limits<double>::min());
    env.actual_write_rate[i] = std::max(env.actual_write_rate[i], std::numeric_limits<double>::min());
  }
  return env;
}

std::uint64_t realization_seed(std::uint64_t root_seed, std::string_view split, int index) {
  return RngStream(root_seed).derive(split, static_cast<std::uint64_t>(index)).key();
}

InstanceSet build_instance_set(const GenerationParams& params, int n_train, int n_test) {
  if (n_train < 1 || n_test < 1) throw GenerationError("instance sets need at least one train and one test env");
  InstanceSet set;
  set.params = params;
  set.scenario = generate_scenario(params);
  set.train.reserve(static_cast<std::size_t>(n_train));
  set.test.reserve(static_cast<std::size_t>(n_test));
  for (int j = 0; j < n_train; ++j)
    set.train.push_back(realize_environment(set.scenario, realization_seed(params.seed, "train", j), j));
  for (int j = 0; j < n_test; ++j)
    set.test.push_back(realize_environment(set.scenario, realization_seed(params.seed, "test", j), n_train + j));
  return set;
}

}  // namespace hegp
