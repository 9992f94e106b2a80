#include "hegp/baselines.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <fmt/core.h>

#include "hegp/errors.hpp"
#include "hegp/transition.hpp"

namespace hegp {
namespace {

constexpr std::array<std::string_view, 6> kNames{"LAH1", "LAH2", "LAH3", "MDH1", "MDH2", "MDH3"};

bool needs_lookahead(BaselineKind k) { return k == BaselineKind::LAH2 || k == BaselineKind::LAH3; }

double maneuver_to(const DecisionContext& ctx, const Candidate& c) {
  const ScenarioSpec& sc = *ctx.scenario;
  const Request& r = sc.requests[static_cast<std::size_t>(c.request_id)];
  return trans_time(delta_g(ctx.att_now, attitude_at(r, c.os, sc.satellite)), sc.satellite);
}

std::size_t mdh1(const DecisionContext& ctx) {
  std::vector<double> v(ctx.candidates.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto& c = ctx.candidates[k];
    const Request& r = ctx.scenario->requests[static_cast<std::size_t>(c.request_id)];
    v[k] = r.nominal_profit / (r.dur + maneuver_to(ctx, c));
  }
  return argmax_lowest_id(ctx.candidates, v);
}

std::size_t mdh2(const DecisionContext& ctx) {
  std::vector<double> v(ctx.candidates.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto& c = ctx.candidates[k];
    v[k] = -std::max(maneuver_to(ctx, c), c.os - ctx.t_now);
  }
  return argmax_lowest_id(ctx.candidates, v);
}

}  // namespace

void BaselineSpec::validate() const {
  if (needs_lookahead(kind)) {
    if (!lookahead || *lookahead < kMinLookahead || *lookahead > kMaxLookahead)
      throw ConfigError(fmt::format("{} needs a lookahead in [{}, {}]", baseline_name(kind), kMinLookahead,
                                    kMaxLookahead));
  } else if (lookahead) {
    throw ConfigError(fmt::format("{} takes no lookahead", baseline_name(kind)));
  }
}

std::string_view baseline_name(BaselineKind kind) { return kNames[static_cast<std::size_t>(kind)]; }

std::optional<BaselineKind> baseline_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<BaselineKind>(i);
  }
  return std::nullopt;
}

std::size_t lookahead_select(LookaheadCriterion criterion, int k, const DecisionContext& ctx) {
  const auto& cands = ctx.candidates;
  if (cands.empty()) throw std::invalid_argument("baseline selection needs a non-empty candidate pool");
  if (k < 1) throw std::invalid_argument("lookahead must be at least 1");
  std::vector<std::size_t> order(cands.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cands[a].os != cands[b].os ? cands[a].os < cands[b].os : cands[a].request_id < cands[b].request_id;
  });
  order.resize(std::min(order.size(), static_cast<std::size_t>(k)));
  if (criterion == LookaheadCriterion::First) return order.front();

  std::size_t best = order.front();
  double best_v = 0.0;
  for (std::size_t j = 0; j < order.size(); ++j) {
    const auto id = static_cast<std::size_t>(cands[order[j]].request_id);
    double v = ctx.env->actual_profit[id];
    if (criterion == LookaheadCriterion::ProfitRate) v /= ctx.scenario->requests[id].dur;
    if (j == 0 || v > best_v || (v == best_v && cands[order[j]].request_id < cands[best].request_id)) {
      best = order[j];
      best_v = v;
    }
  }
  return best;
}

std::size_t baseline_select(const BaselineSpec& spec, const DecisionContext& ctx) {
  if (ctx.candidates.empty()) throw std::invalid_argument("baseline selection needs a non-empty candidate pool");
  switch (spec.kind) {
    case BaselineKind::LAH1:
      return lookahead_select(LookaheadCriterion::First, 1, ctx);
    case BaselineKind::LAH2:
      return lookahead_select(LookaheadCriterion::Profit, spec.lookahead.value_or(kMinLookahead), ctx);
    case BaselineKind::LAH3:
      return lookahead_select(LookaheadCriterion::ProfitRate, spec.lookahead.value_or(kMinLookahead), ctx);
    case BaselineKind::MDH1:
      return mdh1(ctx);
    case BaselineKind::MDH2:
      return mdh2(ctx);
    case BaselineKind::MDH3:
      return ctx.mmc_now < ctx.scenario->mmc / 2.0 ? mdh1(ctx) : mdh2(ctx);
  }
  return 0;
}

BaselinePolicy::BaselinePolicy(BaselineSpec spec) : spec_(spec) { spec_.validate(); }

std::size_t BaselinePolicy::select(const DecisionContext& ctx) const { return baseline_select(spec_, ctx); }

double run_baseline(const BaselineSpec& spec, const ScenarioSpec& scenario,
                    std::span<const EnvironmentRealization> envs, const TransitionTables& tables,
                    const SchedulerConfig& cfg) {
  return fitness(BaselinePolicy(spec), scenario, envs, Mode::Exact, tables, cfg);
}

LookaheadSweep sweep_lookahead(BaselineKind kind, const ScenarioSpec& scenario,
                               std::span<const EnvironmentRealization> envs, const TransitionTables& tables,
                               const SchedulerConfig& cfg) {
  if (!needs_lookahead(kind)) throw ConfigError(fmt::format("{} has no lookahead to sweep", baseline_name(kind)));
  LookaheadSweep out;
  for (int k = kMinLookahead; k <= kMaxLookahead; ++k) {
    const double f = run_baseline({kind, k}, scenario, envs, tables, cfg);
    if (k == kMinLookahead || f > out.best_fitness) out = {k, f};
  }
  return out;
}

}  // namespace hegp
