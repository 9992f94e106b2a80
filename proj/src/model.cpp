#include "hegp/model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <fmt/core.h>

#include "hegp/errors.hpp"
#include "hegp/transition.hpp"

namespace hegp {
namespace {

constexpr double kTimeTol = 1e-9;

double clamp_into_window(const Request& r, double t) { return std::clamp(t, r.ws, r.we); }

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

SatelliteConfig SatelliteConfig::reference() {
  SatelliteConfig sat;
  sat.trans_segments = {
      {5.0, 1.0, 0.0, 15.0},
      {10.0, 2.0, 15.0, 40.0},
      {16.0, 2.5, 40.0, 90.0},
      {22.0, 3.0, 90.0, std::nullopt},
  };
  return sat;
}

void SatelliteConfig::validate() const {
  if (!(attitude_limit_deg > 0.0)) throw ConfigError("attitude limit must be positive");
  if (!(nominal_write_rate > 0.0)) throw ConfigError("nominal write rate must be positive");
  if (trans_segments.empty()) throw ConfigError("maneuver table is empty");
  if (trans_segments.front().from_deg != 0.0) throw ConfigError("first maneuver segment must start at 0 deg");
  if (trans_segments.back().to_deg.has_value()) throw ConfigError("last maneuver segment must be open-ended");
  for (std::size_t i = 0; i < trans_segments.size(); ++i) {
    const auto& s = trans_segments[i];
    if (!(s.rate_deg_s > 0.0)) throw ConfigError(fmt::format("maneuver segment {} has non-positive rate", i + 1));
    if (s.offset_s < 0.0) throw ConfigError(fmt::format("maneuver segment {} has negative offset", i + 1));
    if (i + 1 < trans_segments.size()) {
      if (!s.to_deg) throw ConfigError(fmt::format("maneuver segment {} must be closed", i + 1));
      if (trans_segments[i + 1].from_deg < s.from_deg)
        throw ConfigError("maneuver segments must be sorted by start angle");
      if (trans_segments[i + 1].from_deg > *s.to_deg)
        throw ConfigError(fmt::format("gap between maneuver segments {} and {}", i + 1, i + 2));
    }
  }
}

void ScenarioSpec::validate() const {
  satellite.validate();
  if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");
  if (!(mmc > 0.0)) throw ConfigError("memory capacity must be positive");
  if (!(p_cc >= 0.0 && p_cc <= 1.0)) throw ConfigError("p_cc must lie in [0, 1]");
  if (!(alpha_p > 0.0) || !(alpha_cr > 0.0)) throw ConfigError("gamma shape parameters must be positive");
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const auto& r = requests[i];
    if (r.id != static_cast<int>(i)) throw ConfigError(fmt::format("request at index {} has id {}", i, r.id));
    if (!(r.ws < r.we)) throw ConfigError(fmt::format("request {}: ws must precede we", r.id));
    if (!(r.dur > 0.0)) throw ConfigError(fmt::format("request {}: duration must be positive", r.id));
    if (!(r.nominal_profit > 0.0)) throw ConfigError(fmt::format("request {}: profit must be positive", r.id));
    if (r.ws < 0.0 || r.we > horizon) throw ConfigError(fmt::format("request {}: window outside horizon", r.id));
    if (std::abs(r.roll_fixed) > satellite.attitude_limit_deg)
      throw ConfigError(fmt::format("request {}: roll outside attitude limits", r.id));
  }
}

void EnvironmentRealization::validate(const ScenarioSpec& scenario) const {
  const auto n = scenario.size();
  if (actual_profit.size() != n || actual_write_rate.size() != n || visible.size() != n)
    throw ConfigError(fmt::format("environment {} does not match scenario size {}", env_id, n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!(actual_profit[i] > 0.0) || !(actual_write_rate[i] > 0.0))
      throw ConfigError(fmt::format("environment {}: non-positive draw for request {}", env_id, i));
  }
}

bool FeasibilityReport::has(std::string_view tag) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.tag == tag; });
}

std::string FeasibilityReport::summary() const {
  if (feasible) return "feasible";
  std::string out = fmt::format("{} violation(s):", violations.size());
  for (const auto& v : violations) {
    out += fmt::format("\n  [{}] {}", v.tag, v.detail);
  }
  return out;
}

FeasibilityReport validate_schedule(const Schedule& schedule, const ScenarioSpec& scenario,
                                    const EnvironmentRealization& env) {
  for (const auto& e : schedule.entries) {
    if (!scenario.has_request(e.request_id))
      throw MalformedScheduleError(fmt::format("schedule references unknown request {}", e.request_id));
  }
  if (env.visible.size() != scenario.size() || env.actual_profit.size() != scenario.size() ||
      env.actual_write_rate.size() != scenario.size())
    throw MalformedScheduleError("environment does not match scenario");

  FeasibilityReport report;
  auto add = [&](std::string tag, std::vector<int> ids, std::string detail) {
    report.violations.push_back({std::move(tag), std::move(ids), std::move(detail)});
  };

  const auto& sat = scenario.satellite;
  std::unordered_set<int> seen;
  double memory = 0.0;
  double profit = 0.0;

  for (std::size_t k = 0; k < schedule.entries.size(); ++k) {
    const auto& e = schedule.entries[k];
    const auto& r = scenario.requests[static_cast<std::size_t>(e.request_id)];
    const auto idx = static_cast<std::size_t>(e.request_id);

    if (!seen.insert(e.request_id).second)
      add("duplicate", {e.request_id}, fmt::format("request {} observed more than once", e.request_id));
    if (!env.visible[idx])
      add("visibility", {e.request_id}, fmt::format("request {} is not visible in environment {}", e.request_id, env.env_id));
    if (e.os < r.ws - kTimeTol || e.oe > r.we + kTimeTol || !(e.os < e.oe))
      add("window", {e.request_id},
          fmt::format("request {}: [{}, {}] not inside [{}, {}]", e.request_id, e.os, e.oe, r.ws, r.we));
    if (!close_rel(e.oe - e.os, r.dur, kTimeTol))
      add("duration", {e.request_id},
          fmt::format("request {}: imaged {} s, requires {} s", e.request_id, e.oe - e.os, r.dur));

    if (k > 0) {
      const auto& p = schedule.entries[k - 1];
      const auto& pr = scenario.requests[static_cast<std::size_t>(p.request_id)];
      if (!(e.os > p.os))
        add("ordering", {p.request_id, e.request_id},
            fmt::format("request {} starts at {} which is not after {}", e.request_id, e.os, p.os));
      const Attitude from = attitude_at(pr, clamp_into_window(pr, p.oe), sat);
      const Attitude to = attitude_at(r, clamp_into_window(r, e.os), sat);
      const double needed = trans_time(delta_g(from, to), sat);
      if (e.os < p.oe + needed - kTimeTol)
        add("transition", {p.request_id, e.request_id},
            fmt::format("gap {}->{} is {} s, maneuver needs {} s", p.request_id, e.request_id, e.os - p.oe, needed));
    }

    memory += r.dur * env.actual_write_rate[idx];
    profit += env.actual_profit[idx];
  }

  if (memory > scenario.mmc * (1.0 + kTimeTol)) {
    std::vector<int> ids;
    for (const auto& e : schedule.entries) ids.push_back(e.request_id);
    add("memory", std::move(ids), fmt::format("uses {} GB of {} GB", memory, scenario.mmc));
  }
  if (!close_rel(profit, schedule.total_profit, 1e-9) || !close_rel(memory, schedule.memory_used, 1e-9))
    add("accounting", {},
        fmt::format("reported profit/memory {}/{} differ from recomputed {}/{}", schedule.total_profit,
                    schedule.memory_used, profit, memory));

  report.feasible = report.violations.empty();
  return report;
}

}  // namespace hegp
