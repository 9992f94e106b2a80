#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hegp/instances.hpp"
#include "hegp/scheduler.hpp"
#include "support.hpp"

using namespace hegp;
using doctest::Approx;

namespace {

const SatelliteConfig kSat = SatelliteConfig::reference();

/// Chooses the first candidate in pool order.
class FirstPolicy final : public DecisionPolicy {
 public:
  std::size_t select(const DecisionContext&) const override { return 0; }
};

SchedulerState state_for(const ScenarioSpec& sc, const EnvironmentRealization& env, double t, Attitude att,
                         double mmc_now, std::optional<int> prev) {
  SchedulerState s = SchedulerState::initial(sc, env);
  s.t_now = t;
  s.att_now = att;
  s.mmc_now = mmc_now;
  s.prev = prev;
  return s;
}

}  // namespace

TEST_CASE("window too short for the duration has no observation start") {
  const Request r{0, 100.0, 120.0, 25.0, 50.0, 0.0};
  CHECK_FALSE(earliest_ow(r, 0.0, {}, 0.1, kSat).has_value());
}

TEST_CASE("zero-maneuver request is observable at its window start") {
  const Request r{0, 100.0, 200.0, 20.0, 40.0, 3.0};
  const Attitude at_start = attitude_at(r, r.ws, kSat);
  const auto os = earliest_ow(r, r.ws - trans_time(0.0, kSat), at_start, 0.1, kSat);
  REQUIRE(os.has_value());
  CHECK(*os <= r.ws + 0.1);
}

TEST_CASE("earliest start respects the maneuver and window") {
  const Request r{0, 100.0, 200.0, 20.0, 40.0, 10.0};
  const auto os = earliest_ow(r, 90.0, Attitude{}, 0.1, kSat);
  REQUIRE(os.has_value());
  CHECK(*os + r.dur <= r.we);
  CHECK(*os >= 90.0 + trans_time(delta_g({}, attitude_at(r, *os, kSat)), kSat));
  CHECK_THROWS_AS(earliest_ow(r, 0.0, {}, 0.0, kSat), std::invalid_argument);
}

TEST_CASE("binary search agrees with the linear scan wherever the predicate is monotone") {
  RngStream rng(101);
  int monotone = 0;
  int non_monotone_mismatch = 0;
  for (int k = 0; k < 5000; ++k) {
    const Request r = test::random_request(rng, 0);
    const double t = test::uniform(rng, r.ws - 80.0, r.we);
    const Attitude att = test::random_attitude(rng);
    const auto fast = earliest_ow(r, t, att, 0.1, kSat);
    const auto slow = test::linear_scan_ow(r, t, att, 0.1, kSat);
    const bool same = fast.has_value() == slow.has_value() && (!fast || std::abs(*fast - *slow) <= 0.1 + 1e-9);
    if (test::predicate_is_monotone(r, t, att, 0.1, kSat)) {
      ++monotone;
      CHECK(same);
    } else if (!same) {
      ++non_monotone_mismatch;
      // Whatever the search returns is still a feasible start.
      REQUIRE(fast.has_value());
      CHECK(*fast >= t + trans_time(delta_g(att, attitude_at(r, *fast, kSat)), kSat));
    }
  }
  CHECK(monotone > 4900);
  MESSAGE("mismatches on non-monotone predicates: " << non_monotone_mismatch);
}

TEST_CASE("the maneuver table makes the start predicate non-monotone") {
  // Pitch drifts across the window; when the angle to the request falls through
  // 15 deg the maneuver time jumps up by 2.5 s, so a feasible start can be
  // followed by an infeasible one.
  CHECK(trans_time(15.0, kSat) - (10.0 + 15.0 / 2.0) == Approx(2.5));
  RngStream rng(101);
  bool found = false;
  for (int k = 0; k < 5000 && !found; ++k) {
    const Request r = test::random_request(rng, 0);
    const double t = test::uniform(rng, r.ws - 80.0, r.we);
    const Attitude att = test::random_attitude(rng);
    found = !test::predicate_is_monotone(r, t, att, 0.1, kSat);
  }
  CHECK(found);
}

TEST_CASE("exact filter removes requests that cannot finish in time") {
  const auto sc = test::make_scenario({{0, 100.0, 200.0, 20.0, 40.0, 0.0}});
  const auto env = test::make_env(sc);
  const auto tables = precompute_tables(sc);
  // we = t_now + dur - 1
  const auto s = state_for(sc, env, 200.0 - 20.0 + 1.0, {}, 2048.0, std::nullopt);
  CHECK(filter_exact(s, tables).survivors.empty());
  CHECK(filter_approx(s, tables).survivors.empty());
}

TEST_CASE("exact filter applies the nominal memory check") {
  const auto sc = test::make_scenario({{0, 100.0, 200.0, 20.0, 40.0, 0.0}});
  const auto env = test::make_env(sc);
  const auto tables = precompute_tables(sc);
  const auto s = state_for(sc, env, 0.0, {}, 20.0 * 3.5 - 1.0, std::nullopt);
  CHECK(filter_exact(s, tables).survivors.empty());
  CHECK(filter_approx(s, tables).survivors.size() == 1);
}

TEST_CASE("far-away requests skip the binary search") {
  const auto sc = test::make_scenario({{0, 100.0, 200.0, 20.0, 40.0, 0.0},
                                       {0, 300.0, 400.0, 20.0, 40.0, 5.0},
                                       {0, 60.0, 150.0, 20.0, 40.0, -5.0}});
  const auto env = test::make_env(sc);
  const auto tables = precompute_tables(sc);
  REQUIRE(tables.m_trans == Approx(58.0));
  const auto s = SchedulerState::initial(sc, env);
  FilterStats stats;
  const auto fr = filter_exact(s, tables, {}, &stats);
  CHECK(stats.binary_searches == 0);
  CHECK(stats.pruned == 3);
  REQUIRE(fr.survivors.size() == 3);
  for (const auto& c : fr.survivors) CHECK(c.os == sc.requests[static_cast<std::size_t>(c.request_id)].ws);
}

TEST_CASE("approximate filter at the initial state uses no maneuver term") {
  const auto sc = test::make_scenario({{0, 10.0, 100.0, 20.0, 40.0, 0.0}, {0, 30.0, 45.0, 20.0, 40.0, 0.0}});
  const auto env = test::make_env(sc);
  const auto tables = precompute_tables(sc);
  const auto fr = filter_approx(SchedulerState::initial(sc, env), tables);
  REQUIRE(fr.survivors.size() == 1);
  CHECK(fr.survivors[0].request_id == 0);
  CHECK(fr.survivors[0].os == 10.0);
}

TEST_CASE("approximate filter removes a request the pair bound pushes past its window") {
  const auto sc = test::make_scenario({{0, 0.0, 100.0, 20.0, 40.0, -27.0}, {0, 110.0, 190.0, 40.0, 80.0, 27.0}});
  const auto env = test::make_env(sc);
  const auto tables = precompute_tables(sc);
  const auto& b = sc.requests[1];
  const double t = 100.0;
  REQUIRE(b.ws + b.dur <= b.we);
  REQUIRE(std::max(b.ws, t + tables.pair(0, 1)) + b.dur > b.we);
  const auto s = state_for(sc, env, t, attitude_at(sc.requests[0], 100.0, kSat), 2048.0, 0);
  for (const auto& c : filter_approx(s, tables).survivors) CHECK(c.request_id != 1);
}

TEST_CASE("approximate survivors are exact survivors with later or equal starts") {
  GenerationParams p;
  p.n_requests = 60;
  RngStream rng(55);
  int checked = 0;
  int violations = 0;
  for (int k = 0; k < 300; ++k) {
    p.seed = 1000 + static_cast<std::uint64_t>(k);
    const auto sc = generate_scenario(p);
    const auto env = realize_environment(sc, 7);
    const auto tables = precompute_tables(sc);
    const int prev = static_cast<int>(rng.below(sc.size()));
    const auto& pr = sc.requests[static_cast<std::size_t>(prev)];
    const double oe = test::uniform(rng, pr.ws + pr.dur, pr.we);
    const auto s = state_for(sc, env, oe, attitude_at(pr, oe, kSat), test::uniform(rng, 0.0, 2048.0), prev);
    const auto ex = filter_exact(s, tables);
    const auto ap = filter_approx(s, tables);
    for (const auto& a : ap.survivors) {
      if (sc.requests[static_cast<std::size_t>(a.request_id)].dur * 3.5 > s.mmc_now) continue;
      ++checked;
      const auto it = std::find_if(ex.survivors.begin(), ex.survivors.end(),
                                   [&](const Candidate& c) { return c.request_id == a.request_id; });
      if (it == ex.survivors.end() || a.os < it->os) ++violations;
    }
  }
  CHECK(checked > 0);
  CHECK(violations == 0);
}

TEST_CASE("run with no visible requests is empty") {
  const auto sc = test::make_scenario({{0, 100.0, 200.0, 20.0, 40.0, 0.0}});
  auto env = test::make_env(sc);
  env.visible[0] = false;
  const auto tables = precompute_tables(sc);
  for (Mode m : {Mode::Exact, Mode::Approximate}) {
    const auto r = run_osa(FirstPolicy{}, sc, env, m, tables);
    CHECK(r.schedule.entries.empty());
    CHECK(r.schedule.total_profit == 0.0);
  }
}

TEST_CASE("single feasible request is scheduled") {
  const auto sc = test::make_scenario({{0, 100.0, 200.0, 20.0, 40.0, 0.0}});
  auto env = test::make_env(sc, 33.0);
  const auto tables = precompute_tables(sc);
  const auto r = run_osa(FirstPolicy{}, sc, env, Mode::Exact, tables);
  REQUIRE(r.schedule.entries.size() == 1);
  CHECK(r.schedule.total_profit == 33.0);
  CHECK(validate_schedule(r.schedule, sc, env).feasible);
}

TEST_CASE("memory overflow stops the run without recording the request") {
  const auto sc = test::make_scenario({{0, 100.0, 200.0, 20.0, 40.0, 0.0}}, 3600.0, 71.0);
  auto env = test::make_env(sc, 10.0, 3.6);  // 72 GB actual, 70 GB nominal
  const auto tables = precompute_tables(sc);
  const auto r = run_osa(FirstPolicy{}, sc, env, Mode::Exact, tables);
  CHECK(r.truncated);
  CHECK(r.schedule.entries.empty());
  CHECK(r.schedule.total_profit == 0.0);
}

TEST_CASE("run matches the exhaustive sequence enumeration") {
  RngStream rng(77);
  int mismatched = 0;
  for (int k = 0; k < 40; ++k) {
    GenerationParams p;
    p.n_requests = 5;
    p.horizon = 400.0;
    p.mmc = 400.0;
    p.seed = 500 + static_cast<std::uint64_t>(k);
    const auto sc = generate_scenario(p);
    const auto env = realize_environment(sc, 3);
    const auto tables = precompute_tables(sc);
    const auto all = test::enumerate_sequences(sc, env, [&](const Request& r, double t, const Attitude& att) {
      return earliest_ow(r, t, att, 0.1, sc.satellite);
    });
    double best = 0.0;
    for (const auto& s : all) best = std::max(best, s.profit);
    const TreePolicy pol(half_and_half(1, 4, rng).tree);
    const auto r = run_osa(pol, sc, env, Mode::Exact, tables);
    CHECK(r.schedule.total_profit <= best + 1e-9);
    const bool found = std::any_of(all.begin(), all.end(), [&](const test::EnumeratedSchedule& s) {
      if (s.entries.size() != r.schedule.entries.size()) return false;
      for (std::size_t i = 0; i < s.entries.size(); ++i) {
        if (s.entries[i].request_id != r.schedule.entries[i].request_id) return false;
        if (std::abs(s.entries[i].os - r.schedule.entries[i].os) > 1e-9) return false;
      }
      return true;
    });
    if (!found) ++mismatched;
  }
  CHECK(mismatched == 0);
}

TEST_CASE("fitness is the mean profit and is deterministic") {
  const auto set = build_instance_set({}, 2, 1);
  const auto tables = precompute_tables(set.scenario);
  const TreePolicy pol(PolicyTree::leaf(Feature::RP));
  const double a = run_osa(pol, set.scenario, set.train[0], Mode::Exact, tables).schedule.total_profit;
  const double b = run_osa(pol, set.scenario, set.train[1], Mode::Exact, tables).schedule.total_profit;
  CHECK(fitness(pol, set.scenario, std::span(set.train).first(1), Mode::Exact, tables) == a);
  CHECK(fitness(pol, set.scenario, set.train, Mode::Exact, tables) == Approx((a + b) / 2.0));
  CHECK(fitness(pol, set.scenario, set.train, Mode::Approximate, tables) ==
        fitness(pol, set.scenario, set.train, Mode::Approximate, tables));
  CHECK_THROWS_AS(fitness(pol, set.scenario, {}, Mode::Exact, tables), std::invalid_argument);
}

TEST_CASE("emitted schedules are feasible and time advances by at least the duration") {
  RngStream rng(12);
  for (int k = 0; k < 200; ++k) {
    GenerationParams p;
    p.seed = 2000 + static_cast<std::uint64_t>(k % 20);
    const auto sc = generate_scenario(p);
    const auto env = realize_environment(sc, static_cast<std::uint64_t>(k));
    const auto tables = precompute_tables(sc);
    const TreePolicy pol(half_and_half(2, 6, rng).tree);
    const Mode m = k % 2 ? Mode::Exact : Mode::Approximate;
    const auto r = run_osa(pol, sc, env, m, tables);
    const auto report = validate_schedule(r.schedule, sc, env);
    CHECK_MESSAGE(report.feasible, report.summary());
    CHECK(r.schedule.entries.size() <= sc.size());
    for (std::size_t i = 1; i < r.schedule.entries.size(); ++i)
      CHECK(r.schedule.entries[i].os >= r.schedule.entries[i - 1].oe);
  }
}
