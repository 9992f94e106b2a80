#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hegp/instances.hpp"
#include "hegp/policy.hpp"
#include "hegp/transition.hpp"
#include "support.hpp"

using namespace hegp;
using doctest::Approx;

namespace {
const SatelliteConfig kSat = SatelliteConfig::reference();
}

TEST_CASE("attitude profile endpoints and midpoint") {
  const Request r{0, 100.0, 200.0, 20.0, 40.0, 12.0};
  CHECK(attitude_at(r, 100.0, kSat).pitch == 27.0);
  CHECK(attitude_at(r, 200.0, kSat).pitch == -27.0);
  CHECK(attitude_at(r, 150.0, kSat) == Attitude{0.0, 12.0, 0.0});
}

TEST_CASE("attitude outside the window throws") {
  const Request r{0, 100.0, 200.0, 20.0, 40.0, 0.0};
  CHECK_THROWS_AS(attitude_at(r, 99.9, kSat), OutOfWindowError);
  CHECK_THROWS_AS(attitude_at(r, 200.1, kSat), OutOfWindowError);
}

TEST_CASE("delta_g is the L1 distance") {
  CHECK(delta_g({0, 0, 0}, {0, 0, 0}) == 0.0);
  CHECK(delta_g({10, 5, 0}, {0, -5, 0}) == 20.0);
  CHECK(delta_g({27, 27, 0}, {-27, -27, 0}) == 108.0);
}

TEST_CASE("delta_g symmetry and triangle inequality") {
  RngStream rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Attitude a = test::random_attitude(rng);
    const Attitude b = test::random_attitude(rng);
    const Attitude c = test::random_attitude(rng);
    CHECK(delta_g(a, b) == delta_g(b, a));
    CHECK(delta_g(a, c) <= delta_g(a, b) + delta_g(b, c) + 1e-12);
  }
}

TEST_CASE("maneuver time pins") {
  CHECK(trans_time(0.0, kSat) == Approx(5.0).epsilon(1e-12));
  CHECK(trans_time(10.0, kSat) == Approx(15.0).epsilon(1e-12));
  CHECK(trans_time(15.0, kSat) == Approx(20.0).epsilon(1e-12));
  CHECK(trans_time(40.0, kSat) == Approx(30.0).epsilon(1e-12));
  CHECK(trans_time(90.0, kSat) == Approx(52.0).epsilon(1e-12));
  CHECK(16.0 + 90.0 / 2.5 == Approx(22.0 + 90.0 / 3.0));
  CHECK(trans_time(108.0, kSat) == Approx(58.0).epsilon(1e-12));
}

TEST_CASE("maneuver time rejects negative angles and is bounded below") {
  CHECK_THROWS_AS(trans_time(-1e-9, kSat), std::domain_error);
  for (double dg = 0.0; dg <= 200.0; dg += 0.25) CHECK(trans_time(dg, kSat) >= 5.0);
}

TEST_CASE("global maximum maneuver time under 27 degree limits") {
  const ScenarioSpec sc = test::make_scenario({{0, 0.0, 100.0, 20.0, 40.0, 0.0}});
  CHECK(precompute_tables(sc).m_trans == Approx(58.0).epsilon(1e-12));
}

TEST_CASE("identical windows and roll give trans(54)") {
  const ScenarioSpec sc =
      test::make_scenario({{0, 100.0, 200.0, 20.0, 40.0, 5.0}, {0, 100.0, 200.0, 20.0, 40.0, 5.0}});
  const auto t = precompute_tables(sc);
  CHECK(t.pair(0, 1) == Approx(trans_time(54.0, kSat)));
  CHECK(t.pair(0, 1) == t.pair(1, 0));
}

TEST_CASE("single-request table is 1x1") {
  const ScenarioSpec sc = test::make_scenario({{0, 10.0, 90.0, 20.0, 40.0, 0.0}});
  const auto t = precompute_tables(sc);
  CHECK(t.n == 1);
  CHECK(t.mtt.size() == 1);
}

TEST_CASE("pairwise bound dominates sampled maneuvers and the global bound") {
  GenerationParams p;
  p.n_requests = 30;
  p.seed = 11;
  const ScenarioSpec sc = generate_scenario(p);
  const auto tables = precompute_tables(sc);
  RngStream rng(17);
  for (int k = 0; k < 10000; ++k) {
    const auto i = static_cast<std::size_t>(rng.below(sc.size()));
    const auto j = static_cast<std::size_t>(rng.below(sc.size()));
    const auto& a = sc.requests[i];
    const auto& b = sc.requests[j];
    const double t1 = test::uniform(rng, a.ws, a.we);
    const double t2 = test::uniform(rng, b.ws, b.we);
    const double need = trans_time(delta_g(attitude_at(a, t1, sc.satellite), attitude_at(b, t2, sc.satellite)),
                                   sc.satellite);
    CHECK(need <= tables.pair(i, j) + 1e-12);
  }
  for (std::size_t i = 0; i < sc.size(); ++i) {
    for (std::size_t j = 0; j < sc.size(); ++j) {
      CHECK(tables.pair(i, j) == tables.pair(j, i));
      CHECK(tables.pair(i, j) <= tables.m_trans + 1e-12);
    }
  }
}

TEST_CASE("pairwise bound covers the non-monotone step at 15 degrees") {
  // Angles just above 15 take less time than 15 itself.
  CHECK(trans_time(15.0, kSat) > trans_time(16.0, kSat));
  // With a 4 deg envelope the worst angle between these two requests is 16 deg,
  // yet an angle of exactly 15 deg is reachable and slower.
  SatelliteConfig narrow = kSat;
  narrow.attitude_limit_deg = 4.0;
  const Request a{0, 100.0, 200.0, 20.0, 40.0, -4.0};
  const Request b{1, 100.0, 200.0, 20.0, 40.0, 4.0};
  CHECK(max_pair_transition(a, b, narrow) == Approx(trans_time(15.0, narrow)));
}

TEST_CASE("precomputed window ordering matches the window-start ranking") {
  GenerationParams p;
  p.n_requests = 80;
  const auto sc = generate_scenario(p);
  const auto tables = precompute_tables(sc);
  CHECK(tables.window_rank == rank_by_window_start(sc));
  for (std::size_t k = 0; k < tables.window_order.size(); ++k)
    CHECK(tables.window_rank[static_cast<std::size_t>(tables.window_order[k])] == static_cast<int>(k) + 1);
}
