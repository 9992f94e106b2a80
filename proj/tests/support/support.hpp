#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hegp/instances.hpp"
#include "hegp/model.hpp"
#include "hegp/policy.hpp"
#include "hegp/rng.hpp"
#include "hegp/transition.hpp"

namespace hegp::test {

/// Inverse of render(); throws std::invalid_argument on malformed text.
PolicyTree parse_policy(std::string_view text);

/// Earliest start on the grid ws + k * pre found by checking every grid point in order.
std::optional<double> linear_scan_ow(const Request& req, double t, const Attitude& att_now, double pre,
                                     const SatelliteConfig& sat);

/// True when the feasibility predicate over the start grid is false then true
/// (a single switch), the shape the binary search relies on.
bool predicate_is_monotone(const Request& req, double t, const Attitude& att_now, double pre,
                           const SatelliteConfig& sat);

/// Start rule used by the enumerator: earliest start after (t, att), or none.
using StartRule = std::function<std::optional<double>(const Request&, double, const Attitude&)>;

/// Every observation sequence over visible requests in which each request
/// starts where `rule` puts it after its predecessor and cumulative actual
/// memory stays within mmc. Starts from (0, 0, 0) at t = 0.
struct EnumeratedSchedule {
  std::vector<ObservationWindow> entries;
  double profit = 0.0;
};
std::vector<EnumeratedSchedule> enumerate_sequences(const ScenarioSpec& scenario, const EnvironmentRealization& env,
                                                    const StartRule& rule);

/// Hand-built scenario with the reference satellite and the given requests.
ScenarioSpec make_scenario(std::vector<Request> requests, double horizon = 3600.0, double mmc = 2048.0);

/// Realization with the given profits and rates, everything visible.
EnvironmentRealization make_env(const ScenarioSpec& scenario, double profit = 10.0, double rate = 3.5);

/// Uniform draw in [lo, hi).
inline double uniform(RngStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform01(); }

/// Random request with a window of width in [60, 120] inside [0, horizon].
Request random_request(RngStream& rng, int id, double horizon = 3600.0);

/// Random attitude within the +-27 degree envelope, zero yaw.
Attitude random_attitude(RngStream& rng);

/// Fixed 16-scenario table of mean profits for five methods, in the order
/// LAHs-Best, MDHs-Best, EE-GP, AE-GP, HE-GP, with their known average ranks.
struct RankFixtureRow {
  const char* scenario;
  std::array<double, 5> means;
};
extern const std::array<RankFixtureRow, 16> kRankFixture;
inline constexpr std::array<double, 5> kRankFixtureAverages{4.0625, 4.8750, 1.7500, 2.8750, 1.4375};

}  // namespace hegp::test
