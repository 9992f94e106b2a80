#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hegp {

/// One linear piece of the maneuver-time function: offset_s + angle / rate_deg_s
/// for angles in [from_deg, to_deg]. The last piece is open-ended.
struct TransSegment {
  double offset_s = 0.0;
  double rate_deg_s = 1.0;
  double from_deg = 0.0;
  std::optional<double> to_deg;
};

/// Classical orbital elements. Carried as metadata; visibility is synthetic.
struct OrbitalElements {
  double semi_major_axis_m = 6878137.0;
  double eccentricity = 0.0;
  double inclination_deg = 0.0;
  double arg_perigee_deg = 0.0;
  double raan_deg = 360.0;
  double mean_anomaly_deg = 360.0;
};

struct SatelliteConfig {
  double attitude_limit_deg = 27.0;  // symmetric bound on pitch and roll
  double yaw_fixed_deg = 0.0;
  std::vector<TransSegment> trans_segments;
  double nominal_write_rate = 3.5;  // GB/s
  OrbitalElements orbit;

  /// Reference agile satellite: +-27 deg pitch/roll, 3.5 GB/s and the
  /// four-piece maneuver table (5,1,0-15) (10,2,15-40) (16,2.5,40-90) (22,3,90-).
  static SatelliteConfig reference();

  /// Throws ConfigError when segments are unsorted, gapped at 0, closed at the
  /// end, or when rates/limits are non-positive.
  void validate() const;
};

struct Request {
  int id = 0;
  double ws = 0.0;  // visible window start (s)
  double we = 0.0;  // visible window end (s)
  double dur = 0.0;  // imaging duration (s)
  double nominal_profit = 0.0;
  double roll_fixed = 0.0;  // deg
};

struct ScenarioSpec {
  std::string name;
  std::vector<Request> requests;  // requests[i].id == i
  SatelliteConfig satellite = SatelliteConfig::reference();
  double horizon = 3600.0;  // s
  double mmc = 2048.0;  // GB
  double p_cc = 0.15;
  double alpha_p = 30.0;
  double alpha_cr = 350.0;

  [[nodiscard]] std::size_t size() const noexcept { return requests.size(); }
  [[nodiscard]] bool has_request(int id) const noexcept {
    return id >= 0 && static_cast<std::size_t>(id) < requests.size();
  }

  /// Throws ConfigError on any broken invariant.
  void validate() const;
};

struct EnvironmentRealization {
  int env_id = 0;
  std::uint64_t seed = 0;
  std::vector<double> actual_profit;
  std::vector<double> actual_write_rate;  // GB/s
  std::vector<bool> visible;

  /// Throws ConfigError if lengths or positivity do not match `scenario`.
  void validate(const ScenarioSpec& scenario) const;
};

struct ObservationWindow {
  int request_id = 0;
  double os = 0.0;
  double oe = 0.0;
};

struct Schedule {
  std::vector<ObservationWindow> entries;
  double total_profit = 0.0;
  double memory_used = 0.0;  // GB
};

struct Violation {
  std::string tag;  // memory | visibility | window | duration | transition | ordering | duplicate | accounting
  std::vector<int> request_ids;
  std::string detail;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;

  [[nodiscard]] bool has(std::string_view tag) const;
  [[nodiscard]] std::string summary() const;
};

/// Checks a schedule against every constraint of the problem and reports all
/// violations found. Throws MalformedScheduleError if an entry names a request
/// that is not in the scenario.
FeasibilityReport validate_schedule(const Schedule& schedule, const ScenarioSpec& scenario,
                                    const EnvironmentRealization& env);

}  // namespace hegp
