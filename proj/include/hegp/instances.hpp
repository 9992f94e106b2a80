#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hegp/errors.hpp"
#include "hegp/model.hpp"

namespace hegp {

class GenerationError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Truncation bounds and moments for the sampled request attributes.
struct SamplingModel {
  double dur_mean = 25.0;
  double dur_sd = 3.0;  // variance 9
  double dur_min = 5.0;
  double dur_max = 60.0;
  double profit_per_second = 2.0;  // profit mean = 2 * dur
  double profit_sd = 10.0;  // variance 100
  double profit_min = 1.0;
};

struct GenerationParams {
  int n_requests = 50;
  double horizon = 3600.0;
  double mmc = 2048.0;
  double p_cc = 0.15;
  double alpha_p = 30.0;
  double alpha_cr = 350.0;
  std::pair<double, double> vtw_width_range{60.0, 120.0};
  std::uint64_t seed = 1;
  SamplingModel sampling;
  SatelliteConfig satellite = SatelliteConfig::reference();

  /// "<requests>_<horizon/100>_<mmc/100>_<p_cc>", e.g. "50_36_20_0.15".
  [[nodiscard]] std::string scenario_name() const;

  /// Throws GenerationError on infeasible or out-of-range parameters.
  void validate() const;
};

struct InstanceSet {
  GenerationParams params;
  ScenarioSpec scenario;
  std::vector<EnvironmentRealization> train;
  std::vector<EnvironmentRealization> test;
};

ScenarioSpec generate_scenario(const GenerationParams& params);

/// Draws actual profits, write rates and visibilities for every request. Each
/// request consumes its own stream derived from (env_seed, request id).
EnvironmentRealization realize_environment(const ScenarioSpec& scenario, std::uint64_t env_seed, int env_id = 0);

/// One scenario plus train/test realizations from disjoint seed streams.
InstanceSet build_instance_set(const GenerationParams& params, int n_train, int n_test);

/// Seed of the j-th realization of a split ("train" or "test").
std::uint64_t realization_seed(std::uint64_t root_seed, std::string_view split, int index);

}  // namespace hegp
