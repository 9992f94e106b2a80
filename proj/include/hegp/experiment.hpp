#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hegp/baselines.hpp"
#include "hegp/evolution.hpp"
#include "hegp/instances.hpp"
#include "hegp/io.hpp"

namespace hegp {

/// GP variants and the handcrafted rules, by their reporting names.
inline const std::vector<std::string> kGpMethods{"EE-GP", "AE-GP", "HE-GP"};
inline const std::vector<std::string> kBaselineMethods{"LAH1", "LAH2", "LAH3", "MDH1", "MDH2", "MDH3"};

bool is_gp_method(const std::string& method);
bool is_known_method(const std::string& method);
EvalMode eval_mode_for(const std::string& gp_method);

struct ExperimentConfig {
  std::vector<GenerationParams> scenarios{GenerationParams{}};
  std::vector<std::string> methods{"HE-GP"};
  std::vector<std::uint64_t> seeds{1};
  int n_train = 10;
  int n_test = 50;
  std::filesystem::path output_dir = "results";
  GPConfig gp;

  /// Throws ConfigError on unknown methods, empty lists or inconsistent sizes.
  void validate() const;
};

struct MethodOutcome {
  ResultRow row;
  std::vector<ScheduleRecord> test_schedules;
  std::optional<EvolutionLog> log;  // GP methods only
};

/// Trains (GP) or tunes (LAH2/3) on set.train, then evaluates on set.test in
/// exact mode. Every test schedule is checked; an infeasible one throws
/// InfeasibleScheduleError.
MethodOutcome run_method(const std::string& method, const InstanceSet& set, const TransitionTables& tables,
                         std::uint64_t seed, const GPConfig& gp);

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<std::string> methods;
  std::vector<std::string> scenarios;
  std::vector<std::vector<double>> mean_profit;  // [method][scenario], averaged over seeds
  std::vector<double> average_ranks;  // per method
};

/// Runs every (scenario, method, seed) cell and writes results.csv,
/// summary.json and one generation log per GP run into cfg.output_dir.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Reads an experiment config from JSON. Missing keys keep their defaults.
ExperimentConfig read_experiment_config(const std::filesystem::path& path);

}  // namespace hegp
