#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hegp/evolution.hpp"
#include "hegp/instances.hpp"
#include "hegp/model.hpp"

namespace hegp {

inline constexpr int kInstanceSchemaVersion = 1;
inline constexpr int kScheduleSchemaVersion = 1;

/// Writes scenario, generation parameters and every realization. Throws IoError.
void write_instance_set(const InstanceSet& set, const std::filesystem::path& path);

/// Throws IoError on unreadable or unparsable files, ConfigError on content
/// that parses but breaks a model invariant.
InstanceSet read_instance_set(const std::filesystem::path& path);

struct ScheduleRecord {
  int env_id = 0;
  Schedule schedule;
};

void write_schedules(const std::string& scenario_name, const std::vector<ScheduleRecord>& records,
                     const std::filesystem::path& path);

/// Throws IoError on unreadable input and MalformedScheduleError on entries
/// that are structurally broken.
std::vector<ScheduleRecord> read_schedules(const std::filesystem::path& path);

struct ResultRow {
  std::string scenario_name;
  std::string method;
  std::uint64_t seed = 0;
  double train_fitness = 0.0;
  double test_mean_profit = 0.0;
  double test_std = 0.0;
  double training_time_s = 0.0;
  double evaluation_time_s = 0.0;
  std::string best_policy_text;
};

std::string results_csv_header();
std::string results_csv_line(const ResultRow& row);
void write_results_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);

void write_evolution_log_csv(const EvolutionLog& log, const std::filesystem::path& path);

/// Writes `text` to `path`, creating parent directories. Throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace hegp
