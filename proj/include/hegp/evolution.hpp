#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hegp/hybrid.hpp"
#include "hegp/policy.hpp"
#include "hegp/rng.hpp"
#include "hegp/scheduler.hpp"

namespace hegp {

enum class EvalMode { ExactOnly, ApproxOnly, Hybrid };

struct GPConfig {
  int pop_size = 200;
  int generations = 50;
  double p_crossover = 0.80;
  double p_mutation = 0.15;
  int tournament_size = 2;
  int max_depth = 8;
  std::pair<int, int> init_depth{2, 6};
  int mini_batch_size = 5;
  SwitchConfig switch_cfg;
  EvalMode eval_mode = EvalMode::Hybrid;
  std::uint64_t seed = 1;
  int final_top_k = 5;  // batch champions re-evaluated on the full training set
  int threads = 1;  // fitness evaluations in parallel; results do not depend on it
  SchedulerConfig sched;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
  /// Also requires the batch size to divide the training-set size.
  void validate_for(std::size_t n_train) const;
};

struct GenerationRecord {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  double mean_size = 0.0;
  double fac_es = 0.0;
  double fac_pd = 1.0;
  double p_exact = 0.0;
  double exact_draw_fraction = 0.0;
  double wall_time_s = 0.0;
  double eval_time_s = 0.0;
};

struct EvolutionLog {
  std::vector<GenerationRecord> records;
  double training_time_s = 0.0;  // whole run including the final re-evaluation
  double evaluation_time_s = 0.0;  // time spent inside fitness calls
  std::size_t exact_evaluations = 0;
  std::size_t approx_evaluations = 0;
};

struct GPResult {
  PolicyTree best;
  double best_train_fitness = 0.0;  // exact, full training set
  EvolutionLog log;
};

/// Half-and-half population from the stream named "init" under cfg.seed.
std::vector<PolicyTree> init_population(const GPConfig& cfg);
std::vector<PolicyTree> init_population(const GPConfig& cfg, RngStream& rng);

/// k distinct individuals drawn uniformly; the fittest wins, ties to the first drawn.
std::size_t tournament_select(std::span<const double> fits, int k, RngStream& rng);

/// Swaps the subtrees rooted at non-leaf nodes ia of a and ib of b. A child
/// deeper than max_depth is replaced by its own parent.
std::pair<PolicyTree, PolicyTree> crossover_at(const PolicyTree& a, const PolicyTree& b, std::size_t ia,
                                               std::size_t ib, int max_depth);

/// Uniform non-leaf crossover points; trees without a non-leaf node pass through.
std::pair<PolicyTree, PolicyTree> crossover(const PolicyTree& a, const PolicyTree& b, int max_depth, RngStream& rng);

/// Replaces a uniformly chosen node by a fresh half-and-half subtree that fits
/// in the remaining depth budget.
PolicyTree mutate(const PolicyTree& a, int max_depth, std::pair<int, int> init_depth, RngStream& rng);

GPResult run_gp(const GPConfig& cfg, const ScenarioSpec& scenario, std::span<const EnvironmentRealization> train,
                const TransitionTables& tables);

}  // namespace hegp
