#pragma once

#include <span>
#include <vector>

#include "hegp/policy.hpp"
#include "hegp/rng.hpp"
#include "hegp/scheduler.hpp"

namespace hegp {

/// Weights of the progress and diversity terms of the exact-mode probability.
struct SwitchConfig {
  double phi_es = 0.6;
  double phi_pd = 0.4;

  /// Throws ConfigError unless both weights lie in [0, 1] and sum to 1.
  void validate() const;
};

struct EvolutionStatus {
  int g = 1;  // 1-based generation
  int G = 1;  // total generations
  std::span<const double> fits;  // fitness values of the reference population; may be empty
};

struct Factors {
  double fac_es = 0.0;
  double fac_pd = 1.0;
};

/// fac_es = g / G; fac_pd = distinct fitness values / population size, or 1
/// when no fitness history is available.
Factors factors(const EvolutionStatus& status);

/// phi_es * fac_es + phi_pd * (1 - fac_pd), clamped to [0, 1].
double p_exact(double fac_es, double fac_pd, const SwitchConfig& cfg);

/// Exact iff a uniform draw falls below p.
Mode choose_mode(double p, RngStream& rng);

struct HybridOutcome {
  double fitness = 0.0;
  Mode mode = Mode::Exact;
  double p_exact = 0.0;
};

/// Draws one mode for the whole batch and returns the mean profit under it.
HybridOutcome hybrid_fitness(const DecisionPolicy& policy, const ScenarioSpec& scenario,
                             std::span<const EnvironmentRealization> envs, const EvolutionStatus& status,
                             const SwitchConfig& cfg, const TransitionTables& tables, RngStream& rng,
                             const SchedulerConfig& sched = {});

}  // namespace hegp
