#include "hegp/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/core.h>

#include "hegp/errors.hpp"

namespace hegp {

void SwitchConfig::validate() const {
  const auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in_unit(phi_es) || !in_unit(phi_pd) || std::abs(phi_es + phi_pd - 1.0) > 1e-9)
    throw ConfigError(fmt::format("switch weights ({}, {}) must lie in [0, 1] and sum to 1", phi_es, phi_pd));
}

Factors factors(const EvolutionStatus& status) {
  if (status.G < 1 || status.g < 1 || status.g > status.G)
    throw std::invalid_argument(fmt::format("generation {} outside [1, {}]", status.g, status.G));
  Factors f;
  f.fac_es = static_cast<double>(status.g) / static_cast<double>(status.G);
  if (!status.fits.empty()) {
    std::vector<double> sorted(status.fits.begin(), status.fits.end());
    std::sort(sorted.begin(), sorted.end());
    const auto distinct = std::unique(sorted.begin(), sorted.end()) - sorted.begin();
    f.fac_pd = static_cast<double>(distinct) / static_cast<double>(status.fits.size());
  }
  return f;
}

double p_exact(double fac_es, double fac_pd, const SwitchConfig& cfg) {
  return std::clamp(cfg.phi_es * fac_es + cfg.phi_pd * (1.0 - fac_pd), 0.0, 1.0);
}

Mode choose_mode(double p, RngStream& rng) { return rng.uniform01() < p ? Mode::Exact : Mode::Approximate; }

HybridOutcome hybrid_fitness(const DecisionPolicy& policy, const ScenarioSpec& scenario,
                             std::span<const EnvironmentRealization> envs, const EvolutionStatus& status,
                             const SwitchConfig& cfg, const TransitionTables& tables, RngStream& rng,
                             const SchedulerConfig& sched) {
  const Factors f = factors(status);
  HybridOutcome out;
  out.p_exact = p_exact(f.fac_es, f.fac_pd, cfg);
  out.mode = choose_mode(out.p_exact, rng);
  out.fitness = fitness(policy, scenario, envs, out.mode, tables, sched);
  return out;
}

}  // namespace hegp
