#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "hegp/policy.hpp"
#include "hegp/scheduler.hpp"

namespace hegp {

enum class BaselineKind { LAH1, LAH2, LAH3, MDH1, MDH2, MDH3 };

struct BaselineSpec {
  BaselineKind kind = BaselineKind::MDH1;
  std::optional<int> lookahead;  // LAH2 and LAH3 only, in [2, 20]

  /// Throws ConfigError when lookahead is missing, out of range or misplaced.
  void validate() const;
};

std::string_view baseline_name(BaselineKind kind);
std::optional<BaselineKind> baseline_from_name(std::string_view name);

inline constexpr int kMinLookahead = 2;
inline constexpr int kMaxLookahead = 20;

enum class LookaheadCriterion { First, Profit, ProfitRate };

/// Orders candidates by (os, id), keeps the first k and applies the criterion.
/// Returns an index into ctx.candidates.
std::size_t lookahead_select(LookaheadCriterion criterion, int k, const DecisionContext& ctx);

/// Index into ctx.candidates chosen by the baseline. Throws std::invalid_argument
/// on an empty pool.
std::size_t baseline_select(const BaselineSpec& spec, const DecisionContext& ctx);

class BaselinePolicy final : public DecisionPolicy {
 public:
  explicit BaselinePolicy(BaselineSpec spec);
  [[nodiscard]] std::size_t select(const DecisionContext& ctx) const override;
  [[nodiscard]] const BaselineSpec& spec() const noexcept { return spec_; }

 private:
  BaselineSpec spec_;
};

/// Mean exact-mode profit of the baseline over envs.
double run_baseline(const BaselineSpec& spec, const ScenarioSpec& scenario,
                    std::span<const EnvironmentRealization> envs, const TransitionTables& tables,
                    const SchedulerConfig& cfg = {});

struct LookaheadSweep {
  int best_k = kMinLookahead;
  double best_fitness = 0.0;
};

/// Tries every lookahead in [2, 20] on envs and keeps the best (ties to the smaller k).
LookaheadSweep sweep_lookahead(BaselineKind kind, const ScenarioSpec& scenario,
                               std::span<const EnvironmentRealization> envs, const TransitionTables& tables,
                               const SchedulerConfig& cfg = {});

}  // namespace hegp
