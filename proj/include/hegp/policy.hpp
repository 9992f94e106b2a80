#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hegp/model.hpp"
#include "hegp/rng.hpp"
#include "hegp/transition.hpp"

namespace hegp {

// ---------------------------------------------------------------------------
// Decision context shared by evolved and handcrafted policies
// ---------------------------------------------------------------------------

/// A request that survived filtering, with its observation-window start.
struct Candidate {
  int request_id = 0;
  double os = 0.0;
};

/// Read-only view of the scheduler at a decision point.
struct DecisionContext {
  const ScenarioSpec* scenario = nullptr;
  const EnvironmentRealization* env = nullptr;
  double t_now = 0.0;
  Attitude att_now;
  double mmc_now = 0.0;
  std::span<const Candidate> candidates;  // ordered by (ws, id)
  std::span<const int> full_rank;  // 1-based rank by (ws, id) among all requests, indexed by id
};

/// Anything that can pick one candidate at a decision point.
class DecisionPolicy {
 public:
  virtual ~DecisionPolicy() = default;
  /// Index into ctx.candidates. ctx.candidates is never empty.
  [[nodiscard]] virtual std::size_t select(const DecisionContext& ctx) const = 0;
};

/// Index of the largest value; ties go to the lowest request id.
std::size_t argmax_lowest_id(std::span<const Candidate> candidates, std::span<const double> values);

/// 1-based rank of every request by (ws, id).
std::vector<int> rank_by_window_start(const ScenarioSpec& scenario);

// ---------------------------------------------------------------------------
// Features
// ---------------------------------------------------------------------------

enum class Feature : std::uint8_t { RP, RPPU, EMC, EMUR, RMP, CT, RIST, RRP, FR, RR };
inline constexpr std::size_t kFeatureCount = 10;
inline constexpr std::array<Feature, kFeatureCount> kAllFeatures{Feature::RP,  Feature::RPPU, Feature::EMC,
                                                                 Feature::EMUR, Feature::RMP, Feature::CT,
                                                                 Feature::RIST, Feature::RRP, Feature::FR,
                                                                 Feature::RR};

std::string_view feature_name(Feature f);
std::optional<Feature> feature_from_name(std::string_view name);

/// Offset c in RIST = (os - t_now + c) / (horizon - t_now + c).
inline constexpr double kRistOffset = 1.0;

struct MinMax {
  double min = 0.0;
  double max = 0.0;
  /// (x - min) / (max - min), or 0 when the range is degenerate.
  [[nodiscard]] double scale(double x) const noexcept { return max > min ? (x - min) / (max - min) : 0.0; }
};

struct FeatureVector {
  std::array<double, kFeatureCount> values{};
  MinMax rp_range;
  MinMax rppu_range;
  MinMax emc_range;

  [[nodiscard]] double operator[](Feature f) const noexcept { return values[static_cast<std::size_t>(f)]; }
  double& operator[](Feature f) noexcept { return values[static_cast<std::size_t>(f)]; }
};

/// Features for every candidate in ctx, in candidate order.
std::vector<FeatureVector> compute_pool_features(const DecisionContext& ctx);
/// Same, written into `out` (resized to the pool size).
void compute_pool_features(const DecisionContext& ctx, std::vector<FeatureVector>& out);

/// Features of one candidate. Throws std::invalid_argument for an empty pool or
/// a target that is not in the pool.
FeatureVector compute_features(const DecisionContext& ctx, int target_id);

// ---------------------------------------------------------------------------
// Expression trees
// ---------------------------------------------------------------------------

enum class Op : std::uint8_t { Add, Sub, Mul, PDiv, Max, Min, Abs, Terminal, Constant };
inline constexpr std::array<Op, 7> kFunctions{Op::Add, Op::Sub, Op::Mul, Op::PDiv, Op::Max, Op::Min, Op::Abs};

constexpr int arity(Op op) noexcept {
  switch (op) {
    case Op::Abs:
      return 1;
    case Op::Terminal:
    case Op::Constant:
      return 0;
    default:
      return 2;
  }
}

struct Node {
  Op op = Op::Constant;
  Feature feature = Feature::RP;  // meaningful for Op::Terminal
  double value = 0.0;  // meaningful for Op::Constant

  static Node fn(Op o) { return {o, Feature::RP, 0.0}; }
  static Node term(Feature f) { return {Op::Terminal, f, 0.0}; }
  static Node constant(double v) { return {Op::Constant, Feature::RP, v}; }

  [[nodiscard]] bool is_leaf() const noexcept { return arity(op) == 0; }
  friend bool operator==(const Node&, const Node&) = default;
};

/// GP individual stored in prefix order. Depth counts edges: a lone terminal
/// has depth 0.
class PolicyTree {
 public:
  PolicyTree() : nodes_{Node::constant(0.0)} {}
  /// Throws std::invalid_argument if `prefix` is not one well-formed tree.
  explicit PolicyTree(std::vector<Node> prefix);

  static PolicyTree leaf(Feature f) { return PolicyTree({Node::term(f)}); }
  static PolicyTree leaf(double c) { return PolicyTree({Node::constant(c)}); }
  static PolicyTree unary(Op op, const PolicyTree& a);
  static PolicyTree binary(Op op, const PolicyTree& a, const PolicyTree& b);

  [[nodiscard]] std::span<const Node> nodes() const noexcept { return nodes_; }
  [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
  [[nodiscard]] int depth() const;
  /// Depth (edges from the root) of every node, in prefix order.
  [[nodiscard]] std::vector<int> node_depths() const;
  /// One past the last node of the subtree rooted at i.
  [[nodiscard]] std::size_t subtree_end(std::size_t i) const;
  /// Copy of this tree with the subtree at i replaced by `replacement`.
  [[nodiscard]] PolicyTree replace_subtree(std::size_t i, std::span<const Node> replacement) const;

  friend bool operator==(const PolicyTree&, const PolicyTree&) = default;

 private:
  std::vector<Node> nodes_;
};

/// Protected evaluation: PDIV(x, 0) = 1 and every intermediate value is
/// saturated to the finite double range, so the result is always finite.
double evaluate(const PolicyTree& tree, const FeatureVector& f) noexcept;

enum class TreeMethod { Grow, Full };

/// Uniform over the ten features and the constant; constants ~ U[-1, 1].
Node random_terminal(RngStream& rng);

/// Koza's grow/full generators. The tree height is drawn uniformly from
/// [min_depth, max_depth]; `full` puts every leaf at that height, `grow` may stop
/// early once min_depth is reached. Requires 1 <= min_depth <= max_depth.
PolicyTree random_tree(TreeMethod method, int min_depth, int max_depth, RngStream& rng);

struct HalfAndHalf {
  PolicyTree tree;
  TreeMethod method;
};
/// Grow or full with probability 1/2 each.
HalfAndHalf half_and_half(int min_depth, int max_depth, RngStream& rng);

/// Infix text: "(a + b)", "(a - b)", "(a * b)", "(a / b)", "max(a, b)",
/// "min(a, b)", "abs(a)", feature names, constants with 4 decimals.
std::string render(const PolicyTree& tree);

/// Evolved policy: features per candidate, evaluate, pick the maximum.
class TreePolicy final : public DecisionPolicy {
 public:
  explicit TreePolicy(PolicyTree tree) : tree_(std::move(tree)) {}
  [[nodiscard]] std::size_t select(const DecisionContext& ctx) const override;
  [[nodiscard]] const PolicyTree& tree() const noexcept { return tree_; }

 private:
  PolicyTree tree_;
};

}  // namespace hegp
