#include "hegp/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/core.h>

namespace hegp {
namespace {

constexpr std::array<std::string_view, kFeatureCount> kFeatureNames{"RP",   "RPPU", "EMC", "EMUR", "RMP",
                                                                    "CT",   "RIST", "RRP", "FR",   "RR"};

// Ten features plus the ephemeral constant.
constexpr std::size_t kTerminalKinds = kFeatureCount + 1;
constexpr double kTerminalRatio =
    static_cast<double>(kTerminalKinds) / static_cast<double>(kTerminalKinds + kFunctions.size());

constexpr double kMemoryFloor = 1e-9;  // GB; keeps EMUR finite on an exhausted memory

inline double saturate(double x) noexcept {
  constexpr double hi = std::numeric_limits<double>::max();
  return x > hi ? hi : (x < -hi ? -hi : x);
}

void grow_into(std::vector<Node>& out, TreeMethod method, int depth, int height, int min_depth, RngStream& rng) {
  bool leaf = depth >= height;
  if (!leaf && method == TreeMethod::Grow && depth >= min_depth) leaf = rng.uniform01() < kTerminalRatio;
  if (leaf) {
    out.push_back(random_terminal(rng));
    return;
  }
  const Op op = kFunctions[rng.below(kFunctions.size())];
  out.push_back(Node::fn(op));
  for (int c = 0; c < arity(op); ++c) grow_into(out, method, depth + 1, height, min_depth, rng);
}

std::size_t render_into(std::string& out, std::span<const Node> nodes, std::size_t i) {
  const Node& n = nodes[i];
  switch (n.op) {
    case Op::Terminal:
      out += feature_name(n.feature);
      return i + 1;
    case Op::Constant:
      out += fmt::format("{:.4f}", n.value);
      return i + 1;
    case Op::Abs: {
      out += "abs(";
      const auto next = render_into(out, nodes, i + 1);
      out += ")";
      return next;
    }
    case Op::Max:
    case Op::Min: {
      out += n.op == Op::Max ? "max(" : "min(";
      auto next = render_into(out, nodes, i + 1);
      out += ", ";
      next = render_into(out, nodes, next);
      out += ")";
      return next;
    }
    default: {
      const char* sym = n.op == Op::Add ? " + " : n.op == Op::Sub ? " - " : n.op == Op::Mul ? " * " : " / ";
      out += "(";
      auto next = render_into(out, nodes, i + 1);
      out += sym;
      next = render_into(out, nodes, next);
      out += ")";
      return next;
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------

Node random_terminal(RngStream& rng) {
  const auto pick = rng.below(kTerminalKinds);
  if (pick == kFeatureCount) return Node::constant(-1.0 + 2.0 * rng.uniform01());
  return Node::term(kAllFeatures[pick]);
}

std::size_t argmax_lowest_id(std::span<const Candidate> candidates, std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    if (values[k] > values[best] || (values[k] == values[best] && candidates[k].request_id < candidates[best].request_id))
      best = k;
  }
  return best;
}

std::vector<int> rank_by_window_start(const ScenarioSpec& scenario) {
  std::vector<int> order(scenario.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& ra = scenario.requests[static_cast<std::size_t>(a)];
    const auto& rb = scenario.requests[static_cast<std::size_t>(b)];
    return ra.ws != rb.ws ? ra.ws < rb.ws : a < b;
  });
  std::vector<int> rank(scenario.size());
  for (std::size_t k = 0; k < order.size(); ++k) rank[static_cast<std::size_t>(order[k])] = static_cast<int>(k) + 1;
  return rank;
}

std::string_view feature_name(Feature f) { return kFeatureNames[static_cast<std::size_t>(f)]; }

std::optional<Feature> feature_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (kFeatureNames[i] == name) return kAllFeatures[i];
  }
  return std::nullopt;
}

std::vector<FeatureVector> compute_pool_features(const DecisionContext& ctx) {
  std::vector<FeatureVector> out;
  compute_pool_features(ctx, out);
  return out;
}

void compute_pool_features(const DecisionContext& ctx, std::vector<FeatureVector>& out) {
  const auto& cands = ctx.candidates;
  if (cands.empty()) throw std::invalid_argument("feature computation needs a non-empty candidate pool");
  const ScenarioSpec& sc = *ctx.scenario;
  const EnvironmentRealization& env = *ctx.env;
  const double rate = sc.satellite.nominal_write_rate;
  const double total = static_cast<double>(sc.size());
  const double pool = static_cast<double>(cands.size());

  MinMax rp{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
  MinMax rppu = rp;
  MinMax emc = rp;
  for (const auto& c : cands) {
    const auto id = static_cast<std::size_t>(c.request_id);
    const double p = env.actual_profit[id];
    const double dur = sc.requests[id].dur;
    rp = {std::min(rp.min, p), std::max(rp.max, p)};
    rppu = {std::min(rppu.min, p / dur), std::max(rppu.max, p / dur)};
    emc = {std::min(emc.min, dur * rate), std::max(emc.max, dur * rate)};
  }

  const double memory = std::max(ctx.mmc_now, kMemoryFloor);
  const double rmp = ctx.mmc_now / sc.mmc;
  const double ct = ctx.t_now / sc.horizon;
  const double rrp = pool / total;
  const double rist_den = sc.horizon - ctx.t_now + kRistOffset;

  out.resize(cands.size());
  for (std::size_t k = 0; k < cands.size(); ++k) {
    const auto id = static_cast<std::size_t>(cands[k].request_id);
    const double p = env.actual_profit[id];
    const double dur = sc.requests[id].dur;
    FeatureVector& f = out[k];
    f.rp_range = rp;
    f.rppu_range = rppu;
    f.emc_range = emc;
    f[Feature::RP] = rp.scale(p);
    f[Feature::RPPU] = rppu.scale(p / dur);
    f[Feature::EMC] = emc.scale(dur * rate);
    f[Feature::EMUR] = dur * rate / memory;
    f[Feature::RMP] = rmp;
    f[Feature::CT] = ct;
    f[Feature::RIST] = (cands[k].os - ctx.t_now + kRistOffset) / rist_den;
    f[Feature::RRP] = rrp;
    f[Feature::FR] = static_cast<double>(ctx.full_rank[id]) / total;
    f[Feature::RR] = static_cast<double>(k + 1) / pool;
  }
}

FeatureVector compute_features(const DecisionContext& ctx, int target_id) {
  const auto it = std::find_if(ctx.candidates.begin(), ctx.candidates.end(),
                               [&](const Candidate& c) { return c.request_id == target_id; });
  if (it == ctx.candidates.end())
    throw std::invalid_argument(fmt::format("request {} is not in the candidate pool", target_id));
  return compute_pool_features(ctx)[static_cast<std::size_t>(it - ctx.candidates.begin())];
}

// ---------------------------------------------------------------------------

PolicyTree::PolicyTree(std::vector<Node> prefix) : nodes_(std::move(prefix)) {
  long open = 1;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (open <= 0) throw std::invalid_argument("prefix sequence holds more than one tree");
    open += arity(nodes_[i].op) - 1;
  }
  if (nodes_.empty() || open != 0) throw std::invalid_argument("prefix sequence is not a complete tree");
}

PolicyTree PolicyTree::unary(Op op, const PolicyTree& a) {
  if (arity(op) != 1) throw std::invalid_argument("operator is not unary");
  std::vector<Node> n{Node::fn(op)};
  n.insert(n.end(), a.nodes_.begin(), a.nodes_.end());
  return PolicyTree(std::move(n));
}

PolicyTree PolicyTree::binary(Op op, const PolicyTree& a, const PolicyTree& b) {
  if (arity(op) != 2) throw std::invalid_argument("operator is not binary");
  std::vector<Node> n{Node::fn(op)};
  n.insert(n.end(), a.nodes_.begin(), a.nodes_.end());
  n.insert(n.end(), b.nodes_.begin(), b.nodes_.end());
  return PolicyTree(std::move(n));
}

std::vector<int> PolicyTree::node_depths() const {
  std::vector<int> out(nodes_.size());
  std::vector<std::pair<int, int>> open;  // (depth, unfilled child slots)
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const int d = open.empty() ? 0 : open.back().first + 1;
    if (!open.empty() && --open.back().second == 0) open.pop_back();
    out[i] = d;
    if (const int a = arity(nodes_[i].op); a > 0) open.emplace_back(d, a);
  }
  return out;
}

int PolicyTree::depth() const {
  const auto d = node_depths();
  return *std::max_element(d.begin(), d.end());
}

std::size_t PolicyTree::subtree_end(std::size_t i) const {
  long need = 1;
  while (need > 0) {
    need += arity(nodes_[i].op) - 1;
    ++i;
  }
  return i;
}

PolicyTree PolicyTree::replace_subtree(std::size_t i, std::span<const Node> replacement) const {
  const auto end = subtree_end(i);
  std::vector<Node> out;
  out.reserve(nodes_.size() - (end - i) + replacement.size());
  out.insert(out.end(), nodes_.begin(), nodes_.begin() + static_cast<std::ptrdiff_t>(i));
  out.insert(out.end(), replacement.begin(), replacement.end());
  out.insert(out.end(), nodes_.begin() + static_cast<std::ptrdiff_t>(end), nodes_.end());
  return PolicyTree(std::move(out));
}

double evaluate(const PolicyTree& tree, const FeatureVector& f) noexcept {
  const auto nodes = tree.nodes();
  thread_local std::vector<double> buffer;
  if (buffer.size() < nodes.size()) buffer.resize(nodes.size());
  double* stack = buffer.data();
  std::size_t top = 0;
  // Walking the prefix sequence backwards turns it into postfix.
  for (std::size_t k = nodes.size(); k-- > 0;) {
    const Node& n = nodes[k];
    switch (n.op) {
      case Op::Terminal:
        stack[top++] = f[n.feature];
        break;
      case Op::Constant:
        stack[top++] = n.value;
        break;
      case Op::Abs:
        stack[top - 1] = std::abs(stack[top - 1]);
        break;
      default: {
        const double a = stack[top - 1];
        const double b = stack[top - 2];
        --top;
        double r = 0.0;
        switch (n.op) {
          case Op::Add: r = saturate(a + b); break;
          case Op::Sub: r = saturate(a - b); break;
          case Op::Mul: r = saturate(a * b); break;
          case Op::PDiv: r = b == 0.0 ? 1.0 : saturate(a / b); break;
          case Op::Max: r = std::max(a, b); break;
          case Op::Min: r = std::min(a, b); break;
          default: break;
        }
        stack[top - 1] = r;
      }
    }
  }
  return stack[0];
}

PolicyTree random_tree(TreeMethod method, int min_depth, int max_depth, RngStream& rng) {
  if (min_depth < 1 || max_depth < min_depth)
    throw std::invalid_argument(fmt::format("invalid depth range [{}, {}]", min_depth, max_depth));
  const int height = min_depth + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_depth - min_depth + 1)));
  std::vector<Node> nodes;
  grow_into(nodes, method, 0, height, min_depth, rng);
  return PolicyTree(std::move(nodes));
}

HalfAndHalf half_and_half(int min_depth, int max_depth, RngStream& rng) {
  const TreeMethod m = rng.uniform01() < 0.5 ? TreeMethod::Full : TreeMethod::Grow;
  return {random_tree(m, min_depth, max_depth, rng), m};
}

std::string render(const PolicyTree& tree) {
  std::string out;
  render_into(out, tree.nodes(), 0);
  return out;
}

std::size_t TreePolicy::select(const DecisionContext& ctx) const {
  thread_local std::vector<FeatureVector> features;
  compute_pool_features(ctx, features);
  thread_local std::vector<double> values;
  values.resize(features.size());
  for (std::size_t k = 0; k < features.size(); ++k) values[k] = evaluate(tree_, features[k]);
  return argmax_lowest_id(ctx.candidates, values);
}

}  // namespace hegp
