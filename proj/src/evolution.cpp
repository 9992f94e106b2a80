#include "hegp/evolution.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <thread>

#include <fmt/core.h>

#include "hegp/errors.hpp"

namespace hegp {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::size_t> non_leaf_nodes(const PolicyTree& t) {
  std::vector<std::size_t> out;
  const auto nodes = t.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].is_leaf()) out.push_back(i);
  }
  return out;
}

/// Runs body(i) for i in [0, n), split into contiguous blocks over `threads`.
template <class F>
void parallel_for(std::size_t n, int threads, F&& body) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t block = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * block;
    const std::size_t hi = std::min(n, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct BatchEval {
  std::vector<double> fits;
  std::size_t exact = 0;
  double p_exact_sum = 0.0;
};

}  // namespace

void GPConfig::validate() const {
  if (pop_size < 2) throw ConfigError("pop_size must be at least 2");
  if (generations < 1) throw ConfigError("generations must be at least 1");
  if (p_crossover < 0.0 || p_crossover > 1.0 || p_mutation < 0.0 || p_mutation > 1.0)
    throw ConfigError("operator probabilities must lie in [0, 1]");
  if (tournament_size < 1 || tournament_size > pop_size)
    throw ConfigError(fmt::format("tournament size {} outside [1, {}]", tournament_size, pop_size));
  const auto [dmin, dmax] = init_depth;
  if (dmin < 1 || dmax < dmin || dmax > max_depth)
    throw ConfigError(fmt::format("initial depth range [{}, {}] invalid for max depth {}", dmin, dmax, max_depth));
  if (mini_batch_size < 1) throw ConfigError("mini_batch_size must be at least 1");
  if (final_top_k < 1) throw ConfigError("final_top_k must be at least 1");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  if (!(sched.pre > 0.0)) throw ConfigError("pre must be positive");
  switch_cfg.validate();
}

void GPConfig::validate_for(std::size_t n_train) const {
  validate();
  const auto batch = static_cast<std::size_t>(mini_batch_size);
  if (n_train == 0 || n_train % batch != 0)
    throw ConfigError(fmt::format("mini-batch size {} does not divide {} training environments", batch, n_train));
}

std::vector<PolicyTree> init_population(const GPConfig& cfg) {
  RngStream rng = RngStream(cfg.seed).derive("init");
  return init_population(cfg, rng);
}

std::vector<PolicyTree> init_population(const GPConfig& cfg, RngStream& rng) {
  std::vector<PolicyTree> pop;
  pop.reserve(static_cast<std::size_t>(cfg.pop_size));
  for (int i = 0; i < cfg.pop_size; ++i) pop.push_back(half_and_half(cfg.init_depth.first, cfg.init_depth.second, rng).tree);
  return pop;
}

std::size_t tournament_select(std::span<const double> fits, int k, RngStream& rng) {
  const std::size_t n = fits.size();
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw std::invalid_argument(fmt::format("tournament size {} outside [1, {}]", k, n));
  std::vector<std::size_t> drawn;
  drawn.reserve(static_cast<std::size_t>(k));
  std::size_t best = 0;
  while (drawn.size() < static_cast<std::size_t>(k)) {
    const auto x = static_cast<std::size_t>(rng.below(n));
    if (std::find(drawn.begin(), drawn.end(), x) != drawn.end()) continue;
    if (drawn.empty() || fits[x] > fits[best]) best = x;
    drawn.push_back(x);
  }
  return best;
}

std::pair<PolicyTree, PolicyTree> crossover_at(const PolicyTree& a, const PolicyTree& b, std::size_t ia,
                                               std::size_t ib, int max_depth) {
  const auto na = a.nodes();
  const auto nb = b.nodes();
  PolicyTree c1 = a.replace_subtree(ia, nb.subspan(ib, b.subtree_end(ib) - ib));
  PolicyTree c2 = b.replace_subtree(ib, na.subspan(ia, a.subtree_end(ia) - ia));
  if (c1.depth() > max_depth) c1 = a;
  if (c2.depth() > max_depth) c2 = b;
  return {std::move(c1), std::move(c2)};
}

std::pair<PolicyTree, PolicyTree> crossover(const PolicyTree& a, const PolicyTree& b, int max_depth, RngStream& rng) {
  const auto pa = non_leaf_nodes(a);
  const auto pb = non_leaf_nodes(b);
  if (pa.empty() || pb.empty()) return {a, b};
  const std::size_t ia = pa[rng.below(pa.size())];
  const std::size_t ib = pb[rng.below(pb.size())];
  return crossover_at(a, b, ia, ib, max_depth);
}

PolicyTree mutate(const PolicyTree& a, int max_depth, std::pair<int, int> init_depth, RngStream& rng) {
  const auto depths = a.node_depths();
  const std::size_t i = rng.below(a.size());
  const int budget = max_depth - depths[i];
  if (budget < 1) {
    const Node leaf = random_terminal(rng);
    return a.replace_subtree(i, std::span<const Node>(&leaf, 1));
  }
  const int hi = std::min(budget, init_depth.second);
  const int lo = std::min(init_depth.first, hi);
  const PolicyTree sub = half_and_half(lo, hi, rng).tree;
  return a.replace_subtree(i, sub.nodes());
}

GPResult run_gp(const GPConfig& cfg, const ScenarioSpec& scenario, std::span<const EnvironmentRealization> train,
                const TransitionTables& tables) {
  cfg.validate_for(train.size());
  const auto run_start = Clock::now();

  const RngStream root(cfg.seed);
  RngStream ops = root.derive("ops");
  const RngStream mode_root = root.derive("mode");

  const auto N = static_cast<std::size_t>(cfg.pop_size);
  const auto batch_size = static_cast<std::size_t>(cfg.mini_batch_size);
  const std::size_t n_batches = train.size() / batch_size;

  GPResult result;
  EvolutionLog& log = result.log;
  std::vector<PolicyTree> pop = init_population(cfg);
  std::vector<double> history;  // fitness of the current population from the previous generation

  // Per-generation champions by batch fitness.
  std::vector<std::pair<PolicyTree, double>> champions;

  const auto evaluate = [&](const std::vector<PolicyTree>& trees, std::span<const EnvironmentRealization> envs,
                            int g, std::string_view phase, std::span<const double> status_fits) {
    BatchEval out;
    out.fits.assign(trees.size(), 0.0);
    std::vector<Mode> modes(trees.size(), Mode::Exact);
    std::vector<double> probs(trees.size(), 0.0);
    const EvolutionStatus status{g, cfg.generations, status_fits};
    const RngStream gen_stream = mode_root.derive(phase, static_cast<std::uint64_t>(g));
    parallel_for(trees.size(), cfg.threads, [&](std::size_t i) {
      const TreePolicy policy(trees[i]);
      switch (cfg.eval_mode) {
        case EvalMode::ExactOnly:
          out.fits[i] = fitness(policy, scenario, envs, Mode::Exact, tables, cfg.sched);
          modes[i] = Mode::Exact;
          probs[i] = 1.0;
          break;
        case EvalMode::ApproxOnly:
          out.fits[i] = fitness(policy, scenario, envs, Mode::Approximate, tables, cfg.sched);
          modes[i] = Mode::Approximate;
          probs[i] = 0.0;
          break;
        case EvalMode::Hybrid: {
          RngStream rng = gen_stream.derive("policy", i);
          const HybridOutcome h = hybrid_fitness(policy, scenario, envs, status, cfg.switch_cfg, tables, rng, cfg.sched);
          out.fits[i] = h.fitness;
          modes[i] = h.mode;
          probs[i] = h.p_exact;
          break;
        }
      }
    });
    for (std::size_t i = 0; i < trees.size(); ++i) {
      if (modes[i] == Mode::Exact) ++out.exact;
      out.p_exact_sum += probs[i];
    }
    return out;
  };

  for (int g = 1; g <= cfg.generations; ++g) {
    const auto gen_start = Clock::now();
    double gen_eval = 0.0;
    const std::size_t b = static_cast<std::size_t>(g - 1) % n_batches;
    const auto batch = train.subspan(b * batch_size, batch_size);

    auto t0 = Clock::now();
    const BatchEval parents = evaluate(pop, batch, g, "pop", history);
    gen_eval += seconds_since(t0);

    // Selection, then crossover on disjoint random pairs, then mutation.
    std::vector<PolicyTree> offspring;
    offspring.reserve(N);
    for (std::size_t i = 0; i < N; ++i) offspring.push_back(pop[tournament_select(parents.fits, cfg.tournament_size, ops)]);
    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = N; i > 1; --i) std::swap(order[i - 1], order[ops.below(i)]);
    for (std::size_t i = 0; i + 1 < N; i += 2) {
      if (ops.uniform01() >= cfg.p_crossover) continue;
      auto& x = offspring[order[i]];
      auto& y = offspring[order[i + 1]];
      auto [c1, c2] = crossover(x, y, cfg.max_depth, ops);
      x = std::move(c1);
      y = std::move(c2);
    }
    for (auto& child : offspring) {
      if (ops.uniform01() < cfg.p_mutation) child = mutate(child, cfg.max_depth, cfg.init_depth, ops);
    }

    t0 = Clock::now();
    const BatchEval kids = evaluate(offspring, batch, g, "offspring", parents.fits);
    gen_eval += seconds_since(t0);

    // Reproduction: binary tournaments over the merged population.
    std::vector<PolicyTree> merged = pop;
    merged.insert(merged.end(), offspring.begin(), offspring.end());
    std::vector<double> merged_fits = parents.fits;
    merged_fits.insert(merged_fits.end(), kids.fits.begin(), kids.fits.end());

    const auto champ = static_cast<std::size_t>(std::max_element(merged_fits.begin(), merged_fits.end()) -
                                                merged_fits.begin());
    champions.emplace_back(merged[champ], merged_fits[champ]);

    std::vector<PolicyTree> next;
    next.reserve(N);
    history.clear();
    for (std::size_t i = 0; i < N; ++i) {
      const std::size_t w = tournament_select(merged_fits, cfg.tournament_size, ops);
      next.push_back(merged[w]);
      history.push_back(merged_fits[w]);
    }
    pop = std::move(next);

    const Factors f = factors({g, cfg.generations, parents.fits});
    GenerationRecord rec;
    rec.generation = g;
    rec.best_fitness = merged_fits[champ];
    rec.mean_fitness = std::accumulate(parents.fits.begin(), parents.fits.end(), 0.0) / static_cast<double>(N);
    double size_sum = 0.0;
    for (const auto& t : pop) size_sum += static_cast<double>(t.size());
    rec.mean_size = size_sum / static_cast<double>(N);
    rec.fac_es = f.fac_es;
    rec.fac_pd = f.fac_pd;
    rec.p_exact = (parents.p_exact_sum + kids.p_exact_sum) / static_cast<double>(2 * N);
    rec.exact_draw_fraction = static_cast<double>(parents.exact + kids.exact) / static_cast<double>(2 * N);
    rec.eval_time_s = gen_eval;
    rec.wall_time_s = seconds_since(gen_start);
    log.records.push_back(rec);
    log.evaluation_time_s += gen_eval;
    log.exact_evaluations += parents.exact + kids.exact;
    log.approx_evaluations += 2 * N - parents.exact - kids.exact;
  }

  // Final choice: the top batch champions, re-scored exactly on the full training set.
  std::stable_sort(champions.begin(), champions.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  std::vector<PolicyTree> finalists;
  for (const auto& [tree, fit] : champions) {
    if (finalists.size() >= static_cast<std::size_t>(cfg.final_top_k)) break;
    if (std::find(finalists.begin(), finalists.end(), tree) == finalists.end()) finalists.push_back(tree);
  }
  std::vector<double> final_fits(finalists.size());
  const auto t0 = Clock::now();
  parallel_for(finalists.size(), cfg.threads, [&](std::size_t i) {
    final_fits[i] = fitness(TreePolicy(finalists[i]), scenario, train, Mode::Exact, tables, cfg.sched);
  });
  log.evaluation_time_s += seconds_since(t0);
  const auto win =
      static_cast<std::size_t>(std::max_element(final_fits.begin(), final_fits.end()) - final_fits.begin());
  result.best = finalists[win];
  result.best_train_fitness = final_fits[win];
  log.training_time_s = seconds_since(run_start);
  return result;
}

}  // namespace hegp
