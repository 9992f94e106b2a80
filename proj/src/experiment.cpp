#include "hegp/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/core.h>
#include <json.hpp>

#include "hegp/errors.hpp"
#include "hegp/metrics.hpp"

namespace hegp {
namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct TestStats {
  double mean = 0.0;
  double sd = 0.0;
  std::vector<ScheduleRecord> schedules;
};

TestStats evaluate_on_test(const DecisionPolicy& policy, const InstanceSet& set, const TransitionTables& tables,
                           const SchedulerConfig& sched) {
  TestStats out;
  std::vector<double> profits;
  for (const auto& env : set.test) {
    const OsaResult r = run_osa(policy, set.scenario, env, Mode::Exact, tables, sched);
    const FeasibilityReport report = validate_schedule(r.schedule, set.scenario, env);
    if (!report.feasible)
      throw InfeasibleScheduleError(fmt::format("infeasible schedule on env {}: {}", env.env_id, report.summary()));
    profits.push_back(r.schedule.total_profit);
    out.schedules.push_back({env.env_id, r.schedule});
  }
  const double n = static_cast<double>(profits.size());
  out.mean = std::accumulate(profits.begin(), profits.end(), 0.0) / n;
  if (profits.size() > 1) {
    double ss = 0.0;
    for (double p : profits) ss += (p - out.mean) * (p - out.mean);
    out.sd = std::sqrt(ss / (n - 1.0));
  }
  return out;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

bool is_gp_method(const std::string& method) {
  return std::find(kGpMethods.begin(), kGpMethods.end(), method) != kGpMethods.end();
}

bool is_known_method(const std::string& method) {
  return is_gp_method(method) ||
         std::find(kBaselineMethods.begin(), kBaselineMethods.end(), method) != kBaselineMethods.end();
}

EvalMode eval_mode_for(const std::string& gp_method) {
  if (gp_method == "EE-GP") return EvalMode::ExactOnly;
  if (gp_method == "AE-GP") return EvalMode::ApproxOnly;
  if (gp_method == "HE-GP") return EvalMode::Hybrid;
  throw ConfigError(fmt::format("unknown GP method '{}'", gp_method));
}

void ExperimentConfig::validate() const {
  if (scenarios.empty()) throw ConfigError("at least one scenario is required");
  if (methods.empty()) throw ConfigError("at least one method is required");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  for (const auto& m : methods) {
    if (!is_known_method(m)) throw ConfigError(fmt::format("unknown method '{}'", m));
  }
  if (n_train < 1 || n_test < 1) throw ConfigError("n_train and n_test must be at least 1");
  for (const auto& s : scenarios) s.validate();
  if (std::any_of(methods.begin(), methods.end(), is_gp_method)) gp.validate_for(static_cast<std::size_t>(n_train));
}

MethodOutcome run_method(const std::string& method, const InstanceSet& set, const TransitionTables& tables,
                         std::uint64_t seed, const GPConfig& gp) {
  MethodOutcome out;
  ResultRow& row = out.row;
  row.scenario_name = set.scenario.name;
  row.method = method;
  row.seed = seed;

  if (is_gp_method(method)) {
    GPConfig cfg = gp;
    cfg.seed = seed;
    cfg.eval_mode = eval_mode_for(method);
    GPResult r = run_gp(cfg, set.scenario, set.train, tables);
    row.train_fitness = r.best_train_fitness;
    row.training_time_s = r.log.training_time_s;
    row.evaluation_time_s = r.log.evaluation_time_s;
    row.best_policy_text = render(r.best);
    TestStats t = evaluate_on_test(TreePolicy(r.best), set, tables, gp.sched);
    row.test_mean_profit = t.mean;
    row.test_std = t.sd;
    out.test_schedules = std::move(t.schedules);
    out.log = std::move(r.log);
    return out;
  }

  const auto kind = baseline_from_name(method);
  if (!kind) throw ConfigError(fmt::format("unknown method '{}'", method));
  BaselineSpec spec{*kind, std::nullopt};
  if (*kind == BaselineKind::LAH2 || *kind == BaselineKind::LAH3) {
    const auto start = Clock::now();
    const LookaheadSweep sweep = sweep_lookahead(*kind, set.scenario, set.train, tables, gp.sched);
    row.training_time_s = seconds_since(start);
    row.evaluation_time_s = row.training_time_s;
    spec.lookahead = sweep.best_k;
    row.train_fitness = sweep.best_fitness;
    row.best_policy_text = fmt::format("{}(k={})", method, sweep.best_k);
  } else {
    row.train_fitness = run_baseline(spec, set.scenario, set.train, tables, gp.sched);
    row.best_policy_text = method;
  }
  TestStats t = evaluate_on_test(BaselinePolicy(spec), set, tables, gp.sched);
  row.test_mean_profit = t.mean;
  row.test_std = t.sd;
  out.test_schedules = std::move(t.schedules);
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult res;
  res.methods = cfg.methods;
  res.mean_profit.assign(cfg.methods.size(), std::vector<double>(cfg.scenarios.size(), 0.0));

  for (std::size_t s = 0; s < cfg.scenarios.size(); ++s) {
    const InstanceSet set = build_instance_set(cfg.scenarios[s], cfg.n_train, cfg.n_test);
    const TransitionTables tables = precompute_tables(set.scenario);
    res.scenarios.push_back(set.scenario.name);
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
      for (const auto seed : cfg.seeds) {
        MethodOutcome o = run_method(cfg.methods[m], set, tables, seed, cfg.gp);
        if (o.log) {
          write_evolution_log_csv(*o.log, cfg.output_dir / "logs" /
                                              fmt::format("{}_{}_{}.csv", set.scenario.name, cfg.methods[m], seed));
        }
        res.mean_profit[m][s] += o.row.test_mean_profit / static_cast<double>(cfg.seeds.size());
        res.rows.push_back(std::move(o.row));
      }
    }
  }
  res.average_ranks = average_rank(res.mean_profit);

  write_results_csv(res.rows, cfg.output_dir / "results.csv");

  json summary;
  summary["scenarios"] = res.scenarios;
  summary["methods"] = res.methods;
  for (std::size_t s = 0; s < res.scenarios.size(); ++s) {
    double best = 0.0;
    for (std::size_t m = 0; m < res.methods.size(); ++m) best = std::max(best, res.mean_profit[m][s]);
    for (std::size_t m = 0; m < res.methods.size(); ++m) {
      auto& cell = summary["cells"][res.scenarios[s]][res.methods[m]];
      cell["mean_test_profit"] = res.mean_profit[m][s];
      cell["rpd"] = best > 0.0 ? json(rpd(best, res.mean_profit[m][s])) : json(nullptr);
    }
  }
  for (std::size_t m = 0; m < res.methods.size(); ++m) summary["average_rank"][res.methods[m]] = res.average_ranks[m];
  write_text(cfg.output_dir / "summary.json", summary.dump(2) + "\n");
  return res;
}

ExperimentConfig read_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open config {}", path.string()));
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(fmt::format("cannot parse config {}: {}", path.string(), e.what()));
  }
  ExperimentConfig cfg;
  try {
    if (j.contains("scenarios")) {
      cfg.scenarios.clear();
      for (const auto& s : j.at("scenarios")) {
        GenerationParams p;
        p.n_requests = get_or(s, "n_requests", p.n_requests);
        p.horizon = get_or(s, "horizon", p.horizon);
        p.mmc = get_or(s, "mmc", p.mmc);
        p.p_cc = get_or(s, "p_cc", p.p_cc);
        p.alpha_p = get_or(s, "alpha_p", p.alpha_p);
        p.alpha_cr = get_or(s, "alpha_cr", p.alpha_cr);
        p.seed = get_or(s, "seed", p.seed);
        if (s.contains("vtw_width_range"))
          p.vtw_width_range = {s.at("vtw_width_range").at(0).get<double>(), s.at("vtw_width_range").at(1).get<double>()};
        cfg.scenarios.push_back(p);
      }
    }
    cfg.methods = get_or(j, "methods", cfg.methods);
    cfg.seeds = get_or(j, "seeds", cfg.seeds);
    cfg.n_train = get_or(j, "n_train", cfg.n_train);
    cfg.n_test = get_or(j, "n_test", cfg.n_test);
    cfg.output_dir = get_or(j, "output_dir", cfg.output_dir.string());
    if (j.contains("gp")) {
      const json& g = j.at("gp");
      GPConfig& gp = cfg.gp;
      gp.pop_size = get_or(g, "pop_size", gp.pop_size);
      gp.generations = get_or(g, "generations", gp.generations);
      gp.p_crossover = get_or(g, "p_crossover", gp.p_crossover);
      gp.p_mutation = get_or(g, "p_mutation", gp.p_mutation);
      gp.tournament_size = get_or(g, "tournament_size", gp.tournament_size);
      gp.max_depth = get_or(g, "max_depth", gp.max_depth);
      if (g.contains("init_depth")) gp.init_depth = {g.at("init_depth").at(0).get<int>(), g.at("init_depth").at(1).get<int>()};
      gp.mini_batch_size = get_or(g, "mini_batch_size", gp.mini_batch_size);
      if (g.contains("switch"))
        gp.switch_cfg = {g.at("switch").at(0).get<double>(), g.at("switch").at(1).get<double>()};
      gp.final_top_k = get_or(g, "final_top_k", gp.final_top_k);
      gp.threads = get_or(g, "threads", gp.threads);
      gp.sched.pre = get_or(g, "pre", gp.sched.pre);
    }
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("invalid config {}: {}", path.string(), e.what()));
  }
  return cfg;
}

}  // namespace hegp
