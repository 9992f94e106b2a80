#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "hegp/errors.hpp"
#include "hegp/experiment.hpp"
#include "hegp/io.hpp"
#include "hegp/metrics.hpp"

namespace fs = std::filesystem;
using namespace hegp;

namespace {

enum Exit { kOk = 0, kConfig = 1, kInfeasible = 2, kIo = 3 };

void add_gp_options(CLI::App& cmd, GPConfig& gp) {
  cmd.add_option("--pop-size", gp.pop_size, "Population size")->capture_default_str();
  cmd.add_option("--generations", gp.generations, "Number of generations")->capture_default_str();
  cmd.add_option("--p-crossover", gp.p_crossover, "Crossover probability per pair")->capture_default_str();
  cmd.add_option("--p-mutation", gp.p_mutation, "Mutation probability per individual")->capture_default_str();
  cmd.add_option("--tournament-size", gp.tournament_size, "Tournament size")->capture_default_str();
  cmd.add_option("--max-depth", gp.max_depth, "Maximum tree depth")->capture_default_str();
  cmd.add_option("--init-min-depth", gp.init_depth.first, "Minimum initial depth")->capture_default_str();
  cmd.add_option("--init-max-depth", gp.init_depth.second, "Maximum initial depth")->capture_default_str();
  cmd.add_option("--batch-size", gp.mini_batch_size, "Mini-batch size")->capture_default_str();
  cmd.add_option("--phi-es", gp.switch_cfg.phi_es, "Progress weight of the exact-mode probability")
      ->capture_default_str();
  cmd.add_option("--phi-pd", gp.switch_cfg.phi_pd, "Diversity weight of the exact-mode probability")
      ->capture_default_str();
  cmd.add_option("--threads", gp.threads, "Fitness evaluation threads")->capture_default_str();
}

void write_outputs(const MethodOutcome& o, const std::string& scenario_name, const fs::path& out) {
  write_results_csv({o.row}, out / "results.csv");
  write_text(out / "policy.txt", o.row.best_policy_text + "\n");
  write_schedules(scenario_name, o.test_schedules, out / "schedules.json");
  if (o.log) write_evolution_log_csv(*o.log, out / "log.csv");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Satellite scheduling policy evolution and benchmarking"};
  app.require_subcommand(1);

  // gen
  GenerationParams gen_params;
  int n_train = 10;
  int n_test = 50;
  fs::path gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a scenario with train and test realizations");
  gen->add_option("--requests", gen_params.n_requests, "Number of requests")->capture_default_str();
  gen->add_option("--horizon", gen_params.horizon, "Scheduling horizon (s)")->capture_default_str();
  gen->add_option("--mmc", gen_params.mmc, "Memory capacity (GB)")->capture_default_str();
  gen->add_option("--p-cc", gen_params.p_cc, "Cloud-cover probability")->capture_default_str();
  gen->add_option("--alpha-p", gen_params.alpha_p, "Gamma shape of actual profit")->capture_default_str();
  gen->add_option("--alpha-cr", gen_params.alpha_cr, "Gamma shape of write rate")->capture_default_str();
  gen->add_option("--seed", gen_params.seed, "Scenario seed")->capture_default_str();
  gen->add_option("--train", n_train, "Training realizations")->capture_default_str();
  gen->add_option("--test", n_test, "Test realizations")->capture_default_str();
  gen->add_option("--out", gen_out, "Instance JSON file")->required();

  // train
  fs::path train_instances;
  fs::path train_out;
  std::string train_method = "HE-GP";
  std::uint64_t train_seed = 1;
  GPConfig gp;
  gp.pop_size = 50;
  gp.generations = 20;
  auto* train = app.add_subcommand("train", "Evolve a policy with one GP variant");
  train->add_option("--instances", train_instances, "Instance JSON file")->required();
  train->add_option("--method", train_method, "EE-GP, AE-GP or HE-GP")
      ->check(CLI::IsMember(kGpMethods))
      ->capture_default_str();
  train->add_option("--seed", train_seed, "GP seed")->capture_default_str();
  train->add_option("--out", train_out, "Output directory")->required();
  add_gp_options(*train, gp);

  // baseline
  fs::path base_instances;
  fs::path base_out;
  std::string base_method = "MDH1";
  auto* baseline = app.add_subcommand("baseline", "Run a handcrafted rule");
  baseline->add_option("--instances", base_instances, "Instance JSON file")->required();
  baseline->add_option("--method", base_method, "LAH1-3 or MDH1-3")
      ->check(CLI::IsMember(kBaselineMethods))
      ->capture_default_str();
  baseline->add_option("--out", base_out, "Output directory")->required();

  // bench
  fs::path bench_config;
  fs::path bench_out;
  auto* bench = app.add_subcommand("bench", "Run a full comparison from a JSON config");
  bench->add_option("--config", bench_config, "Experiment config JSON (default: $HEGP_CONFIG)");
  bench->add_option("--out", bench_out, "Override the config's output directory");

  // validate
  fs::path val_instances;
  fs::path val_schedules;
  auto* validate = app.add_subcommand("validate", "Check schedules against their instance file");
  validate->add_option("--instances", val_instances, "Instance JSON file")->required();
  validate->add_option("--schedules", val_schedules, "Schedule JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*gen) {
      const InstanceSet set = build_instance_set(gen_params, n_train, n_test);
      write_instance_set(set, gen_out);
      fmt::print("wrote {} ({} requests, {} train, {} test)\n", gen_out.string(), set.scenario.size(),
                 set.train.size(), set.test.size());
    } else if (*train) {
      const InstanceSet set = read_instance_set(train_instances);
      gp.validate_for(set.train.size());
      const TransitionTables tables = precompute_tables(set.scenario);
      const MethodOutcome o = run_method(train_method, set, tables, train_seed, gp);
      write_outputs(o, set.scenario.name, train_out);
      fmt::print("{} {}: train {:.3f} test {:.3f} ({:.3f})\n{}\n", set.scenario.name, train_method,
                 o.row.train_fitness, o.row.test_mean_profit, o.row.test_std, o.row.best_policy_text);
    } else if (*baseline) {
      const InstanceSet set = read_instance_set(base_instances);
      const TransitionTables tables = precompute_tables(set.scenario);
      const MethodOutcome o = run_method(base_method, set, tables, 0, GPConfig{});
      write_outputs(o, set.scenario.name, base_out);
      fmt::print("{} {}: train {:.3f} test {:.3f} ({:.3f})\n", set.scenario.name, o.row.best_policy_text,
                 o.row.train_fitness, o.row.test_mean_profit, o.row.test_std);
    } else if (*bench) {
      if (bench_config.empty()) {
        const char* env = std::getenv("HEGP_CONFIG");
        if (!env || !*env) throw ConfigError("bench needs --config or HEGP_CONFIG");
        bench_config = env;
      }
      ExperimentConfig cfg = read_experiment_config(bench_config);
      if (!bench_out.empty()) cfg.output_dir = bench_out;
      const ExperimentResult r = run_experiment(cfg);
      for (std::size_t m = 0; m < r.methods.size(); ++m)
        fmt::print("{:<6} average rank {:.4f}\n", r.methods[m], r.average_ranks[m]);
    } else if (*validate) {
      const InstanceSet set = read_instance_set(val_instances);
      const auto records = read_schedules(val_schedules);
      bool all_ok = true;
      for (const auto& rec : records) {
        const EnvironmentRealization* env = nullptr;
        for (const auto* list : {&set.train, &set.test}) {
          for (const auto& e : *list) {
            if (e.env_id == rec.env_id) env = &e;
          }
        }
        if (!env) throw MalformedScheduleError(fmt::format("schedule refers to unknown env {}", rec.env_id));
        const FeasibilityReport report = validate_schedule(rec.schedule, set.scenario, *env);
        fmt::print("env {}: {}\n", rec.env_id, report.feasible ? "feasible" : report.summary());
        all_ok = all_ok && report.feasible;
      }
      if (!all_ok) throw InfeasibleScheduleError("at least one schedule is infeasible");
    }
  } catch (const InfeasibleScheduleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const MalformedScheduleError& e) {
    std::cerr << "malformed schedule: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kOk;
}
