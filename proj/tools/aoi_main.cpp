#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "aoi/config.hpp"
#include "aoi/errors.hpp"
#include "aoi/experiments.hpp"

namespace {

// Exit codes: 0 ok, 2 validation, 3 non-convergence, 4 resource guard.
constexpr int kOk = 0;
constexpr int kUnexpected = 1;
constexpr int kValidation = 2;
constexpr int kNonConvergence = 3;
constexpr int kResourceGuard = 4;

void print_error_json(const std::string& type, const std::string& message,
                      const std::vector<std::string>& fields = {}) {
  nlohmann::json err;
  err["error"]["type"] = type;
  err["error"]["message"] = message;
  if (!fields.empty()) err["error"]["fields"] = fields;
  std::cerr << err.dump() << std::endl;
}

struct Cli {
  std::string config;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  int threads = 0;
  // simulate/oracle overrides
  std::string policy;
  std::string compare;
  std::optional<int> reps;
  std::optional<double> tau;
};

int execute(aoi::ExperimentConfig cfg, const Cli& cli,
            std::optional<aoi::ExperimentKind> expected) {
  if (expected && cfg.kind != *expected) {
    print_error_json("validation",
                     "config experiment kind is '" + aoi::to_string(cfg.kind) +
                         "', expected '" + aoi::to_string(*expected) + "'");
    return kValidation;
  }
  if (!cli.policy.empty()) cfg.payload["policy"] = cli.policy;
  if (!cli.compare.empty()) cfg.payload["compare"] = cli.compare;
  if (cli.reps) cfg.payload["reps"] = *cli.reps;
  if (cli.tau) cfg.payload["tau"] = *cli.tau;

  aoi::RunOptions opt;
  opt.out_dir = cli.out_dir;
  opt.seed = cli.seed;
  opt.threads = cli.threads;

  const aoi::RunResult result = aoi::run_experiment(cfg, opt);
  std::cout << result.summary << '\n';
  for (const auto& file : result.outputs) {
    std::cout << "wrote " << file.string() << '\n';
  }
  return kOk;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const aoi::ValidationError& e) {
    print_error_json("validation", e.what(), e.fields());
    return kValidation;
  } catch (const aoi::ConvergenceError& e) {
    print_error_json("non_convergence", e.what());
    return kNonConvergence;
  } catch (const aoi::ResourceLimitError& e) {
    print_error_json("resource_guard", e.what());
    return kResourceGuard;
  } catch (const std::exception& e) {
    print_error_json("unexpected", e.what());
    return kUnexpected;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Age-of-information dynamic pricing toolkit"};
  app.require_subcommand(1);

  Cli cli;
  std::string recipe_name;
  std::string configs_dir = "configs";

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config) {
      sub->add_option("--config", cli.config, "experiment config (JSON)")->required();
    }
    sub->add_option("--out", cli.out_dir, "output directory (default .)");
    sub->add_option("--seed", cli.seed, "seed override");
    sub->add_option("--threads", cli.threads, "worker cap (default AOI_THREADS or hardware)");
  };

  CLI::App* run = app.add_subcommand("run", "run any experiment config");
  add_common(run, true);

  struct KindCmd {
    const char* name;
    aoi::ExperimentKind kind;
  };
  const KindCmd kinds[] = {
      {"single-zone", aoi::ExperimentKind::kSingleZone},
      {"steady-state", aoi::ExperimentKind::kSteadyState},
      {"gap-sweep", aoi::ExperimentKind::kGapSweep},
      {"mean-field", aoi::ExperimentKind::kMeanField},
      {"population", aoi::ExperimentKind::kPopulation},
      {"nash-sweep", aoi::ExperimentKind::kNashSweep},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& k : kinds) {
    CLI::App* sub = app.add_subcommand(k.name, std::string("run a ") + k.name + " experiment");
    add_common(sub, true);
    subs[k.name] = sub;
  }

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo rollouts of a price path");
  add_common(simulate, true);
  simulate->add_option("--policy", cli.policy, "price CSV (overrides config policy)");
  int reps_opt = 0;
  simulate->add_option("--reps", reps_opt, "replication count override");

  CLI::App* oracle = app.add_subcommand("oracle", "exhaustive price-sequence search");
  add_common(oracle, true);
  oracle->add_option("--compare", cli.compare, "comparison price CSV (overrides config)");
  double tau_opt = 0.0;
  oracle->add_option("--tau", tau_opt, "price grid step override");

  CLI::App* recipe = app.add_subcommand("recipe", "run a named checked-in config");
  recipe->add_option("name", recipe_name, "recipe name, e.g. fig3")->required();
  recipe->add_option("--configs-dir", configs_dir, "directory of recipe configs");
  add_common(recipe, false);

  CLI11_PARSE(app, argc, argv);

  return guarded([&]() -> int {
    if (simulate->parsed() && reps_opt > 0) cli.reps = reps_opt;
    if (oracle->parsed() && tau_opt > 0.0) cli.tau = tau_opt;

    if (recipe->parsed()) {
      const auto path = std::filesystem::path(configs_dir) / (recipe_name + ".json");
      return execute(aoi::ExperimentConfig::load(path), cli, std::nullopt);
    }
    auto cfg = aoi::ExperimentConfig::load(cli.config);
    std::optional<aoi::ExperimentKind> expected;
    if (run->parsed()) {
      expected = std::nullopt;
    } else if (simulate->parsed()) {
      expected = aoi::ExperimentKind::kSimulate;
    } else if (oracle->parsed()) {
      expected = aoi::ExperimentKind::kOracle;
    } else {
      for (const auto& k : kinds) {
        if (subs[k.name]->parsed()) expected = k.kind;
      }
    }
    return execute(std::move(cfg), cli, expected);
  });
}
