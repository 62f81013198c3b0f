#include "aoi/experiments.hpp"

#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "aoi/csv.hpp"
#include "aoi/errors.hpp"
#include "aoi/mean_field.hpp"
#include "aoi/simulator.hpp"
#include "aoi/single_zone.hpp"
#include "aoi/steady_state.hpp"

namespace aoi {

namespace {

using nlohmann::json;

std::filesystem::path out_path(const RunOptions& opt, const json& payload, const char* key) {
  return opt.out_dir / payload.at("outputs").at(key).get<std::string>();
}

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

RunResult run_single_zone(const ExperimentConfig& cfg, const RunOptions& opt) {
  const ZoneParams params = scenario_from_json(cfg.payload.at("scenario"));
  const PricingPlan plan = solve_delta_fixed_point(params);
  const std::vector<double> ea_orig = age_path_original(params, plan.price);

  RunResult res;
  {
    CsvWriter csv(out_path(opt, cfg.payload, "path"), {"t", "price", "ea_linearized", "ea_original"});
    for (int t = 0; t <= params.horizon; ++t) {
      const std::size_t i = static_cast<std::size_t>(t);
      csv.row(std::vector<double>{static_cast<double>(t), plan.price[i], plan.ea_lin[i], ea_orig[i]});
    }
    res.outputs.push_back(out_path(opt, cfg.payload, "path"));
  }
  {
    CsvWriter csv(out_path(opt, cfg.payload, "trace"), {"iteration", "delta_est"});
    for (std::size_t j = 0; j < plan.delta_history.size(); ++j) {
      csv.row(std::vector<double>{static_cast<double>(j), plan.delta_history[j]});
    }
    res.outputs.push_back(out_path(opt, cfg.payload, "trace"));
  }

  std::string extra;
  if (params.cost.kind() == CostKind::kTruncatedNormal) {
    const auto fit = params.cost.fit_linear();
    extra = fmt(" fit_a1=%.6g fit_a2=%.6g fit_residual_norm=%.6g", fit.dist.a1(), fit.dist.a2(),
                fit.residual_norm);
  }
  res.summary = fmt("single-zone: delta=%.6g iterations=%d cost=%.6g residual=%.3g%s",
                    plan.delta, plan.iterations, plan.cost, plan.residual, extra.c_str());
  return res;
}

RunResult run_steady_state(const ExperimentConfig& cfg, const RunOptions& opt) {
  const ZoneParams params = scenario_from_json(cfg.payload.at("scenario"));
  const int t_max = cfg.payload.at("t_max").get<int>();
  const SteadyState ss = solve_steady_state(params);
  const InfinitePaths paths = price_infinite(params, ss.delta_inf, t_max);

  RunResult res;
  CsvWriter csv(out_path(opt, cfg.payload, "path"), {"t", "p_inf", "ea_inf"});
  for (int t = 0; t <= t_max; ++t) {
    const std::size_t i = static_cast<std::size_t>(t);
    csv.row(std::vector<double>{static_cast<double>(t), paths.price[i], paths.ea[i]});
  }
  res.outputs.push_back(out_path(opt, cfg.payload, "path"));
  res.summary = fmt(
      "steady-state: delta_inf=%.8g q=%.8g m=%.8g price_limit=%.8g ea_limit=%.8g balance=%.10g",
      ss.delta_inf, ss.q, ss.m, ss.price_limit, ss.ea_limit, delta_balance(params, ss.delta_inf));
  return res;
}

RunResult run_gap_sweep(const ExperimentConfig& cfg, const RunOptions& opt) {
  ZoneParams params = scenario_from_json(cfg.payload.at("scenario"));
  const std::string prefix = cfg.payload.at("outputs").at("prefix").get<std::string>();

  RunResult res;
  std::string summary = "gap-sweep:";
  for (const auto& rj : cfg.payload.at("rhos")) {
    params.rho = rj.get<double>();
    const auto file = opt.out_dir / (prefix + "_rho" + format_number(params.rho) + ".csv");
    CsvWriter csv(file, {"T", "U_T", "U_inf_T", "gap"});
    double last_gap = 0.0;
    for (const auto& tj : cfg.payload.at("horizons")) {
      const int T = tj.get<int>();
      const GapResult g = epsilon_gap(params, T);
      csv.row(std::vector<double>{static_cast<double>(T), g.u_finite, g.u_infinite, g.gap});
      last_gap = g.gap;
    }
    res.outputs.push_back(file);
    summary += fmt(" rho=%s:final_gap=%.3g", format_number(params.rho).c_str(), last_gap);
  }
  res.summary = summary;
  return res;
}

RunResult run_mean_field(const ExperimentConfig& cfg, const RunOptions& opt) {
  const MultiZoneScenario scenario = multizone_from_json(cfg.payload);
  const MeanFieldSolution sol = solve_mean_field(scenario);
  const OriginalEval orig = evaluate_original_mf(scenario, sol);
  const std::size_t n = scenario.zones.size();

  RunResult res;
  {
    std::vector<std::string> header{"t", "phi"};
    for (std::size_t i = 1; i <= n; ++i) header.push_back("price_zone_" + std::to_string(i));
    for (std::size_t i = 1; i <= n; ++i) header.push_back("ea_zone_" + std::to_string(i));
    CsvWriter csv(out_path(opt, cfg.payload, "path"), header);
    for (int t = 0; t <= scenario.horizon; ++t) {
      const std::size_t s = static_cast<std::size_t>(t);
      std::vector<double> row{static_cast<double>(t), sol.phi[s]};
      for (const auto& z : sol.zones) row.push_back(z.price[s]);
      for (const auto& z : sol.zones) row.push_back(z.ea[s]);
      csv.row(row);
    }
    res.outputs.push_back(out_path(opt, cfg.payload, "path"));
  }
  {
    std::vector<std::string> header{"iteration"};
    for (std::size_t i = 1; i <= n; ++i) header.push_back("delta_zone_" + std::to_string(i));
    CsvWriter csv(out_path(opt, cfg.payload, "delta_trace"), header);
    for (std::size_t j = 0; j < sol.delta_trace.size(); ++j) {
      std::vector<double> row{static_cast<double>(j)};
      row.insert(row.end(), sol.delta_trace[j].begin(), sol.delta_trace[j].end());
      csv.row(row);
    }
    res.outputs.push_back(out_path(opt, cfg.payload, "delta_trace"));
  }
  {
    std::vector<std::string> header{"iteration"};
    for (int t = 1; t <= scenario.horizon; ++t) header.push_back("phi_t" + std::to_string(t));
    CsvWriter csv(out_path(opt, cfg.payload, "phi_trace"), header);
    for (std::size_t j = 0; j < sol.phi_trace.size(); ++j) {
      std::vector<double> row{static_cast<double>(j)};
      row.insert(row.end(), sol.phi_trace[j].begin(), sol.phi_trace[j].end());
      csv.row(row);
    }
    res.outputs.push_back(out_path(opt, cfg.payload, "phi_trace"));
  }
  {
    std::vector<std::string> header{"t", "phi", "avg_ea_original"};
    for (std::size_t i = 1; i <= n; ++i) header.push_back("ea_original_zone_" + std::to_string(i));
    CsvWriter csv(out_path(opt, cfg.payload, "original"), header);
    for (int t = 0; t <= scenario.horizon; ++t) {
      const std::size_t s = static_cast<std::size_t>(t);
      std::vector<double> row{static_cast<double>(t), sol.phi[s], orig.average[s]};
      for (const auto& path : orig.ea_orig) row.push_back(path[s]);
      csv.row(row);
    }
    res.outputs.push_back(out_path(opt, cfg.payload, "original"));
  }
  res.summary = fmt(
      "mean-field: zones=%zu iterations=%d resid_delta=%.3g resid_phi=%.3g max_original_dev=%.4g",
      n, sol.iterations, sol.resid_delta, sol.resid_phi, orig.max_dev);
  return res;
}

RunResult run_population(const ExperimentConfig& cfg, const RunOptions& opt) {
  const json& shared = cfg.payload.at("shared");
  const json& pop = cfg.payload.at("population");
  const PopulationDistribution dist = population_from_json(pop);
  const double w = pop.at("w").get<double>();
  const PopulationSolution sol = large_population_phi(
      dist, w, shared.at("rho").get<double>(), shared.at("b").get<double>(),
      shared.at("a0").get<double>(), shared.at("horizon").get<int>(),
      cfg.payload.at("tol").get<double>(), cfg.payload.at("max_iter").get<int>());

  const int horizon = shared.at("horizon").get<int>();
  RunResult res;
  {
    std::vector<std::string> header{"t", "phi"};
    for (std::size_t k = 1; k <= dist.atoms.size(); ++k) {
      header.push_back("price_atom_" + std::to_string(k));
    }
    for (std::size_t k = 1; k <= dist.atoms.size(); ++k) {
      header.push_back("ea_atom_" + std::to_string(k));
    }
    CsvWriter csv(out_path(opt, cfg.payload, "path"), header);
    for (int t = 0; t <= horizon; ++t) {
      const std::size_t s = static_cast<std::size_t>(t);
      std::vector<double> row{static_cast<double>(t), sol.phi[s]};
      for (const auto& a : sol.atoms) row.push_back(a.price[s]);
      for (const auto& a : sol.atoms) row.push_back(a.ea[s]);
      csv.row(row);
    }
    res.outputs.push_back(out_path(opt, cfg.payload, "path"));
  }

  std::string extra;
  if (pop.contains("sample")) {
    const int nsample = pop.at("sample").at("n").get<int>();
    const std::uint64_t seed =
        opt.seed.value_or(pop.at("sample").at("seed").get<std::uint64_t>());
    const auto idx = sample_zone_indices(dist, nsample, seed);
    std::vector<std::vector<double>> ea;
    ea.reserve(idx.size());
    for (std::size_t k : idx) ea.push_back(sol.atoms[k].ea);
    const NashGap gap = nash_epsilon(sol.phi, ea, shared.at("rho").get<double>());
    double max_mu = 0.0;
    for (double m : gap.mu) max_mu = std::max(max_mu, m);
    extra = fmt(" sample_n=%d epsilon=%.6g max_mu=%.6g", nsample, gap.epsilon, max_mu);
  }
  res.summary = fmt("population: atoms=%zu iterations=%d resid_delta=%.3g resid_phi=%.3g%s",
                    dist.atoms.size(), sol.iterations, sol.resid_delta, sol.resid_phi,
                    extra.c_str());
  return res;
}

RunResult run_nash_sweep(const ExperimentConfig& cfg, const RunOptions& opt) {
  const json& shared = cfg.payload.at("shared");
  const json& pop = cfg.payload.at("population");
  const PopulationDistribution dist = population_from_json(pop);
  const double rho = shared.at("rho").get<double>();
  const PopulationSolution sol = large_population_phi(
      dist, pop.at("w").get<double>(), rho, shared.at("b").get<double>(),
      shared.at("a0").get<double>(), shared.at("horizon").get<int>(),
      cfg.payload.at("tol").get<double>(), cfg.payload.at("max_iter").get<int>());
  const std::uint64_t seed = opt.seed.value_or(cfg.payload.at("seed").get<std::uint64_t>());

  RunResult res;
  CsvWriter nash_csv(out_path(opt, cfg.payload, "nash"), {"N", "epsilon_N"});
  CsvWriter dev_csv(out_path(opt, cfg.payload, "deviation"), {"N", "max_abs_dev"});
  std::string summary = "nash-sweep:";
  for (const auto& nj : cfg.payload.at("sample_sizes")) {
    const int n = nj.get<int>();
    const auto idx = sample_zone_indices(dist, n, seed);
    std::vector<std::vector<double>> ea;
    ea.reserve(idx.size());
    for (std::size_t k : idx) ea.push_back(sol.atoms[k].ea);
    const NashGap gap = nash_epsilon(sol.phi, ea, rho);
    double max_mu = 0.0;
    for (double m : gap.mu) max_mu = std::max(max_mu, m);
    nash_csv.row(std::vector<double>{static_cast<double>(n), gap.epsilon});
    dev_csv.row(std::vector<double>{static_cast<double>(n), max_mu});
    summary += fmt(" N=%d:eps=%.4g", n, gap.epsilon);
  }
  res.outputs.push_back(out_path(opt, cfg.payload, "nash"));
  res.outputs.push_back(out_path(opt, cfg.payload, "deviation"));
  res.summary = summary;
  return res;
}

RunResult run_simulate(const ExperimentConfig& cfg, const RunOptions& opt) {
  const ZoneParams params = scenario_from_json(cfg.payload.at("scenario"));
  const std::string policy = cfg.payload.at("policy").get<std::string>();
  std::vector<double> price;
  if (policy == "plan") {
    price = solve_delta_fixed_point(params).price;
  } else {
    price = read_policy_csv(policy, params.horizon);
  }
  const int reps = cfg.payload.at("reps").get<int>();
  const std::uint64_t seed = opt.seed.value_or(cfg.payload.at("seed").get<std::uint64_t>());
  const DelayModel delay = cfg.payload.at("delay_model").get<std::string>() == "uniform"
                               ? DelayModel::kUniform
                               : DelayModel::kDeterministic;
  const RolloutStats stats = monte_carlo(params, price, reps, seed, opt.threads, delay);

  RunResult res;
  CsvWriter csv(out_path(opt, cfg.payload, "stats"),
                {"t", "mean_age", "stderr_age", "mean_age_sq", "accept_rate"});
  for (int t = 0; t <= params.horizon; ++t) {
    const std::size_t s = static_cast<std::size_t>(t);
    csv.row(std::vector<double>{static_cast<double>(t), stats.mean_age[s], stats.stderr_age[s],
                                stats.mean_age_sq[s],
                                static_cast<double>(stats.accept_count[s]) / reps});
  }
  res.outputs.push_back(out_path(opt, cfg.payload, "stats"));
  res.summary = fmt("simulate: reps=%d seed=%llu mean_cost=%.6g", reps,
                    static_cast<unsigned long long>(seed), stats.mean_cost);
  return res;
}

RunResult run_oracle(const ExperimentConfig& cfg, const RunOptions& opt) {
  ZoneParams params = scenario_from_json(cfg.payload.at("scenario"));
  const double tau = cfg.payload.at("tau").get<double>();
  const double cap = cfg.payload.at("max_candidates").get<double>();
  const std::string compare = cfg.payload.at("compare").get<std::string>();

  json out;
  out["tau"] = tau;
  out["max_candidates"] = cap;
  out["results"] = json::array();
  std::string summary = "oracle:";
  for (const auto& tj : cfg.payload.at("horizons")) {
    params.horizon = tj.get<int>();
    std::vector<double> comparison;
    if (compare == "plan") {
      comparison = solve_delta_fixed_point(params).price;
    } else {
      comparison = read_policy_csv(compare, params.horizon);
    }
    const OracleResult r = exhaustive_oracle(params, tau, comparison, cap, opt.threads);
    json item;
    item["horizon"] = params.horizon;
    item["best_cost"] = r.best_cost;
    item["comparison_cost"] = r.comparison_cost;
    item["gap"] = r.gap;
    item["relative_gap"] = r.gap / r.best_cost;
    item["best_price"] = r.best_price;
    out["results"].push_back(item);
    summary += fmt(" T=%d:relgap=%.4g", params.horizon, r.gap / r.best_cost);
  }

  const auto file = out_path(opt, cfg.payload, "json");
  std::ofstream stream(file);
  if (!stream) throw ValidationError({"output: cannot open " + file.string()});
  stream << out.dump(2) << '\n';

  RunResult res;
  res.outputs.push_back(file);
  res.summary = summary;
  return res;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  std::filesystem::create_directories(options.out_dir);
  switch (config.kind) {
    case ExperimentKind::kSingleZone: return run_single_zone(config, options);
    case ExperimentKind::kSteadyState: return run_steady_state(config, options);
    case ExperimentKind::kGapSweep: return run_gap_sweep(config, options);
    case ExperimentKind::kMeanField: return run_mean_field(config, options);
    case ExperimentKind::kPopulation: return run_population(config, options);
    case ExperimentKind::kNashSweep: return run_nash_sweep(config, options);
    case ExperimentKind::kSimulate: return run_simulate(config, options);
    case ExperimentKind::kOracle: return run_oracle(config, options);
  }
  throw ValidationError({"experiment: unknown kind"});
}

std::vector<double> read_policy_csv(const std::filesystem::path& path, int horizon) {
  std::ifstream in(path);
  if (!in) throw ValidationError({"policy: cannot open " + path.string()});
  std::string line;
  if (!std::getline(in, line)) throw ValidationError({"policy: empty file " + path.string()});

  // locate the `price` column
  int price_col = -1;
  {
    std::stringstream header(line);
    std::string cell;
    int col = 0;
    while (std::getline(header, cell, ',')) {
      if (cell == "price") price_col = col;
      ++col;
    }
  }
  if (price_col < 0) throw ValidationError({"policy: no `price` column in " + path.string()});

  std::vector<double> price;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    for (int col = 0; col <= price_col; ++col) {
      if (!std::getline(row, cell, ',')) {
        throw ValidationError({"policy: short row in " + path.string()});
      }
    }
    price.push_back(std::stod(cell));
  }
  if (price.size() != static_cast<std::size_t>(horizon) + 1) {
    throw ValidationError({"policy: expected " + std::to_string(horizon + 1) + " rows, got " +
                           std::to_string(price.size())});
  }
  return price;
}

}  // namespace aoi
