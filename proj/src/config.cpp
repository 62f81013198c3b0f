#include "aoi/config.hpp"

#include <cmath>
#include <fstream>

#include "aoi/errors.hpp"

namespace aoi {

namespace {

using nlohmann::json;

// Accumulates field errors while normalizing a payload in place.
struct Checker {
  std::vector<std::string> errors;

  void fail(const std::string& field, const std::string& why) {
    errors.push_back(field + ": " + why);
  }

  double number(json& obj, const std::string& field, const std::string& path,
                std::optional<double> def = std::nullopt) {
    if (!obj.contains(field)) {
      if (def) {
        obj[field] = *def;
        return *def;
      }
      fail(path + field, "missing");
      return 0.0;
    }
    if (!obj[field].is_number()) {
      fail(path + field, "must be a number");
      return 0.0;
    }
    return obj[field].get<double>();
  }

  long long integer(json& obj, const std::string& field, const std::string& path,
                    std::optional<long long> def = std::nullopt) {
    if (!obj.contains(field)) {
      if (def) {
        obj[field] = *def;
        return *def;
      }
      fail(path + field, "missing");
      return 0;
    }
    if (!obj[field].is_number_integer()) {
      fail(path + field, "must be an integer");
      return 0;
    }
    return obj[field].get<long long>();
  }

  void range(double v, double lo, double hi, const std::string& field, bool lo_open = false,
             bool hi_open = false) {
    const bool ok = (lo_open ? v > lo : v >= lo) && (hi_open ? v < hi : v <= hi);
    if (!ok) {
      fail(field, "out of range");
    }
  }
};

void normalize_cost(Checker& c, json& scenario, double b) {
  if (!scenario.contains("cost")) scenario["cost"] = json{{"kind", "uniform"}};
  json& cost = scenario["cost"];
  if (!cost.is_object()) {
    c.fail("scenario.cost", "must be an object");
    return;
  }
  const std::string kind = cost.value("kind", "");
  if (cost.contains("b")) {
    if (!cost["b"].is_number() || cost["b"].get<double>() != b) {
      c.fail("scenario.cost.b", "must equal scenario b when present");
    }
  } else {
    cost["b"] = b;
  }
  if (kind == "uniform") {
    // no extra parameters
  } else if (kind == "truncated_normal") {
    c.number(cost, "mu", "scenario.cost.");
    const double sigma = c.number(cost, "sigma", "scenario.cost.");
    if (sigma <= 0.0) c.fail("scenario.cost.sigma", "must be > 0");
  } else if (kind == "linear") {
    c.number(cost, "a1", "scenario.cost.");
    c.number(cost, "a2", "scenario.cost.");
  } else {
    c.fail("scenario.cost.kind", "must be uniform, truncated_normal or linear");
  }
}

void normalize_scenario(Checker& c, json& payload, bool rho_strict = false) {
  if (!payload.contains("scenario") || !payload["scenario"].is_object()) {
    c.fail("scenario", "missing object");
    return;
  }
  json& s = payload["scenario"];
  const double alpha = c.number(s, "alpha", "scenario.");
  const double b = c.number(s, "b", "scenario.");
  const double rho = c.number(s, "rho", "scenario.");
  const double a0 = c.number(s, "a0", "scenario.", 0.0);
  const double a_init = c.number(s, "a_init", "scenario.", 0.0);
  const long long horizon = c.integer(s, "horizon", "scenario.");
  const double tol = c.number(s, "tol", "scenario.", 1e-3);
  const long long max_iter = c.integer(s, "max_iter", "scenario.", 10000);
  c.range(alpha, 0.0, 1.0, "scenario.alpha", /*lo_open=*/true);
  if (!(b > 0.0)) c.fail("scenario.b", "must be > 0");
  c.range(rho, 0.0, 1.0, "scenario.rho", /*lo_open=*/true, /*hi_open=*/rho_strict);
  c.range(a0, 0.0, 1.0, "scenario.a0", false, /*hi_open=*/true);
  if (!(a_init >= 0.0)) c.fail("scenario.a_init", "must be >= 0");
  if (horizon < 1) c.fail("scenario.horizon", "must be >= 1");
  if (!(tol > 0.0)) c.fail("scenario.tol", "must be > 0");
  if (max_iter < 1) c.fail("scenario.max_iter", "must be >= 1");
  if (b > 0.0) normalize_cost(c, s, b);
}

void normalize_shared(Checker& c, json& payload) {
  if (!payload.contains("shared") || !payload["shared"].is_object()) {
    c.fail("shared", "missing object");
    return;
  }
  json& s = payload["shared"];
  const double rho = c.number(s, "rho", "shared.");
  const double b = c.number(s, "b", "shared.");
  const double a0 = c.number(s, "a0", "shared.", 0.0);
  const long long horizon = c.integer(s, "horizon", "shared.");
  c.range(rho, 0.0, 1.0, "shared.rho", true);
  if (!(b > 0.0)) c.fail("shared.b", "must be > 0");
  c.range(a0, 0.0, 1.0, "shared.a0", false, true);
  if (horizon < 1) c.fail("shared.horizon", "must be >= 1");
}

void normalize_zones(Checker& c, json& payload) {
  if (!payload.contains("zones") || !payload["zones"].is_array() || payload["zones"].empty()) {
    c.fail("zones", "must be a non-empty array");
    return;
  }
  std::size_t i = 0;
  for (json& z : payload["zones"]) {
    const std::string path = "zones[" + std::to_string(i) + "].";
    const double alpha = c.number(z, "alpha", path);
    const double a_init = c.number(z, "a_init", path, 0.0);
    const double w = c.number(z, "w", path, 1.0);
    c.range(alpha, 0.0, 1.0, path + "alpha", true);
    if (!(a_init >= 0.0)) c.fail(path + "a_init", "must be >= 0");
    c.range(w, 0.0, 1.0, path + "w");
    ++i;
  }
}

void normalize_population(Checker& c, json& payload) {
  if (!payload.contains("population") || !payload["population"].is_object()) {
    c.fail("population", "missing object");
    return;
  }
  json& pop = payload["population"];
  const double w = c.number(pop, "w", "population.", 1.0);
  c.range(w, 0.0, 1.0, "population.w");

  if (pop.contains("grid")) {
    json& grid = pop["grid"];
    for (const char* axis : {"alpha", "a_init"}) {
      if (!grid.contains(axis) || !grid[axis].is_object()) {
        c.fail(std::string("population.grid.") + axis, "missing object");
        continue;
      }
      const std::string path = std::string("population.grid.") + axis + ".";
      c.number(grid[axis], "min", path);
      c.number(grid[axis], "max", path);
      const long long count = c.integer(grid[axis], "count", path);
      if (count < 1) c.fail(path + "count", "must be >= 1");
    }
    // expand to atoms so downstream code sees one representation
    if (c.errors.empty()) {
      const auto& ga = grid["alpha"];
      const auto& gi = grid["a_init"];
      const long long na = ga["count"].get<long long>();
      const long long ni = gi["count"].get<long long>();
      json atoms = json::array();
      for (long long i = 0; i < na; ++i) {
        const double alpha =
            na == 1 ? ga["min"].get<double>()
                    : ga["min"].get<double>() + (ga["max"].get<double>() - ga["min"].get<double>()) *
                                                    static_cast<double>(i) / static_cast<double>(na - 1);
        for (long long k = 0; k < ni; ++k) {
          const double a_init =
              ni == 1 ? gi["min"].get<double>()
                      : gi["min"].get<double>() +
                            (gi["max"].get<double>() - gi["min"].get<double>()) *
                                static_cast<double>(k) / static_cast<double>(ni - 1);
          atoms.push_back({{"alpha", alpha}, {"a_init", a_init},
                           {"mass", 1.0 / static_cast<double>(na * ni)}});
        }
      }
      pop["atoms"] = atoms;
      pop.erase("grid");
    }
  }

  if (!pop.contains("atoms") || !pop["atoms"].is_array() || pop["atoms"].empty()) {
    c.fail("population.atoms", "must be a non-empty array (or provide population.grid)");
    return;
  }
  double total = 0.0;
  std::size_t k = 0;
  for (json& a : pop["atoms"]) {
    const std::string path = "population.atoms[" + std::to_string(k) + "].";
    const double alpha = c.number(a, "alpha", path);
    const double a_init = c.number(a, "a_init", path, 0.0);
    const double mass = c.number(a, "mass", path);
    c.range(alpha, 0.0, 1.0, path + "alpha", true);
    if (!(a_init >= 0.0)) c.fail(path + "a_init", "must be >= 0");
    if (!(mass >= 0.0)) c.fail(path + "mass", "must be >= 0");
    total += mass;
    ++k;
  }
  if (std::fabs(total - 1.0) > 1e-12) c.fail("population.atoms", "masses must sum to 1");

  if (pop.contains("sample")) {
    json& sam = pop["sample"];
    const long long n = c.integer(sam, "n", "population.sample.");
    const long long seed = c.integer(sam, "seed", "population.sample.", 0);
    if (n < 1) c.fail("population.sample.n", "must be >= 1");
    if (seed < 0) c.fail("population.sample.seed", "must be >= 0");
  }
}

void normalize_solver(Checker& c, json& payload) {
  const double tol = c.number(payload, "tol", "", 1e-3);
  const long long max_iter = c.integer(payload, "max_iter", "", 10000);
  if (!(tol > 0.0)) c.fail("tol", "must be > 0");
  if (max_iter < 1) c.fail("max_iter", "must be >= 1");
}

void default_output(json& payload, const std::string& key, const std::string& value) {
  if (!payload.contains("outputs")) payload["outputs"] = json::object();
  if (!payload["outputs"].contains(key)) payload["outputs"][key] = value;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kSingleZone: return "single-zone";
    case ExperimentKind::kSteadyState: return "steady-state";
    case ExperimentKind::kGapSweep: return "gap-sweep";
    case ExperimentKind::kMeanField: return "mean-field";
    case ExperimentKind::kPopulation: return "population";
    case ExperimentKind::kNashSweep: return "nash-sweep";
    case ExperimentKind::kSimulate: return "simulate";
    case ExperimentKind::kOracle: return "oracle";
  }
  return "?";
}

std::optional<ExperimentKind> kind_from_string(const std::string& name) {
  for (ExperimentKind k :
       {ExperimentKind::kSingleZone, ExperimentKind::kSteadyState, ExperimentKind::kGapSweep,
        ExperimentKind::kMeanField, ExperimentKind::kPopulation, ExperimentKind::kNashSweep,
        ExperimentKind::kSimulate, ExperimentKind::kOracle}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError({"config: cannot open " + path.string()});
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError({"config: " + path.string() + ": " + e.what()});
  }
  return parse(j);
}

ExperimentConfig ExperimentConfig::parse(const json& input) {
  Checker c;
  if (!input.is_object()) throw ValidationError({"config: must be a JSON object"});
  json j = input;

  const std::string kind_name = j.value("experiment", "");
  auto kind = kind_from_string(kind_name);
  if (!kind) {
    throw ValidationError({"experiment: unknown kind '" + kind_name + "'"});
  }
  j.erase("experiment");

  // The combined multi-zone shape: mode "population" routes to that kind.
  if (*kind == ExperimentKind::kMeanField && j.value("mode", "exact") == "population") {
    kind = ExperimentKind::kPopulation;
  }
  j.erase("mode");

  switch (*kind) {
    case ExperimentKind::kSingleZone:
      normalize_scenario(c, j);
      default_output(j, "path", "path.csv");
      default_output(j, "trace", "trace.csv");
      break;
    case ExperimentKind::kSteadyState: {
      normalize_scenario(c, j, /*rho_strict=*/true);
      const long long t_max = c.integer(j, "t_max", "", 500);
      if (t_max < 1) c.fail("t_max", "must be >= 1");
      default_output(j, "path", "steady_path.csv");
      break;
    }
    case ExperimentKind::kGapSweep: {
      normalize_scenario(c, j, /*rho_strict=*/true);
      if (!j.contains("rhos")) {
        if (j.contains("scenario") && j["scenario"].contains("rho")) {
          j["rhos"] = json::array({j["scenario"]["rho"]});
        }
      }
      if (!j.contains("rhos") || !j["rhos"].is_array() || j["rhos"].empty()) {
        c.fail("rhos", "must be a non-empty array");
      } else {
        for (const auto& r : j["rhos"]) {
          if (!r.is_number() || !(r.get<double>() > 0.0 && r.get<double>() < 1.0)) {
            c.fail("rhos", "entries must lie in (0, 1)");
            break;
          }
        }
      }
      if (!j.contains("horizons") || !j["horizons"].is_array() || j["horizons"].empty()) {
        c.fail("horizons", "must be a non-empty array");
      } else {
        for (const auto& t : j["horizons"]) {
          if (!t.is_number_integer() || t.get<long long>() < 1) {
            c.fail("horizons", "entries must be integers >= 1");
            break;
          }
        }
      }
      default_output(j, "prefix", "gap");
      break;
    }
    case ExperimentKind::kMeanField:
      normalize_shared(c, j);
      normalize_zones(c, j);
      normalize_solver(c, j);
      default_output(j, "path", "mf_path.csv");
      default_output(j, "delta_trace", "mf_delta_trace.csv");
      default_output(j, "phi_trace", "mf_phi_trace.csv");
      default_output(j, "original", "mf_original.csv");
      break;
    case ExperimentKind::kPopulation:
      normalize_shared(c, j);
      normalize_population(c, j);
      normalize_solver(c, j);
      default_output(j, "path", "population_path.csv");
      break;
    case ExperimentKind::kNashSweep: {
      normalize_shared(c, j);
      normalize_population(c, j);
      normalize_solver(c, j);
      if (!j.contains("sample_sizes") || !j["sample_sizes"].is_array() ||
          j["sample_sizes"].empty()) {
        c.fail("sample_sizes", "must be a non-empty array");
      } else {
        for (const auto& n : j["sample_sizes"]) {
          if (!n.is_number_integer() || n.get<long long>() < 1) {
            c.fail("sample_sizes", "entries must be integers >= 1");
            break;
          }
        }
      }
      if (c.integer(j, "seed", "", 0) < 0) c.fail("seed", "must be >= 0");
      default_output(j, "nash", "nash.csv");
      default_output(j, "deviation", "deviation.csv");
      break;
    }
    case ExperimentKind::kSimulate: {
      normalize_scenario(c, j);
      if (!j.contains("policy")) j["policy"] = "plan";
      if (!j["policy"].is_string()) c.fail("policy", "must be 'plan' or a CSV path");
      const long long reps = c.integer(j, "reps", "", 1000);
      if (reps < 1) c.fail("reps", "must be >= 1");
      if (c.integer(j, "seed", "", 0) < 0) c.fail("seed", "must be >= 0");
      const std::string delay = j.value("delay_model", "deterministic");
      if (delay != "deterministic" && delay != "uniform") {
        c.fail("delay_model", "must be deterministic or uniform");
      }
      j["delay_model"] = delay;
      default_output(j, "stats", "stats.csv");
      break;
    }
    case ExperimentKind::kOracle: {
      normalize_scenario(c, j);
      const double tau = c.number(j, "tau", "", 0.05);
      if (!(tau > 0.0)) c.fail("tau", "must be > 0");
      if (!j.contains("horizons")) {
        if (j.contains("scenario") && j["scenario"].contains("horizon")) {
          j["horizons"] = json::array({j["scenario"]["horizon"]});
        }
      }
      if (!j.contains("horizons") || !j["horizons"].is_array() || j["horizons"].empty()) {
        c.fail("horizons", "must be a non-empty array");
      }
      if (!j.contains("compare")) j["compare"] = "plan";
      if (!j["compare"].is_string()) c.fail("compare", "must be 'plan' or a CSV path");
      const double cap = c.number(j, "max_candidates", "", 1e8);
      if (!(cap >= 1.0)) c.fail("max_candidates", "must be >= 1");
      default_output(j, "json", "oracle.json");
      break;
    }
  }

  if (!c.errors.empty()) throw ValidationError(std::move(c.errors));

  ExperimentConfig cfg;
  cfg.kind = *kind;
  cfg.payload = std::move(j);
  return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
  json j = payload;
  j["experiment"] = to_string(kind);
  return j;
}

ZoneParams scenario_from_json(const nlohmann::json& s) {
  const double b = s.at("b").get<double>();
  const json& cost = s.at("cost");
  const std::string kind = cost.at("kind").get<std::string>();
  CostDistribution dist = CostDistribution::uniform(b);
  if (kind == "truncated_normal") {
    dist = CostDistribution::truncated_normal(cost.at("mu").get<double>(),
                                              cost.at("sigma").get<double>(), b);
  } else if (kind == "linear") {
    dist = CostDistribution::linear(cost.at("a1").get<double>(), cost.at("a2").get<double>(), b);
  }
  ZoneParams p = ZoneParams::make(s.at("alpha").get<double>(), b, s.at("rho").get<double>(),
                                  s.at("a0").get<double>(), s.at("a_init").get<double>(),
                                  s.at("horizon").get<int>(), dist);
  p.tol = s.at("tol").get<double>();
  p.max_iter = s.at("max_iter").get<int>();
  return p;
}

MultiZoneScenario multizone_from_json(const nlohmann::json& payload) {
  const nlohmann::json& shared = payload.at("shared");
  MultiZoneScenario sc;
  sc.rho = shared.at("rho").get<double>();
  sc.b = shared.at("b").get<double>();
  sc.a0 = shared.at("a0").get<double>();
  sc.horizon = shared.at("horizon").get<int>();
  sc.tol = payload.at("tol").get<double>();
  sc.max_iter = payload.at("max_iter").get<int>();
  for (const auto& z : payload.at("zones")) {
    sc.zones.push_back(ZoneSpec{z.at("alpha").get<double>(), z.at("a_init").get<double>(),
                                z.at("w").get<double>()});
  }
  sc.validate();
  return sc;
}

PopulationDistribution population_from_json(const nlohmann::json& population) {
  PopulationDistribution dist;
  for (const auto& a : population.at("atoms")) {
    dist.atoms.push_back(PopulationAtom{a.at("alpha").get<double>(),
                                        a.at("a_init").get<double>(),
                                        a.at("mass").get<double>()});
  }
  dist.validate();
  return dist;
}

}  // namespace aoi
