#include "aoi/mean_field.hpp"

#include <cmath>
#include <string>

#include "aoi/errors.hpp"
#include "aoi/rng.hpp"

namespace aoi {

namespace {

// Shared core of solve_mean_field and large_population_phi: the phi update
// is a mass-weighted average of the per-zone ages (uniform 1/N masses for the
// exact-population mode).
struct WeightedZone {
  double alpha, a_init, w, mass;
};

struct CoreResult {
  std::vector<ZonePlan> zones;
  std::vector<double> phi;
  int iterations = 0;
  double resid_delta = 0.0, resid_phi = 0.0;
  std::vector<std::vector<double>> delta_trace, phi_trace;
};

CoreResult solve_core(const std::vector<WeightedZone>& zones, double rho, double b, double a0,
                      int horizon, double tol, int max_iter, bool keep_traces) {
  const std::size_t n = zones.size();
  const std::size_t slots = static_cast<std::size_t>(horizon) + 1;

  std::vector<double> deltas(n, 0.0);
  std::vector<double> phi(slots, 0.0);
  for (const auto& z : zones) phi[0] += z.mass * z.a_init;

  CoreResult out;
  if (keep_traces) {
    out.delta_trace.push_back(deltas);
    out.phi_trace.push_back(std::vector<double>(phi.begin() + 1, phi.end()));
  }

  std::vector<PricedPath> paths(n);
  auto pass = [&](const std::vector<double>& ds, const std::vector<double>& ph) {
    for (std::size_t i = 0; i < n; ++i) {
      auto coeffs = riccati_backward(horizon, rho, b, zones[i].alpha, ds[i], zones[i].w, ph);
      paths[i] = priced_forward(horizon, rho, b, zones[i].alpha, ds[i], zones[i].a_init, coeffs);
    }
  };

  double e1 = 0.0, e2 = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    pass(deltas, phi);

    std::vector<double> next_d(n);
    for (std::size_t i = 0; i < n; ++i) {
      next_d[i] = discounted_time_average(paths[i].ea, rho, horizon, a0);
    }
    std::vector<double> next_phi = phi;
    for (std::size_t t = 1; t < slots; ++t) {
      double avg = 0.0;
      for (std::size_t i = 0; i < n; ++i) avg += zones[i].mass * paths[i].ea[t];
      next_phi[t] = avg;
    }

    e1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) e1 += std::fabs(next_d[i] - deltas[i]);
    e2 = 0.0;
    for (std::size_t t = 1; t < slots; ++t) e2 += std::fabs(next_phi[t] - phi[t]);

    deltas = std::move(next_d);
    phi = std::move(next_phi);
    if (keep_traces) {
      out.delta_trace.push_back(deltas);
      out.phi_trace.push_back(std::vector<double>(phi.begin() + 1, phi.end()));
    }

    if (e1 <= tol && e2 <= tol) {
      // Consistency pass: plans stored in the solution are those induced by
      // the returned estimators.
      out.zones.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        auto coeffs =
            riccati_backward(horizon, rho, b, zones[i].alpha, deltas[i], zones[i].w, phi);
        auto path =
            priced_forward(horizon, rho, b, zones[i].alpha, deltas[i], zones[i].a_init, coeffs);
        out.zones[i] = ZonePlan{deltas[i], std::move(coeffs.q), std::move(coeffs.m),
                                std::move(path.price), std::move(path.ea)};
      }
      out.phi = std::move(phi);
      out.iterations = it;
      out.resid_delta = e1;
      out.resid_phi = e2;
      return out;
    }
  }
  throw ConvergenceError("mean-field fixed point did not converge after " +
                             std::to_string(max_iter) +
                             " iterations (resid_delta=" + std::to_string(e1) +
                             ", resid_phi=" + std::to_string(e2) + ")",
                         e1 + e2);
}

}  // namespace

void MultiZoneScenario::validate() const {
  std::vector<std::string> bad;
  if (zones.empty()) bad.push_back("zones: must contain at least one zone");
  for (std::size_t i = 0; i < zones.size(); ++i) {
    const auto& z = zones[i];
    const std::string tag = "zones[" + std::to_string(i) + "].";
    if (!(z.alpha > 0.0 && z.alpha <= 1.0)) bad.push_back(tag + "alpha: must be in (0, 1]");
    if (!(z.a_init >= 0.0)) bad.push_back(tag + "a_init: must be >= 0");
    if (!(z.w >= 0.0 && z.w <= 1.0)) bad.push_back(tag + "w: must be in [0, 1]");
  }
  if (!(rho > 0.0 && rho <= 1.0)) bad.push_back("rho: must be in (0, 1]");
  if (!(b > 0.0)) bad.push_back("b: must be > 0");
  if (!(a0 >= 0.0 && a0 < 1.0)) bad.push_back("a0: must be in [0, 1)");
  if (horizon < 1) bad.push_back("horizon: must be >= 1");
  if (!(tol > 0.0)) bad.push_back("tol: must be > 0");
  if (max_iter < 1) bad.push_back("max_iter: must be >= 1");
  if (!bad.empty()) throw ValidationError(std::move(bad));
}

double marginal_arrival_rate(
    const std::vector<std::pair<std::vector<int>, double>>& joint_pmf, std::size_t zone_index) {
  std::vector<std::string> bad;
  if (joint_pmf.empty()) bad.push_back("joint_pmf: must be non-empty");
  double total = 0.0;
  double marginal = 0.0;
  const std::size_t width = joint_pmf.empty() ? 0 : joint_pmf.front().first.size();
  for (std::size_t k = 0; k < joint_pmf.size(); ++k) {
    const auto& [tuple, prob] = joint_pmf[k];
    const std::string tag = "joint_pmf[" + std::to_string(k) + "]";
    if (tuple.size() != width) bad.push_back(tag + ": inconsistent tuple length");
    if (prob < 0.0) bad.push_back(tag + ": negative probability");
    for (int s : tuple) {
      if (s != 0 && s != 1) {
        bad.push_back(tag + ": indicators must be 0 or 1");
        break;
      }
    }
    total += prob;
    if (zone_index < tuple.size() && tuple[zone_index] == 1) marginal += prob;
  }
  if (width <= zone_index) bad.push_back("zone_index: out of range for pmf tuples");
  if (std::fabs(total - 1.0) > 1e-9) {
    bad.push_back("joint_pmf: probabilities sum to " + std::to_string(total) + ", expected 1");
  }
  if (!bad.empty()) throw ValidationError(std::move(bad));
  return marginal;
}

CoeffPaths mf_backward_coeffs(const MultiZoneScenario& scenario, std::size_t zone_index,
                              double delta, std::span<const double> phi) {
  const auto& z = scenario.zones.at(zone_index);
  return riccati_backward(scenario.horizon, scenario.rho, scenario.b, z.alpha, delta, z.w, phi);
}

PricedPath mf_price_and_age(const MultiZoneScenario& scenario, std::size_t zone_index,
                            double delta, const CoeffPaths& coeffs) {
  const auto& z = scenario.zones.at(zone_index);
  return priced_forward(scenario.horizon, scenario.rho, scenario.b, z.alpha, delta, z.a_init,
                        coeffs);
}

MeanFieldSolution solve_mean_field(const MultiZoneScenario& scenario) {
  scenario.validate();
  std::vector<WeightedZone> zones;
  zones.reserve(scenario.zones.size());
  const double mass = 1.0 / static_cast<double>(scenario.zones.size());
  for (const auto& z : scenario.zones) zones.push_back({z.alpha, z.a_init, z.w, mass});

  auto core = solve_core(zones, scenario.rho, scenario.b, scenario.a0, scenario.horizon,
                         scenario.tol, scenario.max_iter, /*keep_traces=*/true);
  MeanFieldSolution out;
  out.zones = std::move(core.zones);
  out.phi = std::move(core.phi);
  out.iterations = core.iterations;
  out.resid_delta = core.resid_delta;
  out.resid_phi = core.resid_phi;
  out.delta_trace = std::move(core.delta_trace);
  out.phi_trace = std::move(core.phi_trace);
  return out;
}

OriginalEval evaluate_original_mf(const MultiZoneScenario& scenario,
                                  const MeanFieldSolution& solution) {
  const std::size_t n = scenario.zones.size();
  const std::size_t slots = static_cast<std::size_t>(scenario.horizon) + 1;
  OriginalEval out;
  out.ea_orig.resize(n);
  out.average.assign(slots, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& z = scenario.zones[i];
    const auto& price = solution.zones[i].price;
    auto& ea = out.ea_orig[i];
    ea.resize(slots);
    ea[0] = z.a_init;
    for (int t = 0; t < scenario.horizon; ++t) {
      const std::size_t s = static_cast<std::size_t>(t);
      const double accept = z.alpha * price[s] / scenario.b;
      ea[s + 1] = ea[s] - (ea[s] - scenario.a0) * accept + (1.0 - accept);
    }
    for (std::size_t s = 0; s < slots; ++s) out.average[s] += ea[s] / static_cast<double>(n);
  }
  out.max_dev = 0.0;
  for (std::size_t s = 0; s < slots; ++s) {
    out.max_dev = std::max(out.max_dev, std::fabs(solution.phi[s] - out.average[s]));
  }
  return out;
}

double zone_cost(const MultiZoneScenario& scenario, std::size_t zone_index,
                 std::span<const double> price,
                 const std::vector<std::vector<double>>& all_ea) {
  const auto& z = scenario.zones.at(zone_index);
  const std::size_t n = all_ea.size();
  double cost = 0.0;
  double rt = 1.0;
  for (int t = 0; t <= scenario.horizon; ++t) {
    const std::size_t s = static_cast<std::size_t>(t);
    double avg = 0.0;
    for (std::size_t j = 0; j < n; ++j) avg += all_ea[j][s] / static_cast<double>(n);
    const double age_term = z.w * all_ea[zone_index][s] + (1.0 - z.w) * avg;
    cost += rt * (age_term * age_term + z.alpha * price[s] * price[s] / scenario.b);
    rt *= scenario.rho;
  }
  return cost;
}

void PopulationDistribution::validate() const {
  std::vector<std::string> bad;
  if (atoms.empty()) bad.push_back("atoms: must be non-empty");
  double total = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const auto& a = atoms[k];
    const std::string tag = "atoms[" + std::to_string(k) + "].";
    if (!(a.alpha > 0.0 && a.alpha <= 1.0)) bad.push_back(tag + "alpha: must be in (0, 1]");
    if (!(a.a_init >= 0.0)) bad.push_back(tag + "a_init: must be >= 0");
    if (a.mass < 0.0) bad.push_back(tag + "mass: must be >= 0");
    total += a.mass;
  }
  if (!atoms.empty() && std::fabs(total - 1.0) > 1e-12) {
    bad.push_back("atoms: masses sum to " + std::to_string(total) + ", expected 1");
  }
  if (!bad.empty()) throw ValidationError(std::move(bad));
}

PopulationSolution large_population_phi(const PopulationDistribution& dist, double w,
                                        double rho, double b, double a0, int horizon,
                                        double tol, int max_iter) {
  dist.validate();
  std::vector<std::string> bad;
  if (!(w >= 0.0 && w <= 1.0)) bad.push_back("w: must be in [0, 1]");
  if (!(rho > 0.0 && rho <= 1.0)) bad.push_back("rho: must be in (0, 1]");
  if (!(b > 0.0)) bad.push_back("b: must be > 0");
  if (!(a0 >= 0.0 && a0 < 1.0)) bad.push_back("a0: must be in [0, 1)");
  if (horizon < 1) bad.push_back("horizon: must be >= 1");
  if (!bad.empty()) throw ValidationError(std::move(bad));

  std::vector<WeightedZone> zones;
  zones.reserve(dist.atoms.size());
  for (const auto& a : dist.atoms) zones.push_back({a.alpha, a.a_init, w, a.mass});

  auto core = solve_core(zones, rho, b, a0, horizon, tol, max_iter, /*keep_traces=*/false);
  PopulationSolution out;
  out.atoms = std::move(core.zones);
  out.phi = std::move(core.phi);
  out.iterations = core.iterations;
  out.resid_delta = core.resid_delta;
  out.resid_phi = core.resid_phi;
  return out;
}

std::vector<std::size_t> sample_zone_indices(const PopulationDistribution& dist, int n,
                                             std::uint64_t seed) {
  dist.validate();
  std::vector<double> cum;
  cum.reserve(dist.atoms.size());
  double acc = 0.0;
  for (const auto& a : dist.atoms) {
    acc += a.mass;
    cum.push_back(acc);
  }
  SplitMix64 rng(seed);
  std::vector<std::size_t> idx(static_cast<std::size_t>(n));
  for (auto& i : idx) {
    const double u = rng.next_double();
    std::size_t k = 0;
    while (k + 1 < cum.size() && u >= cum[k]) ++k;
    i = k;
  }
  return idx;
}

NashGap nash_epsilon(std::span<const double> phi,
                     const std::vector<std::vector<double>>& zone_ea, double rho) {
  NashGap out;
  out.mu.resize(phi.size());
  double sum = 0.0;
  double rt = 1.0;
  for (std::size_t t = 0; t < phi.size(); ++t) {
    double avg = 0.0;
    for (const auto& ea : zone_ea) avg += ea[t] / static_cast<double>(zone_ea.size());
    out.mu[t] = std::fabs(phi[t] - avg);
    sum += rt * out.mu[t] * out.mu[t];
    rt *= rho;
  }
  out.epsilon = std::sqrt(sum);
  return out;
}

}  // namespace aoi
