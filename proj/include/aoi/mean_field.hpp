#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "aoi/recursions.hpp"

namespace aoi {

struct ZoneSpec {
  double alpha = 1.0;   // per-slot arrival probability, (0, 1]
  double a_init = 0.0;  // initial age, >= 0
  double w = 1.0;       // weight on own age in the weighted-sum objective, [0, 1]
};

// N self-operated zones sharing rho, b, a0 and the horizon; zones differ in
// arrival rate, initial age and weight.
struct MultiZoneScenario {
  std::vector<ZoneSpec> zones;
  double rho = 0.9;
  double b = 1.0;
  double a0 = 0.0;
  int horizon = 1;
  double tol = 1e-3;
  int max_iter = 10000;

  void validate() const;
};

struct ZonePlan {
  double delta = 0.0;
  std::vector<double> q, m;
  std::vector<double> price;  // price[horizon] = 0
  std::vector<double> ea;     // linearized expected age
};

struct MeanFieldSolution {
  std::vector<ZonePlan> zones;
  std::vector<double> phi;  // phi[0..T]; phi[0] is the known average initial age
  int iterations = 0;
  double resid_delta = 0.0;  // sum_i |delta update| at return
  double resid_phi = 0.0;    // sum_t |phi update| at return
  std::vector<std::vector<double>> delta_trace;  // per-iteration estimator values
  std::vector<std::vector<double>> phi_trace;    // per-iteration phi[1..T]
};

// Marginal arrival rate of one zone from a joint pmf over arrival-indicator
// tuples. Throws ValidationError when the pmf does not sum to 1 (+-1e-9),
// has negative mass, inconsistent tuple lengths, or non-binary indicators.
double marginal_arrival_rate(
    const std::vector<std::pair<std::vector<int>, double>>& joint_pmf, std::size_t zone_index);

// Per-zone reverse-time coefficients given that zone's estimator and the
// mean-field path (length T+1).
CoeffPaths mf_backward_coeffs(const MultiZoneScenario& scenario, std::size_t zone_index,
                              double delta, std::span<const double> phi);

// Per-zone forward price/age pass; prices clamped to [0, b], price[T] = 0.
PricedPath mf_price_and_age(const MultiZoneScenario& scenario, std::size_t zone_index,
                            double delta, const CoeffPaths& coeffs);

// Plain joint fixed-point iteration on the per-zone estimators and the
// mean-field path: per-zone backward/forward passes, then delta_i updates
// (discounted time averages) and phi updates (zone average of expected ages).
// Stops when BOTH residual families are <= tol; the returned plans are
// recomputed at the final estimators. Throws ConvergenceError at max_iter.
MeanFieldSolution solve_mean_field(const MultiZoneScenario& scenario);

struct OriginalEval {
  std::vector<std::vector<double>> ea_orig;  // per-zone nonlinear age paths
  std::vector<double> average;               // across-zone average of ea_orig
  double max_dev = 0.0;                      // max_t |phi(t) - average(t)|
};

// Applies given per-zone price paths to the original nonlinear dynamics and
// reports how well phi tracks the realized average age.
OriginalEval evaluate_original_mf(const MultiZoneScenario& scenario,
                                  const MeanFieldSolution& solution);

// Zone i's discounted objective: weighted-sum age penalty (own vs. realized
// zone average) plus expected payments, under supplied paths.
double zone_cost(const MultiZoneScenario& scenario, std::size_t zone_index,
                 std::span<const double> price,
                 const std::vector<std::vector<double>>& all_ea);

// Discrete joint law of (arrival rate, initial age) for the large-population
// limit: weighted atoms with masses summing to 1.
struct PopulationAtom {
  double alpha = 1.0;
  double a_init = 0.0;
  double mass = 1.0;
};

struct PopulationDistribution {
  std::vector<PopulationAtom> atoms;

  void validate() const;
};

struct PopulationSolution {
  std::vector<ZonePlan> atoms;  // one plan per atom type
  std::vector<double> phi;
  int iterations = 0;
  double resid_delta = 0.0;
  double resid_phi = 0.0;
};

// Mean-field fixed point where the phi update is the mass-weighted
// expectation over atom types instead of a finite-zone average. All atoms
// share rho, b, a0, horizon and the weight w.
PopulationSolution large_population_phi(const PopulationDistribution& dist, double w,
                                        double rho, double b, double a0, int horizon,
                                        double tol = 1e-3, int max_iter = 10000);

// Samples n zone types i.i.d. by atom mass (SplitMix64 stream `seed`).
std::vector<std::size_t> sample_zone_indices(const PopulationDistribution& dist, int n,
                                             std::uint64_t seed);

struct NashGap {
  double epsilon = 0.0;    // sqrt(sum_t rho^t mu(t)^2)
  std::vector<double> mu;  // per-slot |phi - population average age|
};

// Distance between the mean-field estimate and the realized average of the
// supplied per-zone age paths, aggregated into the equilibrium gap.
NashGap nash_epsilon(std::span<const double> phi,
                     const std::vector<std::vector<double>>& zone_ea, double rho);

}  // namespace aoi
