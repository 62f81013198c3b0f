#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aoi/single_zone.hpp"

namespace aoi {

// Transmission-delay model for rollouts. The expected-dynamics recursions use
// only the mean a0, so both models validate against them.
enum class DelayModel { kDeterministic, kUniform /* U[0, 2 a0] */ };

struct Rollout {
  std::vector<double> age;        // realized age, age[0] = a_init
  std::vector<std::uint8_t> accepted;  // per-slot acceptance indicator
  double cost = 0.0;              // sum_t rho^t (age^2 + paid price)
};

// One seeded trajectory of the true age process under an open-loop price
// path. Draw order per slot: arrival uniform; on arrival a cost uniform
// (mapped through the inverse CDF); on acceptance a delay uniform when the
// delay model is stochastic. Identical (params, price, seed) reproduce the
// path bit for bit.
Rollout rollout(const ZoneParams& params, std::span<const double> price, std::uint64_t seed,
                DelayModel delay = DelayModel::kDeterministic);

struct RolloutStats {
  int replications = 0;
  std::vector<double> mean_age;      // per-slot mean realized age
  std::vector<double> stderr_age;    // per-slot standard error of the mean
  std::vector<double> mean_age_sq;   // per-slot mean of age^2
  std::vector<std::int64_t> accept_count;
  double mean_cost = 0.0;            // mean realized discounted cost
};

// Aggregates `replications` rollouts with seeds base_seed .. base_seed+R-1.
// Replications are processed in fixed-size blocks reduced in block order, so
// the result is independent of the worker count.
RolloutStats monte_carlo(const ZoneParams& params, std::span<const double> price,
                         int replications, std::uint64_t base_seed, int threads = 0,
                         DelayModel delay = DelayModel::kDeterministic);

struct OracleResult {
  double tau = 0.0;
  std::vector<double> best_price;  // best_price[horizon] = 0
  double best_cost = 0.0;
  double comparison_cost = 0.0;
  double gap = 0.0;  // comparison_cost - best_cost, >= 0 by construction
};

// Exhaustive minimization of the discounted objective over open-loop price
// sequences on the grid {0, tau, 2 tau, ..., b} with the terminal price
// forced to zero, evaluated through the original nonlinear expected
// dynamics. The supplied comparison sequence enters the candidate set, so
// best_cost <= comparison_cost always. Candidate count is capped by
// max_candidates (ResourceLimitError beyond it). Enumeration uses
// depth-first search with an incumbent bound, which prunes only strictly
// worse prefixes; ties resolve to the lexicographically smallest sequence
// regardless of the worker count.
OracleResult exhaustive_oracle(const ZoneParams& params, double tau,
                               std::span<const double> comparison,
                               double max_candidates = 1e8, int threads = 0);

}  // namespace aoi
