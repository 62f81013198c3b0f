#include "aoi/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "aoi/errors.hpp"
#include "aoi/rng.hpp"
#include "aoi/threads.hpp"

namespace aoi {

namespace {

void check_prices(const ZoneParams& params, std::span<const double> price) {
  if (price.size() != static_cast<std::size_t>(params.horizon) + 1) {
    throw ValidationError({"price: length must be horizon + 1"});
  }
  for (double p : price) {
    if (!(p >= 0.0 && p <= params.b)) {
      throw ValidationError({"price: entries must lie in [0, b]"});
    }
  }
}

}  // namespace

Rollout rollout(const ZoneParams& params, std::span<const double> price, std::uint64_t seed,
                DelayModel delay) {
  check_prices(params, price);
  SplitMix64 rng(seed);
  const std::size_t slots = static_cast<std::size_t>(params.horizon) + 1;

  Rollout out;
  out.age.resize(slots);
  out.accepted.assign(slots, 0);
  out.age[0] = params.a_init;
  double rt = 1.0;
  for (int t = 0; t <= params.horizon; ++t) {
    const std::size_t i = static_cast<std::size_t>(t);
    double paid = 0.0;
    bool accepted = false;
    double next_age = out.age[i] + 1.0;
    if (rng.bernoulli(params.alpha)) {
      const double pi = params.cost.inverse_cdf(rng.next_double());
      if (pi <= price[i]) {
        accepted = true;
        paid = price[i];
        next_age = (delay == DelayModel::kUniform) ? rng.next_double() * 2.0 * params.a0
                                                   : params.a0;
      }
    }
    out.accepted[i] = accepted ? 1 : 0;
    out.cost += rt * (out.age[i] * out.age[i] + paid);
    rt *= params.rho;
    if (t < params.horizon) out.age[i + 1] = next_age;
  }
  return out;
}

RolloutStats monte_carlo(const ZoneParams& params, std::span<const double> price,
                         int replications, std::uint64_t base_seed, int threads,
                         DelayModel delay) {
  if (replications < 1) throw ValidationError({"replications: must be >= 1"});
  check_prices(params, price);

  const std::size_t slots = static_cast<std::size_t>(params.horizon) + 1;
  constexpr int kBlock = 1024;  // fixed block size keeps reduction order stable
  const int blocks = (replications + kBlock - 1) / kBlock;

  struct Partial {
    std::vector<double> sum_age, sum_sq;
    std::vector<std::int64_t> accepts;
    double sum_cost = 0.0;
  };
  std::vector<Partial> partials(static_cast<std::size_t>(blocks));

  std::atomic<int> next_block{0};
  auto work = [&]() {
    for (;;) {
      const int blk = next_block.fetch_add(1);
      if (blk >= blocks) return;
      Partial part;
      part.sum_age.assign(slots, 0.0);
      part.sum_sq.assign(slots, 0.0);
      part.accepts.assign(slots, 0);
      const int lo = blk * kBlock;
      const int hi = std::min(replications, lo + kBlock);
      for (int r = lo; r < hi; ++r) {
        const Rollout roll = rollout(params, price, base_seed + static_cast<std::uint64_t>(r),
                                     delay);
        for (std::size_t t = 0; t < slots; ++t) {
          part.sum_age[t] += roll.age[t];
          part.sum_sq[t] += roll.age[t] * roll.age[t];
          part.accepts[t] += roll.accepted[t];
        }
        part.sum_cost += roll.cost;
      }
      partials[static_cast<std::size_t>(blk)] = std::move(part);
    }
  };

  const int workers = std::min(worker_count(threads), blocks);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  std::vector<double> sum_age(slots, 0.0), sum_sq(slots, 0.0);
  std::vector<std::int64_t> accepts(slots, 0);
  double sum_cost = 0.0;
  for (const auto& part : partials) {
    for (std::size_t t = 0; t < slots; ++t) {
      sum_age[t] += part.sum_age[t];
      sum_sq[t] += part.sum_sq[t];
      accepts[t] += part.accepts[t];
    }
    sum_cost += part.sum_cost;
  }

  RolloutStats stats;
  stats.replications = replications;
  stats.mean_age.resize(slots);
  stats.stderr_age.resize(slots);
  stats.mean_age_sq.resize(slots);
  stats.accept_count = std::move(accepts);
  const double r = static_cast<double>(replications);
  for (std::size_t t = 0; t < slots; ++t) {
    stats.mean_age[t] = sum_age[t] / r;
    stats.mean_age_sq[t] = sum_sq[t] / r;
    if (replications > 1) {
      const double var = std::max(0.0, (sum_sq[t] - r * stats.mean_age[t] * stats.mean_age[t]) /
                                           (r - 1.0));
      stats.stderr_age[t] = std::sqrt(var / r);
    } else {
      stats.stderr_age[t] = 0.0;
    }
  }
  stats.mean_cost = sum_cost / r;
  return stats;
}

namespace {

struct OracleContext {
  const ZoneParams* params;
  std::vector<double> grid;        // candidate prices
  std::vector<double> accept;      // alpha * p / b per grid point
  std::vector<double> pay;         // alpha * p^2 / b per grid point
  std::vector<double> rho_pow;     // rho^t, t = 0..T
  int horizon;
};

struct Candidate {
  double cost = 0.0;
  std::vector<int> seq;  // grid indices for t = 0..T-1
  bool valid = false;
};

// (cost, lexicographic sequence) order; strict improvement only.
bool better(const Candidate& a, const Candidate& b) {
  if (!b.valid) return a.valid;
  if (!a.valid) return false;
  if (a.cost != b.cost) return a.cost < b.cost;
  return a.seq < b.seq;
}

// Depth-first over suffix slots with running (age, cost) state. Prunes only
// when the partial cost strictly exceeds the incumbent, so every candidate
// tied with the optimum still reaches a leaf and the lexicographic tie rule
// stays exact.
void dfs(const OracleContext& ctx, int depth, double ea, double partial,
         std::vector<int>& prefix, std::atomic<double>& incumbent, Candidate& best) {
  if (partial > incumbent.load(std::memory_order_relaxed)) return;
  if (depth == ctx.horizon) {
    const double total = partial + ctx.rho_pow[static_cast<std::size_t>(depth)] * ea * ea;
    if (!best.valid || total < best.cost) {
      best.valid = true;
      best.cost = total;
      best.seq = prefix;
      double cur = incumbent.load(std::memory_order_relaxed);
      while (total < cur &&
             !incumbent.compare_exchange_weak(cur, total, std::memory_order_relaxed)) {
      }
    }
    return;
  }
  const double rt = ctx.rho_pow[static_cast<std::size_t>(depth)];
  const double a0 = ctx.params->a0;
  for (std::size_t g = 0; g < ctx.grid.size(); ++g) {
    const double stage = rt * (ea * ea + ctx.pay[g]);
    const double next_ea = ea - (ea - a0) * ctx.accept[g] + (1.0 - ctx.accept[g]);
    prefix.push_back(static_cast<int>(g));
    dfs(ctx, depth + 1, next_ea, partial + stage, prefix, incumbent, best);
    prefix.pop_back();
  }
}

}  // namespace

OracleResult exhaustive_oracle(const ZoneParams& params, double tau,
                               std::span<const double> comparison, double max_candidates,
                               int threads) {
  if (!(tau > 0.0)) throw ValidationError({"tau: must be > 0"});
  check_prices(params, comparison);

  OracleContext ctx;
  ctx.params = &params;
  ctx.horizon = params.horizon;
  for (int i = 0;; ++i) {
    const double p = tau * i;
    if (p > params.b + 1e-12) break;
    ctx.grid.push_back(std::min(p, params.b));
  }
  if (ctx.grid.back() < params.b - 1e-12) ctx.grid.push_back(params.b);
  for (double p : ctx.grid) {
    ctx.accept.push_back(params.alpha * p / params.b);
    ctx.pay.push_back(params.alpha * p * p / params.b);
  }
  ctx.rho_pow.resize(static_cast<std::size_t>(params.horizon) + 1);
  double rt = 1.0;
  for (int t = 0; t <= params.horizon; ++t) {
    ctx.rho_pow[static_cast<std::size_t>(t)] = rt;
    rt *= params.rho;
  }

  const double count = std::pow(static_cast<double>(ctx.grid.size()), params.horizon);
  if (count > max_candidates) {
    throw ResourceLimitError(
        "exhaustive_oracle: " + std::to_string(count) + " candidate sequences exceed the cap of " +
        std::to_string(max_candidates) + "; reduce the horizon or increase tau");
  }

  const double comparison_cost =
      discounted_cost(params, comparison, age_path_original(params, comparison));

  std::atomic<double> incumbent{comparison_cost};
  const std::size_t first = ctx.grid.size();
  std::vector<Candidate> bests(first);

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t g = next.fetch_add(1);
      if (g >= first) return;
      std::vector<int> prefix;
      prefix.reserve(static_cast<std::size_t>(ctx.horizon));
      prefix.push_back(static_cast<int>(g));
      const double stage = ctx.rho_pow[0] * (params.a_init * params.a_init + ctx.pay[g]);
      const double next_ea =
          params.a_init - (params.a_init - params.a0) * ctx.accept[g] + (1.0 - ctx.accept[g]);
      dfs(ctx, 1, next_ea, stage, prefix, incumbent, bests[g]);
    }
  };

  const int workers = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(worker_count(threads)), first));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  // Ordered reduction: worker slots are indexed by the first price, so the
  // scan below realizes the lexicographic tie rule.
  Candidate best;
  for (auto& cand : bests) {
    if (better(cand, best)) best = std::move(cand);
  }

  OracleResult result;
  result.tau = tau;
  result.comparison_cost = comparison_cost;
  std::vector<double> enum_price;
  if (best.valid) {
    enum_price.assign(static_cast<std::size_t>(params.horizon) + 1, 0.0);
    for (int t = 0; t < params.horizon; ++t) {
      enum_price[static_cast<std::size_t>(t)] =
          ctx.grid[static_cast<std::size_t>(best.seq[static_cast<std::size_t>(t)])];
    }
  }
  const bool enum_wins =
      best.valid && (best.cost < comparison_cost ||
                     (best.cost == comparison_cost &&
                      std::lexicographical_compare(enum_price.begin(), enum_price.end(),
                                                   comparison.begin(), comparison.end())));
  if (enum_wins) {
    result.best_cost = best.cost;
    result.best_price = std::move(enum_price);
  } else {
    // The comparison sequence is itself the minimizer.
    result.best_cost = comparison_cost;
    result.best_price.assign(comparison.begin(), comparison.end());
  }
  result.gap = result.comparison_cost - result.best_cost;
  return result;
}

}  // namespace aoi
