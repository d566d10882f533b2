#ifndef MINIMAX_SIMULATION_HPP_
#define MINIMAX_SIMULATION_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "minimax/errors.hpp"
#include "minimax/game_solver.hpp"
#include "minimax/normal.hpp"
#include "minimax/parallel.hpp"
#include "minimax/payoff.hpp"
#include "minimax/rng.hpp"
#include "minimax/stats.hpp"
#include "minimax/stochastic.hpp"

namespace minimax {

/// Continuous path on [0, 1] through S_m at t = m / n, linear in log S between
/// grid times.
class InterpolatedPath {
 public:
  explicit InterpolatedPath(DiscretePath base) : base_(std::move(base)) { check_path(base_); }

  const DiscretePath& base() const { return base_; }

  double operator()(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("interpolated path evaluated outside [0, 1]");
    const std::size_t n = base_.steps();
    const double pos = t * static_cast<double>(n);
    const double nearest = std::nearbyint(pos);
    if (std::abs(pos - nearest) <= 1e-12 * static_cast<double>(n)) {
      return base_.values[static_cast<std::size_t>(nearest)];
    }
    const auto m = static_cast<std::size_t>(std::floor(pos));
    const double a = pos - static_cast<double>(m);
    return std::exp((1.0 - a) * std::log(base_.values[m]) + a * std::log(base_.values[m + 1]));
  }

 private:
  DiscretePath base_;
};

inline InterpolatedPath interpolate(const DiscretePath& path) { return InterpolatedPath(path); }

/// Investor rule: round m in 1..n, horizon n and the observed prefix
/// S_0..S_{m-1} give the amount Delta_m invested for that round.
struct Strategy {
  using Rule = std::function<double(std::size_t m, std::size_t n, std::span<const double> prefix)>;
  std::string name;
  Rule rule;

  double operator()(std::size_t m, std::size_t n, std::span<const double> prefix) const {
    return rule(m, n, prefix);
  }
};

inline Strategy zero_strategy() {
  return {"zero", [](std::size_t, std::size_t, std::span<const double>) { return 0.0; }};
}

// Delta_m = S_{m-1}: holds one unit of the asset throughout.
inline Strategy buy_and_hold_strategy() {
  return {"buy-and-hold", [](std::size_t, std::size_t, std::span<const double> prefix) { return prefix.back(); }};
}

/// Black-Scholes delta hedge of a call under variance c:
/// Delta_m = S_{m-1} Phi(d1), d1 = (log(S/K) + c tau / 2) / sqrt(c tau),
/// tau = 1 - (m - 1) / n.
inline Strategy bs_delta_strategy(const PayoffSpec& g, double c) {
  if (g.kind() != PayoffKind::call) {
    throw UnsupportedStrategy(std::string("bs-delta hedges calls only, got a ") + to_string(g.kind()) + " payoff");
  }
  if (!(c > 0.0)) throw InvalidParameter("c must be > 0");
  const double strike = g.strike();
  return {"bs-delta", [strike, c](std::size_t m, std::size_t n, std::span<const double> prefix) {
            const double s = prefix.back();
            if (strike == 0.0) return s;
            const double tau = 1.0 - static_cast<double>(m - 1) / static_cast<double>(n);
            const double d1 = (std::log(s / strike) + 0.5 * c * tau) / std::sqrt(c * tau);
            return s * normal_cdf(d1);
          }};
}

inline std::vector<std::string> strategy_names() { return {"zero", "bs-delta", "buy-and-hold"}; }

inline Strategy make_strategy(const std::string& name, const PayoffSpec& g, double c) {
  if (name == "zero") return zero_strategy();
  if (name == "buy-and-hold") return buy_and_hold_strategy();
  if (name == "bs-delta") return bs_delta_strategy(g, c);
  throw UnsupportedStrategy("unknown strategy '" + name + "' (known: zero, bs-delta, buy-and-hold)");
}

/// One adversary path: at each round, the law of the grid node nearest to the
/// current price (in log) drives the step ratio.
inline DiscretePath sample_adversary_path(const AdversaryPolicy& policy, std::uint64_t seed) {
  if (policy.n < 1 || policy.laws.size() != static_cast<std::size_t>(policy.n) * policy.grid.size()) {
    throw InvalidParameter("policy does not cover every stage");
  }
  Rng rng(seed);
  DiscretePath path;
  path.values.resize(static_cast<std::size_t>(policy.n) + 1);
  path.values[0] = 1.0;
  double s = 1.0;
  for (int m = 1; m <= policy.n; ++m) {
    const std::size_t k = policy.grid.nearest(s);
    s *= 1.0 + policy.compact(m, k).draw(rng.uniform());
    path.values[static_cast<std::size_t>(m)] = s;
  }
  return path;
}

/// Calls fn(i, path) for adversary paths i = 0..count-1, path i seeded by
/// stream_seed(seed, i). fn runs concurrently when workers > 1.
template <class Fn>
void for_each_adversary_path(const AdversaryPolicy& policy, std::size_t count, std::uint64_t seed,
                             unsigned workers, Fn&& fn) {
  parallel_for(count, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) fn(i, sample_adversary_path(policy, stream_seed(seed, i)));
  });
}

struct LossRecord {
  double terminal = 0.0;
  double payoff = 0.0;
  double trading_pnl = 0.0;  // sum_m (S_m / S_{m-1} - 1) Delta_m
  double loss = 0.0;         // payoff - trading_pnl
};

/// g(S_n) minus the investor's trading gains on one realised path.
inline LossRecord loss(const Strategy& strategy, const DiscretePath& path, const PayoffSpec& g) {
  const std::size_t n = path.steps();
  if (n < 1) throw InvalidParameter("path needs at least one step");
  LossRecord r;
  const std::span<const double> values(path.values);
  for (std::size_t m = 1; m <= n; ++m) {
    const double delta = strategy(m, n, values.first(m));
    r.trading_pnl += (values[m] / values[m - 1] - 1.0) * delta;
  }
  r.terminal = path.terminal();
  r.payoff = g(r.terminal);
  r.loss = r.payoff - r.trading_pnl;
  return r;
}

struct LossSummary {
  std::string strategy;
  double mean = 0.0;
  double standard_error = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t paths = 0;
  std::vector<LossRecord> records;  // per path, filled on request
};

namespace detail {

inline LossSummary summarize(const std::string& name, std::vector<LossRecord> records, bool keep) {
  RunningStats stats;
  for (const auto& r : records) stats.add(r.loss);
  LossSummary out{name, stats.mean(), stats.stderr_of_mean(), stats.min(), stats.max(), stats.count(), {}};
  if (keep) out.records = std::move(records);
  return out;
}

}  // namespace detail

/// Monte Carlo estimate of E[loss] against the policy's adversary.
inline LossSummary expected_loss(const Strategy& strategy, const AdversaryPolicy& policy, const PayoffSpec& g,
                                 std::size_t paths, std::uint64_t seed, unsigned workers = 1,
                                 bool keep_records = false) {
  if (paths < 1) throw InvalidParameter("paths must be >= 1");
  std::vector<LossRecord> records(paths);
  for_each_adversary_path(policy, paths, seed, workers,
                          [&](std::size_t i, const DiscretePath& p) { records[i] = loss(strategy, p, g); });
  return detail::summarize(strategy.name, std::move(records), keep_records);
}

/// Mean and standard error of loss(a) - loss(b) on shared paths.
inline McEstimate expected_loss_difference(const Strategy& a, const Strategy& b, const AdversaryPolicy& policy,
                                           const PayoffSpec& g, std::size_t paths, std::uint64_t seed,
                                           unsigned workers = 1) {
  if (paths < 1) throw InvalidParameter("paths must be >= 1");
  std::vector<double> diff(paths);
  for_each_adversary_path(policy, paths, seed, workers, [&](std::size_t i, const DiscretePath& p) {
    diff[i] = loss(a, p, g).loss - loss(b, p, g).loss;
  });
  RunningStats stats;
  for (double d : diff) stats.add(d);
  return to_estimate(stats);
}

}  // namespace minimax

#endif  // MINIMAX_SIMULATION_HPP_
