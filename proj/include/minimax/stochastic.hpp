#ifndef MINIMAX_STOCHASTIC_HPP_
#define MINIMAX_STOCHASTIC_HPP_

// GBM with unit spot and zero drift: G(t) = exp(sqrt(c) B(t) - c t / 2).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "minimax/errors.hpp"
#include "minimax/normal.hpp"
#include "minimax/parallel.hpp"
#include "minimax/payoff.hpp"
#include "minimax/rng.hpp"
#include "minimax/stats.hpp"

namespace minimax {

struct GbmParams {
  double c = 0.04;
  std::size_t n_steps = 1;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(c > 0.0) || !std::isfinite(c)) throw InvalidParameter("c must be > 0");
    if (n_steps < 1) throw InvalidParameter("n_steps must be >= 1");
  }
};

/// Prices S_0..S_n with S_0 = 1.
struct DiscretePath {
  std::vector<double> values;

  std::size_t steps() const { return values.empty() ? 0 : values.size() - 1; }
  double terminal() const { return values.back(); }

  static DiscretePath constant(std::size_t steps) { return {std::vector<double>(steps + 1, 1.0)}; }
};

inline void check_path(const DiscretePath& path) {
  if (path.values.size() < 2) throw InvalidParameter("path needs at least one step");
  if (path.values.front() != 1.0) throw InvalidParameter("path must start at 1");
  for (double s : path.values) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidParameter("path prices must be positive and finite");
  }
}

/// Largest |S_{m+1} / S_m - 1| along the path.
inline double max_step_ratio(const DiscretePath& path) {
  double worst = 0.0;
  for (std::size_t m = 0; m + 1 < path.values.size(); ++m) {
    worst = std::max(worst, std::abs(path.values[m + 1] / path.values[m] - 1.0));
  }
  return worst;
}

inline bool satisfies_zc(const DiscretePath& path, double zeta) { return max_step_ratio(path) <= zeta; }

namespace detail {

inline void fill_gbm(Rng& rng, double c, std::size_t n, std::vector<double>& out) {
  out.resize(n + 1);
  out[0] = 1.0;
  const double sd = std::sqrt(c / static_cast<double>(n));
  double b = 0.0;  // sqrt(c) B(m / n)
  for (std::size_t m = 1; m <= n; ++m) {
    b += sd * rng.normal();
    out[m] = std::exp(b - 0.5 * c * static_cast<double>(m) / static_cast<double>(n));
  }
}

inline constexpr std::size_t kBlockSize = 4096;

/// Mean of fn(rng) over `samples` draws. Draws are grouped in fixed blocks,
/// block b seeded by stream_seed(seed, b), and the block statistics merged in
/// block order, so the result does not depend on `workers`.
template <class Fn>
RunningStats block_stats(std::size_t samples, std::uint64_t seed, unsigned workers, Fn&& fn) {
  const std::size_t blocks = (samples + kBlockSize - 1) / kBlockSize;
  std::vector<RunningStats> partial(blocks);
  parallel_for(blocks, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t b = begin; b < end; ++b) {
      Rng rng(stream_seed(seed, b));
      const std::size_t count = std::min(kBlockSize, samples - b * kBlockSize);
      for (std::size_t i = 0; i < count; ++i) partial[b].add(fn(rng));
    }
  });
  RunningStats total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

}  // namespace detail

/// One GBM path on n equal steps of [0, 1].
inline DiscretePath sample_gbm(const GbmParams& params) {
  params.validate();
  Rng rng(params.seed);
  DiscretePath path;
  detail::fill_gbm(rng, params.c, params.n_steps, path.values);
  return path;
}

/// E[(G(1) - K)^+] = Phi(d1) - K Phi(d2).
inline double bs_price_closed_form(double strike, double c) {
  if (!(strike > 0.0)) throw InvalidParameter("strike must be > 0 (use the limit 1 for K -> 0)");
  if (!(c > 0.0)) throw InvalidParameter("c must be > 0");
  const double sc = std::sqrt(c);
  const double d1 = (-std::log(strike) + 0.5 * c) / sc;
  const double d2 = d1 - sc;
  return normal_cdf(d1) - strike * normal_cdf(d2);
}

/// E[g(G(1))] for any piecewise-linear g, from
/// g(x) = g(0) + g'(0+) x + sum_k (slope jump at k) (x - k)^+ on x >= 0 and
/// E[G(1)] = 1.
inline double bs_price_closed_form(const PayoffSpec& g, double c) {
  if (!(c > 0.0)) throw InvalidParameter("c must be > 0");
  const PiecewiseLinear f = g.on_nonnegative_axis();
  double price = f(0.0) + f.slope_at(0.0);
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    const double jump = f.segment_slope(i) - f.segment_slope(i - 1);
    if (jump != 0.0) price += jump * bs_price_closed_form(f.xs()[i], c);
  }
  return price;
}

/// Monte Carlo E[g(G(1))] with G(1) = exp(sqrt(c) Z - c / 2).
inline McEstimate bs_price_mc(const PayoffSpec& g, double c, std::size_t samples, std::uint64_t seed,
                              unsigned workers = 1) {
  if (samples < 1) throw InvalidParameter("samples must be >= 1");
  if (!(c > 0.0)) throw InvalidParameter("c must be > 0");
  const double sc = std::sqrt(c);
  const PiecewiseLinear& f = g.function();
  return to_estimate(detail::block_stats(samples, seed, workers, [&](Rng& rng) {
    return f(std::exp(sc * rng.normal() - 0.5 * c));
  }));
}

/// The path itself when every step ratio is within zeta, else the constant
/// path at 1.
inline DiscretePath clip_to_zc(const DiscretePath& path, double zeta) {
  check_path(path);
  if (satisfies_zc(path, zeta)) return path;
  return DiscretePath::constant(path.steps());
}

/// Fraction of n-step GBM paths whose every step ratio is within zeta.
inline McEstimate estimate_zc_violation(double c, std::size_t n, double zeta, std::size_t samples,
                                        std::uint64_t seed, unsigned workers = 1) {
  if (samples < 1) throw InvalidParameter("samples must be >= 1");
  if (n < 1) throw InvalidParameter("n must be >= 1");
  if (!(c > 0.0)) throw InvalidParameter("c must be > 0");
  const double sd = std::sqrt(c / static_cast<double>(n));
  const double drift = -0.5 * c / static_cast<double>(n);
  return to_estimate(detail::block_stats(samples, seed, workers, [&](Rng& rng) {
    bool ok = true;
    // Draw every step even after a violation so each path uses a fixed
    // number of variates.
    for (std::size_t m = 0; m < n; ++m) {
      if (std::abs(std::expm1(sd * rng.normal() + drift)) > zeta) ok = false;
    }
    return ok ? 1.0 : 0.0;
  }));
}

}  // namespace minimax

#endif  // MINIMAX_STOCHASTIC_HPP_
