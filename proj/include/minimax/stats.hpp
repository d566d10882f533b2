#ifndef MINIMAX_STATS_HPP_
#define MINIMAX_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "minimax/errors.hpp"
#include "minimax/normal.hpp"

namespace minimax {

/// Running mean and variance (Welford), mergeable with Chan's update so that
/// a fixed block decomposition gives identical results for any worker count.
class RunningStats {
 public:
  void add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
    min_ = std::min(min_, x);
    max_ = std::max(max_, x);
  }

  void merge(const RunningStats& o) {
    if (o.count_ == 0) return;
    if (count_ == 0) {
      *this = o;
      return;
    }
    const double n = static_cast<double>(count_ + o.count_);
    const double delta = o.mean_ - mean_;
    mean_ += delta * static_cast<double>(o.count_) / n;
    m2_ += o.m2_ + delta * delta * static_cast<double>(count_) * static_cast<double>(o.count_) / n;
    count_ += o.count_;
    min_ = std::min(min_, o.min_);
    max_ = std::max(max_, o.max_);
  }

  std::size_t count() const { return count_; }
  double mean() const { return mean_; }
  // Sample variance with the n - 1 denominator; 0 for fewer than two samples.
  double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }
  double stddev() const { return std::sqrt(variance()); }
  double stderr_of_mean() const {
    return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
  }
  double min() const { return min_; }
  double max() const { return max_; }

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = -std::numeric_limits<double>::infinity();
};

struct McEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

inline McEstimate to_estimate(const RunningStats& s) { return {s.mean(), s.stderr_of_mean(), s.count()}; }

/// Kolmogorov-Smirnov distance sup |F_n - F| between the empirical law of
/// `samples` and Normal(mean, sd^2). Sorts a copy.
inline double ks_distance_normal(std::vector<double> samples, double mean, double sd) {
  if (samples.empty()) throw InvalidParameter("KS distance of an empty sample");
  if (!(sd > 0.0)) throw InvalidParameter("KS reference needs sd > 0");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = normal_cdf((samples[i] - mean) / sd);
    d = std::max(d, std::max(static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n));
  }
  return d;
}

}  // namespace minimax

#endif  // MINIMAX_STATS_HPP_
