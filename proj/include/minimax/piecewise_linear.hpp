#ifndef MINIMAX_PIECEWISE_LINEAR_HPP_
#define MINIMAX_PIECEWISE_LINEAR_HPP_

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "minimax/errors.hpp"

namespace minimax {

/// Continuous piecewise-linear function given by breakpoints (x_i, y_i) with
/// strictly increasing x. Outside [x_0, x_last] it extends with the first and
/// last segment slopes; a single breakpoint defines a constant.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;

  PiecewiseLinear(std::vector<double> xs, std::vector<double> ys)
      : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.empty() || xs_.size() != ys_.size()) {
      throw InvalidParameter("piecewise-linear function needs matching, nonempty x and y lists");
    }
    for (std::size_t i = 1; i < xs_.size(); ++i) {
      if (!(xs_[i] > xs_[i - 1])) {
        throw InvalidParameter("piecewise-linear breakpoints must be strictly ascending");
      }
    }
  }

  std::span<const double> xs() const { return xs_; }
  std::span<const double> ys() const { return ys_; }
  std::size_t size() const { return xs_.size(); }

  // Slope of segment i, i.e. between breakpoints i and i+1.
  double segment_slope(std::size_t i) const {
    return (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
  }
  double first_slope() const { return xs_.size() < 2 ? 0.0 : segment_slope(0); }
  double last_slope() const { return xs_.size() < 2 ? 0.0 : segment_slope(xs_.size() - 2); }

  // Slope of the piece containing x (right-continuous at breakpoints).
  double slope_at(double x) const {
    if (xs_.size() < 2) return 0.0;
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - xs_.begin());
    if (i == 0) return first_slope();
    if (i >= xs_.size()) return last_slope();
    return segment_slope(i - 1);
  }

  double operator()(double x) const {
    const std::size_t n = xs_.size();
    if (n == 1) return ys_[0];
    if (x <= xs_[0]) return ys_[0] + (x - xs_[0]) * first_slope();
    if (x >= xs_[n - 1]) return ys_[n - 1] + (x - xs_[n - 1]) * last_slope();
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
    const std::size_t lo = hi - 1;
    const double w = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
    return ys_[lo] + w * (ys_[hi] - ys_[lo]);
  }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

}  // namespace minimax

#endif  // MINIMAX_PIECEWISE_LINEAR_HPP_
