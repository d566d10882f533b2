#ifndef MINIMAX_NORMAL_HPP_
#define MINIMAX_NORMAL_HPP_

#include <cmath>
#include <numbers>

namespace minimax {

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// Phi(x) through erfc so that both tails keep full relative precision.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// 1 - Phi(x), accurate for large positive x.
inline double normal_sf(double x) {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

}  // namespace minimax

#endif  // MINIMAX_NORMAL_HPP_
