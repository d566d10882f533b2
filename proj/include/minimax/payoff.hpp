#ifndef MINIMAX_PAYOFF_HPP_
#define MINIMAX_PAYOFF_HPP_

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "minimax/errors.hpp"
#include "minimax/piecewise_linear.hpp"

namespace minimax {

enum class PayoffKind { call, put, generic };

inline const char* to_string(PayoffKind k) {
  switch (k) {
    case PayoffKind::call: return "call";
    case PayoffKind::put: return "put";
    case PayoffKind::generic: return "generic";
  }
  return "?";
}

/// Convex, L-Lipschitz terminal payoff g on [0, inf). Every payoff is stored
/// as a piecewise-linear function; calls and puts keep their strike so that
/// closed-form pricing and delta hedging can recognise them.
class PayoffSpec {
 public:
  PayoffSpec(PayoffKind kind, double strike, double lipschitz, PiecewiseLinear fn)
      : kind_(kind), strike_(strike), lipschitz_(lipschitz), fn_(std::move(fn)) {}

  PayoffKind kind() const { return kind_; }
  // Meaningful for call and put only.
  double strike() const { return strike_; }
  double lipschitz() const { return lipschitz_; }
  const PiecewiseLinear& function() const { return fn_; }

  double operator()(double x) const {
    if (x < 0.0 || std::isnan(x)) throw DomainError("payoff evaluated at negative price");
    return fn_(x);
  }

  // g restricted to x >= 0 with the breakpoint list starting at 0. Any
  // breakpoint left of 0 is dropped; g(0) becomes the first breakpoint.
  PiecewiseLinear on_nonnegative_axis() const {
    std::vector<double> xs{0.0};
    std::vector<double> ys{fn_(0.0)};
    for (std::size_t i = 0; i < fn_.size(); ++i) {
      if (fn_.xs()[i] > 0.0) {
        xs.push_back(fn_.xs()[i]);
        ys.push_back(fn_.ys()[i]);
      }
    }
    if (xs.size() == 1) {
      xs.push_back(1.0);
      ys.push_back(fn_(1.0));
    }
    return {std::move(xs), std::move(ys)};
  }

  // True when g is affine on [0, inf).
  bool is_affine() const {
    const auto g = on_nonnegative_axis();
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
      if (std::abs(g.segment_slope(i) - g.segment_slope(0)) > 1e-15) return false;
    }
    return true;
  }

 private:
  PayoffKind kind_;
  double strike_;
  double lipschitz_;
  PiecewiseLinear fn_;
};

inline PayoffSpec make_call(double strike) {
  if (!(strike >= 0.0) || !std::isfinite(strike)) throw InvalidParameter("call strike must be >= 0");
  if (strike == 0.0) return {PayoffKind::call, 0.0, 1.0, PiecewiseLinear({0.0, 1.0}, {0.0, 1.0})};
  return {PayoffKind::call, strike, 1.0,
          PiecewiseLinear({0.0, strike, strike + 1.0}, {0.0, 0.0, 1.0})};
}

inline PayoffSpec make_put(double strike) {
  if (!(strike >= 0.0) || !std::isfinite(strike)) throw InvalidParameter("put strike must be >= 0");
  if (strike == 0.0) return {PayoffKind::put, 0.0, 1.0, PiecewiseLinear({0.0, 1.0}, {0.0, 0.0})};
  return {PayoffKind::put, strike, 1.0,
          PiecewiseLinear({0.0, strike, strike + 1.0}, {strike, 0.0, 0.0})};
}

/// Generic payoff through breakpoints. When `lipschitz` is absent the smallest
/// valid constant (largest absolute slope) is used.
inline PayoffSpec make_generic(std::vector<double> xs, std::vector<double> ys,
                               std::optional<double> lipschitz = std::nullopt) {
  PiecewiseLinear fn(std::move(xs), std::move(ys));
  double lip = 0.0;
  for (std::size_t i = 0; i + 1 < fn.size(); ++i) lip = std::max(lip, std::abs(fn.segment_slope(i)));
  if (lipschitz) {
    if (!(*lipschitz >= 0.0)) throw InvalidParameter("Lipschitz constant must be >= 0");
    lip = *lipschitz;
  }
  return {PayoffKind::generic, 0.0, lip, std::move(fn)};
}

inline PayoffSpec make_identity() { return make_generic({0.0, 1.0}, {0.0, 1.0}); }

inline PayoffSpec make_constant(double value) {
  return make_generic({0.0, 1.0}, {value, value}, 0.0);
}

struct PayoffViolation {
  enum class Kind { none, nonconvex, slope_exceeds_lipschitz, negative_value };
  Kind kind = Kind::none;
  std::string message;
  explicit operator bool() const { return kind != Kind::none; }
};

/// Checks convexity, the Lipschitz bound (including the extrapolation slopes)
/// and nonnegativity on [0, inf). Returns the first violation found.
inline PayoffViolation validate(const PayoffSpec& g) {
  constexpr double tol = 1e-12;
  const PiecewiseLinear f = g.on_nonnegative_axis();
  std::vector<double> slopes;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) slopes.push_back(f.segment_slope(i));
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    if (std::abs(slopes[i]) > g.lipschitz() + tol) {
      std::ostringstream os;
      os << "slope " << slopes[i] << " on [" << f.xs()[i] << ", " << f.xs()[i + 1]
         << "] exceeds L = " << g.lipschitz();
      return {PayoffViolation::Kind::slope_exceeds_lipschitz, os.str()};
    }
    if (i > 0 && slopes[i] < slopes[i - 1] - tol) {
      std::ostringstream os;
      os << "slopes decrease at x = " << f.xs()[i] << " (" << slopes[i - 1] << " then " << slopes[i]
         << "): not convex";
      return {PayoffViolation::Kind::nonconvex, os.str()};
    }
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.ys()[i] < -tol) {
      std::ostringstream os;
      os << "g(" << f.xs()[i] << ") = " << f.ys()[i] << " is negative";
      return {PayoffViolation::Kind::negative_value, os.str()};
    }
  }
  // A negative final slope would drive g below zero eventually.
  if (!slopes.empty() && slopes.back() < -tol) {
    return {PayoffViolation::Kind::negative_value, "final slope is negative; g becomes negative"};
  }
  return {};
}

/// Loads a generic payoff from a two-column CSV "x,g" with a header row.
inline PayoffSpec load_payoff_csv(const std::string& path, std::optional<double> lipschitz = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open payoff CSV '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InvalidParameter("payoff CSV '" + path + "' is empty");
  std::vector<double> xs, ys;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b)) {
      throw InvalidParameter(path + ":" + std::to_string(lineno) + ": expected two columns x,g");
    }
    try {
      xs.push_back(std::stod(a));
      ys.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw InvalidParameter(path + ":" + std::to_string(lineno) + ": non-numeric field");
    }
    if (xs.size() > 1 && !(xs.back() > xs[xs.size() - 2])) {
      throw InvalidParameter(path + ":" + std::to_string(lineno) + ": x must be strictly ascending");
    }
  }
  if (xs.empty()) throw InvalidParameter("payoff CSV '" + path + "' has no data rows");
  return make_generic(std::move(xs), std::move(ys), lipschitz);
}

}  // namespace minimax

#endif  // MINIMAX_PAYOFF_HPP_
