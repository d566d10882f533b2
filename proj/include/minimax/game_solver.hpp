#ifndef MINIMAX_GAME_SOLVER_HPP_
#define MINIMAX_GAME_SOLVER_HPP_

// Backward induction for the discrete pricing game. Against a martingale the
// investor's trades have zero expected gain, so the game value reduces to
// Nature's problem sup E[g(S_n)] over martingales whose step ratios T satisfy
// |T| <= zeta and E[T^2 | past] = exp(c/n) - 1. Unwinding round by round gives
//
//   V_n(s) = g(s),   V_{m-1}(s) = sup_T E[V_m(s (1 + T))],
//
// where each sup is the one-step moment problem of moment_solver.hpp.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "minimax/errors.hpp"
#include "minimax/moment_solver.hpp"
#include "minimax/parallel.hpp"
#include "minimax/payoff.hpp"

namespace minimax {

struct ZetaRule {
  enum class Kind { power, fixed };
  Kind kind = Kind::power;
  double param = 0.25;  // delta for power, zeta itself for fixed

  static ZetaRule power(double delta) { return {Kind::power, delta}; }
  static ZetaRule fixed(double zeta) { return {Kind::fixed, zeta}; }

  // zeta_n = n^(-1/2 + delta) or the fixed value.
  double operator()(int n) const {
    return kind == Kind::power ? std::pow(static_cast<double>(n), -0.5 + param) : param;
  }
};

struct GameConfig {
  int n = 1;
  double c = 0.04;
  ZetaRule zeta_rule = ZetaRule::power(0.25);
  std::size_t grid_size = 1025;
  // Price-grid bounds; unset means the default window (see default_price_bounds).
  std::optional<double> s_min;
  std::optional<double> s_max;
  std::size_t lp_grid_size = 513;
  unsigned workers = 1;

  double zeta() const { return zeta_rule(n); }
  // Saturated per-step second moment exp(c/n) - 1.
  double step_variance() const { return std::expm1(c / n); }
  bool feasible() const { return step_variance() <= zeta() * zeta(); }
  // n zeta_n^2 / log n > 16 c; false for n = 1 where log n = 0.
  bool zeta_condition() const {
    if (n < 2) return false;
    return n * zeta() * zeta() / std::log(static_cast<double>(n)) > 16.0 * c;
  }

  void validate() const {
    if (n < 1) throw InvalidParameter("n must be >= 1");
    if (!(c > 0.0) || !std::isfinite(c)) throw InvalidParameter("c must be > 0");
    if (zeta_rule.kind == ZetaRule::Kind::power && !(zeta_rule.param > 0.0 && zeta_rule.param < 0.5)) {
      throw InvalidParameter("power zeta rule needs 0 < delta < 1/2");
    }
    if (zeta_rule.kind == ZetaRule::Kind::fixed && !(zeta_rule.param > 0.0)) {
      throw InvalidParameter("explicit zeta must be > 0");
    }
    if (grid_size < 3) throw InvalidParameter("grid_size must be >= 3");
    if (!feasible()) {
      std::ostringstream os;
      os.precision(17);
      os << "infeasible game: exp(c/n) - 1 = " << step_variance() << " > zeta_n^2 = " << zeta() * zeta()
         << " (n = " << n << ", c = " << c << ", zeta_n = " << zeta() << ")";
      throw InfeasibleError(os.str());
    }
  }
};

/// Default price window in log space: the reachability envelope
/// [(1 - zeta)^n / 1.05, (1 + zeta)^n * 1.05] intersected with
/// [-w, w], w = max(8 sqrt(c), 3 zeta). Beyond the window the value function
/// is continued linearly (exact for payoffs that are affine in the tails).
inline std::pair<double, double> default_log_bounds(int n, double c, double zeta) {
  const double margin = std::log(1.05);
  const double w = std::max(8.0 * std::sqrt(c), 3.0 * zeta);
  double lo = zeta < 1.0 ? n * std::log1p(-zeta) - margin : -w;
  double hi = n * std::log1p(zeta) + margin;
  lo = std::max(lo, -w);
  hi = std::min(hi, w);
  return {lo, hi};
}

/// Geometric price grid s_k = exp((k - origin) h) with s_origin = 1 exactly.
class PriceGrid {
 public:
  PriceGrid() = default;

  static PriceGrid from_log_bounds(double log_lo, double log_hi, std::size_t size) {
    if (size < 3) throw InvalidParameter("price grid needs at least 3 points");
    if (!(log_lo < 0.0 && log_hi > 0.0)) throw ExtentError("price grid must contain the start price 1");
    PriceGrid g;
    g.size_ = size;
    g.h_ = (log_hi - log_lo) / static_cast<double>(size - 1);
    auto origin = static_cast<long>(std::lround(-log_lo / g.h_));
    origin = std::clamp<long>(origin, 1, static_cast<long>(size) - 2);
    g.origin_ = static_cast<std::size_t>(origin);
    g.prices_.resize(size);
    for (std::size_t k = 0; k < size; ++k) g.prices_[k] = std::exp(g.log_price(k));
    g.prices_[g.origin_] = 1.0;
    return g;
  }

  // Rebuilds a grid from stored parts (deserialisation).
  static PriceGrid from_parts(double log_step, std::size_t origin, std::vector<double> prices) {
    if (prices.size() < 3 || origin == 0 || origin + 1 >= prices.size() || !(log_step > 0.0)) {
      throw InvalidParameter("inconsistent price grid");
    }
    PriceGrid g;
    g.size_ = prices.size();
    g.h_ = log_step;
    g.origin_ = origin;
    g.prices_ = std::move(prices);
    return g;
  }

  std::size_t size() const { return size_; }
  double log_step() const { return h_; }
  std::size_t origin() const { return origin_; }
  double log_price(std::size_t k) const {
    return (static_cast<double>(k) - static_cast<double>(origin_)) * h_;
  }
  double price(std::size_t k) const { return prices_[k]; }
  const std::vector<double>& prices() const { return prices_; }
  double min_price() const { return prices_.front(); }
  double max_price() const { return prices_.back(); }

  bool contains(double s) const {
    return s >= prices_.front() * (1.0 - 1e-12) && s <= prices_.back() * (1.0 + 1e-12);
  }

  // Nearest node in log space.
  std::size_t nearest(double s) const {
    if (!(s > 0.0) || !contains(s)) {
      std::ostringstream os;
      os << "price " << s << " outside grid [" << min_price() << ", " << max_price() << "]";
      throw ExtentError(os.str());
    }
    const double pos = std::log(s) / h_ + static_cast<double>(origin_);
    return static_cast<std::size_t>(std::clamp<long>(std::lround(pos), 0, static_cast<long>(size_) - 1));
  }

  // Left node index j of the cell [s_j, s_{j+1}] containing s, clamped so that
  // s outside the grid maps to the end cells (linear continuation).
  std::size_t cell(double s) const {
    auto it = std::upper_bound(prices_.begin(), prices_.end(), s);
    long j = static_cast<long>(it - prices_.begin()) - 1;
    return static_cast<std::size_t>(std::clamp<long>(j, 0, static_cast<long>(size_) - 2));
  }

 private:
  std::size_t size_ = 0;
  double h_ = 0.0;
  std::size_t origin_ = 0;
  std::vector<double> prices_;
};

/// Linear interpolation in s of nodal values, continued linearly beyond the
/// end cells.
inline double interpolate_extended(const PriceGrid& grid, const std::vector<double>& values, double s) {
  const std::size_t j = grid.cell(s);
  const double s0 = grid.price(j), s1 = grid.price(j + 1);
  const double w = (s - s0) / (s1 - s0);
  return values[j] + w * (values[j + 1] - values[j]);
}

/// Up to three atoms, stored inline.
struct CompactLaw {
  std::array<Atom, 3> atoms{};
  std::uint8_t count = 0;

  static CompactLaw from(const FiniteLaw& law) {
    CompactLaw out;
    for (const auto& a : law.atoms) {
      if (out.count == 3) throw Error("law with more than three atoms cannot be stored compactly");
      out.atoms[out.count++] = a;
    }
    return out;
  }
  FiniteLaw expand(double zeta, double v) const {
    FiniteLaw law{{atoms.begin(), atoms.begin() + count}, zeta, v};
    return law;
  }
  // Inverse-CDF draw from u in [0, 1).
  double draw(double u) const {
    double acc = 0.0;
    for (std::uint8_t i = 0; i + 1 < count; ++i) {
      acc += atoms[i].p;
      if (u < acc) return atoms[i].t;
    }
    return atoms[count - 1].t;
  }
};

/// Nature's optimal transition law for every stage m = 1..n and grid node.
struct AdversaryPolicy {
  int n = 0;
  double c = 0.0;
  double zeta = 0.0;
  double v = 0.0;
  PriceGrid grid;
  std::vector<CompactLaw> laws;  // index (m - 1) * grid.size() + k

  const CompactLaw& compact(int m, std::size_t k) const {
    return laws[static_cast<std::size_t>(m - 1) * grid.size() + k];
  }
  FiniteLaw law(int m, std::size_t k) const { return compact(m, k).expand(zeta, v); }
};

struct ValueFunctionView {
  int stage;
  const PriceGrid& grid;
  const std::vector<double>& values;
};

struct GameSolution {
  GameConfig config;
  double zeta = 0.0;
  double v = 0.0;
  PriceGrid grid;
  std::vector<std::vector<double>> values;  // values[m][k], m = 0..n
  AdversaryPolicy policy;
  double value = 0.0;                       // V_0(1)

  ValueFunctionView value_function(int m) const {
    return {m, grid, values.at(static_cast<std::size_t>(m))};
  }
};

namespace detail {

/// f(t) = V(s_k (1 + t)) for a fixed node k, as a piecewise-linear function of
/// t whose breakpoints are the grid nodes falling inside (-zeta, zeta).
class NodeObjective {
 public:
  NodeObjective(const PriceGrid& grid, const std::vector<double>& values, std::size_t node,
                const std::vector<double>& offsets)
      : grid_(grid), values_(values), s_(grid.price(node)), offsets_(offsets) {}

  double operator()(double t) const { return interpolate_extended(grid_, values_, s_ * (1.0 + t)); }
  double slope_at(double t) const {
    const std::size_t j = grid_.cell(s_ * (1.0 + t));
    return s_ * (values_[j + 1] - values_[j]) / (grid_.price(j + 1) - grid_.price(j));
  }
  std::span<const double> xs() const { return offsets_; }

 private:
  const PriceGrid& grid_;
  const std::vector<double>& values_;
  double s_;
  const std::vector<double>& offsets_;
};

inline void assert_convex(const PriceGrid& grid, const std::vector<double>& v, int stage) {
  for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
    const double s0 = grid.price(k - 1), s1 = grid.price(k), s2 = grid.price(k + 1);
    const double chord = ((s2 - s1) * v[k - 1] + (s1 - s0) * v[k + 1]) / (s2 - s0);
    const double excess = v[k] - chord;
    if (excess > 1e-9 * std::max(1.0, std::abs(v[k]))) {
      std::ostringstream os;
      os.precision(17);
      os << "value function at stage " << stage << " is not convex at node " << k << " (s = " << s1
         << "): V = " << v[k] << " exceeds the chord " << chord << " by " << excess
         << "; neighbours V(" << s0 << ") = " << v[k - 1] << ", V(" << s2 << ") = " << v[k + 1];
      throw ConvexityError(os.str());
    }
  }
}

}  // namespace detail

/// Solves the game by backward induction; returns V_0(1), every V_m and
/// Nature's optimal law at every (stage, node).
inline GameSolution solve_game(const GameConfig& config, const PayoffSpec& g) {
  config.validate();
  if (auto bad = validate(g)) throw InvalidParameter("payoff rejected: " + bad.message);

  GameSolution sol;
  sol.config = config;
  sol.zeta = config.zeta();
  sol.v = config.step_variance();
  const int n = config.n;
  const double zeta = sol.zeta;
  const double v = sol.v;

  auto [log_lo, log_hi] = default_log_bounds(n, config.c, zeta);
  if (config.s_min) {
    if (!(*config.s_min > 0.0)) throw InvalidParameter("s_min must be > 0");
    log_lo = std::log(*config.s_min);
  }
  if (config.s_max) log_hi = std::log(*config.s_max);
  // For zeta >= 1 a step can reach 0, which no log grid contains; the first
  // cell is then continued linearly down to 0.
  const bool lower_ok = zeta >= 1.0 || log_lo <= std::log1p(-zeta);
  if (!(lower_ok && log_hi >= std::log1p(zeta))) {
    throw ExtentError("price grid does not bracket one step s (1 +- zeta_n) around the start price");
  }
  sol.grid = PriceGrid::from_log_bounds(log_lo, log_hi, config.grid_size);
  const PriceGrid& grid = sol.grid;
  const std::size_t nodes = grid.size();

  // Breakpoints of every node objective in t: s_{k+i} / s_k - 1 = expm1(i h).
  std::vector<double> offsets;
  const double h = grid.log_step();
  for (long i = -static_cast<long>(nodes); i <= static_cast<long>(nodes); ++i) {
    const double t = std::expm1(static_cast<double>(i) * h);
    if (t > -zeta && t < zeta) offsets.push_back(t);
  }
  const std::vector<double> lp_grid = moment_grid(v, zeta, config.lp_grid_size, offsets);

  sol.values.assign(static_cast<std::size_t>(n) + 1, std::vector<double>(nodes));
  for (std::size_t k = 0; k < nodes; ++k) sol.values[n][k] = g.function()(grid.price(k));

  sol.policy.n = n;
  sol.policy.c = config.c;
  sol.policy.zeta = zeta;
  sol.policy.v = v;
  sol.policy.grid = grid;
  sol.policy.laws.resize(static_cast<std::size_t>(n) * nodes);

  for (int m = n; m >= 1; --m) {
    const std::vector<double>& next = sol.values[m];
    std::vector<double>& cur = sol.values[m - 1];
    parallel_for(nodes, config.workers, [&](std::size_t begin, std::size_t end) {
      std::vector<double> column_values(lp_grid.size());
      for (std::size_t k = begin; k < end; ++k) {
        const detail::NodeObjective f(grid, next, k, offsets);
        for (std::size_t j = 0; j < lp_grid.size(); ++j) column_values[j] = f(lp_grid[j]);
        const MomentSolution ms = solve_piecewise_linear(f, v, zeta, lp_grid, column_values, true);
        cur[k] = ms.value;
        sol.policy.laws[static_cast<std::size_t>(m - 1) * nodes + k] = CompactLaw::from(ms.law);
      }
    });
    detail::assert_convex(grid, cur, m - 1);
  }
  sol.value = sol.values[0][grid.origin()];
  return sol;
}

/// V_m(s) by linear interpolation in s; throws ExtentError off the grid.
inline double value_at(const GameSolution& sol, int m, double s) {
  if (m < 0 || m > sol.config.n) throw InvalidParameter("stage out of range");
  if (!sol.grid.contains(s)) {
    std::ostringstream os;
    os << "price " << s << " outside value-function grid [" << sol.grid.min_price() << ", "
       << sol.grid.max_price() << "]";
    throw ExtentError(os.str());
  }
  return interpolate_extended(sol.grid, sol.values[static_cast<std::size_t>(m)], s);
}

struct RefinementEstimate {
  double value_coarse = 0.0;
  double value_fine = 0.0;
  double gap = 0.0;  // |fine - coarse|
};

/// Re-solves with (grid_size - 1) * r + 1 nodes on the same window and
/// reports the change in V_0(1) as a discretisation-error estimate.
inline RefinementEstimate refine_and_estimate_error(const GameConfig& config, const PayoffSpec& g, int r) {
  if (r < 2) throw InvalidParameter("refinement factor must be >= 2");
  const GameSolution coarse = solve_game(config, g);
  GameConfig fine_cfg = config;
  fine_cfg.grid_size = (config.grid_size - 1) * static_cast<std::size_t>(r) + 1;
  fine_cfg.s_min = coarse.grid.min_price();
  fine_cfg.s_max = coarse.grid.max_price();
  const GameSolution fine = solve_game(fine_cfg, g);
  return {coarse.value, fine.value, std::abs(fine.value - coarse.value)};
}

}  // namespace minimax

#endif  // MINIMAX_GAME_SOLVER_HPP_
