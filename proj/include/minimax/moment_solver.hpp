#ifndef MINIMAX_MOMENT_SOLVER_HPP_
#define MINIMAX_MOMENT_SOLVER_HPP_

// Nature's one-step problem: maximise E[f(T)] over laws of T supported in
// [-zeta, zeta] with E[T] = 0 and E[T^2] = v. On a finite candidate grid this
// is a linear program with three equality rows (mass, mean, second moment), so
// every basic solution has at most three atoms and the LP dual is a quadratic
// q(t) = a + b t + cq t^2 lying above f.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "minimax/errors.hpp"
#include "minimax/piecewise_linear.hpp"

namespace minimax {

struct Atom {
  double t;  // step ratio offset S_m / S_{m-1} - 1
  double p;
};

struct FiniteLaw {
  std::vector<Atom> atoms;
  double zeta = 0.0;
  double v = 0.0;

  double total_mass() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.p;
    return s;
  }
  double mean() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.p * a.t;
    return s;
  }
  double second_moment() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.p * a.t * a.t;
    return s;
  }
  template <class F>
  double expect(const F& f) const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.p * f(a.t);
    return s;
  }
};

struct LawViolation {
  std::string message;
  explicit operator bool() const { return !message.empty(); }
};

/// Mass, support, martingale and saturated-variance invariants of a law.
/// `max_atoms` = 0 disables the atom-count check.
inline LawViolation check_law(const FiniteLaw& law, std::size_t max_atoms = 3) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& a : law.atoms) {
    if (!(a.p >= 0.0)) {
      os << "negative probability " << a.p << " at t = " << a.t;
      return {os.str()};
    }
    if (std::abs(a.t) > law.zeta * (1.0 + 1e-12)) {
      os << "atom t = " << a.t << " outside [-zeta, zeta], zeta = " << law.zeta;
      return {os.str()};
    }
  }
  if (std::abs(law.total_mass() - 1.0) > 1e-10) {
    os << "total mass " << law.total_mass() << " != 1";
    return {os.str()};
  }
  if (std::abs(law.mean()) > 1e-10) {
    os << "mean " << law.mean() << " != 0";
    return {os.str()};
  }
  if (std::abs(law.second_moment() - law.v) > 1e-9) {
    os << "second moment " << law.second_moment() << " != v = " << law.v;
    return {os.str()};
  }
  if (max_atoms != 0 && law.atoms.size() > max_atoms) {
    os << law.atoms.size() << " atoms, expected at most " << max_atoms;
    return {os.str()};
  }
  return {};
}

struct DualCertificate {
  double a = 0.0;
  double b = 0.0;
  double cq = 0.0;

  double operator()(double t) const { return a + t * (b + t * cq); }
  // Dual objective a * 1 + b * 0 + cq * v.
  double dual_value(double v) const { return a + cq * v; }
};

struct MomentSolution {
  FiniteLaw law;
  double value = 0.0;
  DualCertificate certificate;
  int pivots = 0;
};

/// Candidate support: {-zeta, -sqrt(v), 0, sqrt(v), zeta}, every breakpoint in
/// (-zeta, zeta) and `uniform_points` evenly spaced points. Sorted; points closer
/// than 1e-10 zeta are merged.
inline std::vector<double> moment_grid(double v, double zeta, std::size_t uniform_points,
                                       std::span<const double> breakpoints = {}) {
  std::vector<double> g;
  g.reserve(uniform_points + breakpoints.size() + 5);
  const double r = std::sqrt(std::max(v, 0.0));
  for (double x : {-zeta, -r, 0.0, r, zeta}) g.push_back(x);
  for (double x : breakpoints) {
    if (x > -zeta && x < zeta) g.push_back(x);
  }
  if (uniform_points >= 2) {
    for (std::size_t i = 0; i < uniform_points; ++i) {
      g.push_back(-zeta + 2.0 * zeta * static_cast<double>(i) / static_cast<double>(uniform_points - 1));
    }
  }
  std::sort(g.begin(), g.end());
  const double merge = 1e-10 * std::max(zeta, 1e-300);
  std::vector<double> out;
  out.reserve(g.size());
  auto is_special = [&](double x) { return x == -zeta || x == zeta || x == 0.0 || x == r || x == -r; };
  for (double x : g) {
    if (!out.empty() && x - out.back() <= merge) {
      if (is_special(x) && !is_special(out.back())) out.back() = x;
      continue;
    }
    out.push_back(x);
  }
  return out;
}

namespace detail {

inline void check_moment_parameters(double v, double zeta) {
  if (!(zeta >= 0.0) || !std::isfinite(zeta)) throw InvalidParameter("zeta must be finite and >= 0");
  if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidParameter("second moment v must be finite and >= 0");
  if (v > zeta * zeta * (1.0 + 1e-12)) {
    std::ostringstream os;
    os.precision(17);
    os << "infeasible moment problem: v = " << v << " exceeds zeta^2 = " << zeta * zeta;
    throw InfeasibleError(os.str());
  }
}

/// Dense simplex for max sum_j f_j p_j s.t. sum p_j (1, t_j, t_j^2) = (1, 0, v),
/// p >= 0. The basis matrix is a transposed Vandermonde matrix, so its inverse
/// rows are the Lagrange polynomials through the basic atoms and the dual
/// vector is the quadratic interpolating f at those atoms.
class MomentSimplex {
 public:
  MomentSimplex(double v, double scale) : v_(v), tol_(1e-12 * std::max(1.0, scale)) {}

  std::size_t add_column(double t, double f) {
    t_.push_back(t);
    f_.push_back(f);
    return t_.size() - 1;
  }
  std::size_t size() const { return t_.size(); }
  double t(std::size_t j) const { return t_[j]; }
  double f(std::size_t j) const { return f_[j]; }
  double tolerance() const { return tol_; }

  void set_basis(std::array<std::size_t, 3> basis) {
    basis_ = basis;
    factor();
  }

  // Runs primal simplex to optimality over the current columns. Pivots that do
  // not beat the best objective so far by more than the tolerance count as
  // stalled; a run of them switches to Bland's rule and a long run ends the
  // search, since the remaining reduced costs are noise from nearly
  // coincident atoms.
  void optimize() {
    const std::size_t max_pivots = 50 * (t_.size() + 10);
    int stalled = 0;
    double best_objective = objective();
    for (std::size_t it = 0; it < max_pivots; ++it) {
      const bool bland = stalled > 30;
      if (stalled > 300) return;
      std::size_t enter = npos;
      double best = tol_;
      for (std::size_t j = 0; j < t_.size(); ++j) {
        if (j == basis_[0] || j == basis_[1] || j == basis_[2]) continue;
        const double d = f_[j] - quad(t_[j]);
        if (d > best) {
          enter = j;
          if (bland) break;
          best = d;
        }
      }
      if (enter == npos) return;

      std::array<double, 3> w{};
      for (int k = 0; k < 3; ++k) w[k] = lagrange(k, t_[enter]);
      std::array<double, 3> ratios{};
      double ratio = std::numeric_limits<double>::infinity();
      for (int k = 0; k < 3; ++k) {
        ratios[k] = w[k] > 1e-12 ? std::max(x_[k], 0.0) / w[k] : std::numeric_limits<double>::infinity();
        ratio = std::min(ratio, ratios[k]);
      }
      if (!std::isfinite(ratio)) throw Error("moment LP unbounded; this cannot happen for a bounded support");
      // Ties leave by smallest column index.
      int leave = -1;
      for (int k = 0; k < 3; ++k) {
        if (ratios[k] <= ratio + 1e-15 && (leave < 0 || basis_[k] < basis_[leave])) leave = k;
      }
      basis_[leave] = enter;
      factor();
      if (objective() > best_objective + tol_) {
        best_objective = objective();
        stalled = 0;
      } else {
        ++stalled;
      }
      ++pivots_;
    }
    throw Error("moment LP simplex did not converge");
  }

  double objective() const {
    return x_[0] * f_[basis_[0]] + x_[1] * f_[basis_[1]] + x_[2] * f_[basis_[2]];
  }

  // Distance from t to the nearest basic atom.
  double distance_to_basis(double t) const {
    double d = std::numeric_limits<double>::infinity();
    for (auto j : basis_) d = std::min(d, std::abs(t - t_[j]));
    return d;
  }

  double quad(double t) const { return y_[0] + t * (y_[1] + t * y_[2]); }
  const std::array<std::size_t, 3>& basis() const { return basis_; }
  const std::array<double, 3>& x() const { return x_; }
  const std::array<double, 3>& y() const { return y_; }
  int pivots() const { return pivots_; }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  double lagrange(int k, double t) const {
    const double tk = t_[basis_[k]];
    const double ti = t_[basis_[(k + 1) % 3]];
    const double tj = t_[basis_[(k + 2) % 3]];
    return (t - ti) * (t - tj) / ((tk - ti) * (tk - tj));
  }

  void factor() {
    y_ = {0.0, 0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
      const double tk = t_[basis_[k]];
      const double ti = t_[basis_[(k + 1) % 3]];
      const double tj = t_[basis_[(k + 2) % 3]];
      const double d = (tk - ti) * (tk - tj);
      // Row k of the inverse: coefficients of L_k(t) = (t - ti)(t - tj) / d.
      const double alpha = ti * tj / d;
      const double beta = -(ti + tj) / d;
      const double gamma = 1.0 / d;
      x_[k] = alpha + gamma * v_;
      const double fk = f_[basis_[k]];
      y_[0] += fk * alpha;
      y_[1] += fk * beta;
      y_[2] += fk * gamma;
    }
  }

  double v_;
  double tol_;
  std::vector<double> t_;
  std::vector<double> f_;
  std::array<std::size_t, 3> basis_{};
  std::array<double, 3> x_{};
  std::array<double, 3> y_{};
  int pivots_ = 0;
};

inline std::size_t find_point(std::span<const double> grid, double x) {
  const auto it = std::lower_bound(grid.begin(), grid.end(), x);
  if (it == grid.end() || *it != x) throw Error("moment grid is missing a required support point");
  return static_cast<std::size_t>(it - grid.begin());
}

inline MomentSolution degenerate_solution(double f0, double slope_left, double slope_right,
                                          double zeta, std::span<const double> grid,
                                          const auto& f) {
  // v = 0: the point mass at 0 is the only feasible law. The dual infimum f(0)
  // is approached as cq grows; report the smallest cq that dominates f on the
  // grid with b a subgradient of f at 0.
  MomentSolution sol;
  sol.law.zeta = zeta;
  sol.law.v = 0.0;
  sol.law.atoms = {{0.0, 1.0}};
  sol.value = f0;
  DualCertificate cert{f0, 0.5 * (slope_left + slope_right), 0.0};
  for (double t : grid) {
    if (t == 0.0) continue;
    cert.cq = std::max(cert.cq, (f(t) - f0 - cert.b * t) / (t * t));
  }
  sol.certificate = cert;
  return sol;
}

// Near-coincident atoms come from degenerate pivots. Merging keeps mass and
// mean exact and moves the second moment by p1 p2 / (p1 + p2) * dt^2.
inline void merge_close_atoms(FiniteLaw& law) {
  auto& atoms = law.atoms;
  const double v = law.v;
  for (std::size_t i = 1; i < atoms.size();) {
    Atom& a = atoms[i - 1];
    const Atom& b = atoms[i];
    const double dt = b.t - a.t;
    const double mass = a.p + b.p;
    if (a.p * b.p / mass * dt * dt <= 1e-16 * std::max(v, 1e-300) && std::min(a.p, b.p) <= 1e-9) {
      a.t = (a.p * a.t + b.p * b.t) / mass;
      a.p = mass;
      atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
}

inline MomentSolution extract(const MomentSimplex& lp, double v, double zeta, bool merge = true) {
  MomentSolution sol;
  sol.law.zeta = zeta;
  sol.law.v = v;
  for (int k = 0; k < 3; ++k) {
    double p = lp.x()[k];
    if (p <= 1e-15) continue;
    sol.law.atoms.push_back({lp.t(lp.basis()[k]), p});
  }
  std::sort(sol.law.atoms.begin(), sol.law.atoms.end(),
            [](const Atom& a, const Atom& b) { return a.t < b.t; });
  if (merge) merge_close_atoms(sol.law);
  sol.value = 0.0;
  for (int k = 0; k < 3; ++k) {
    if (lp.x()[k] > 1e-15) sol.value += lp.x()[k] * lp.f(lp.basis()[k]);
  }
  sol.certificate = {lp.y()[0], lp.y()[1], lp.y()[2]};
  sol.pivots = lp.pivots();
  return sol;
}

template <class F>
MomentSimplex build_and_solve(const F& f, double v, double zeta, std::span<const double> grid) {
  double scale = 0.0;
  std::vector<double> values(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    values[j] = f(grid[j]);
    if (!std::isfinite(values[j])) throw InvalidParameter("objective is not finite on [-zeta, zeta]");
    scale = std::max(scale, std::abs(values[j]));
  }
  MomentSimplex lp(v, scale);
  for (std::size_t j = 0; j < grid.size(); ++j) lp.add_column(grid[j], values[j]);
  // {-zeta, 0, zeta} is always a feasible starting basis when v <= zeta^2.
  lp.set_basis({find_point(grid, -zeta), find_point(grid, 0.0), find_point(grid, zeta)});
  lp.optimize();
  return lp;
}

}  // namespace detail

/// Grid-optimal solution for an arbitrary objective. `grid` must be sorted and
/// contain -zeta, 0 and zeta (moment_grid() guarantees this). The certificate
/// proves optimality over the grid only.
template <class F>
MomentSolution solve_moment_problem_on_grid(const F& f, double v, double zeta,
                                            std::span<const double> grid) {
  detail::check_moment_parameters(v, zeta);
  if (v == 0.0 || zeta == 0.0) {
    const double f0 = f(0.0);
    const double h = std::max(zeta, 1e-300) * 1e-9;
    return detail::degenerate_solution(f0, (f0 - f(-h)) / h, (f(h) - f0) / h, zeta, grid, f);
  }
  const auto lp = detail::build_and_solve(f, v, zeta, grid);
  return detail::extract(lp, v, zeta);
}

namespace detail {

// E[a + b T] = a for every feasible law, so affine objectives are answered
// exactly, with the symmetric two-point law.
template <class Pwl>
std::optional<MomentSolution> affine_solution(const Pwl& f, double v, double zeta) {
  std::vector<double> cuts{-zeta};
  for (double x : f.xs()) {
    if (x > -zeta && x < zeta) cuts.push_back(x);
  }
  cuts.push_back(zeta);
  const double lo = f.slope_at(0.5 * (cuts[0] + cuts[1]));
  double spread = 0.0;
  for (std::size_t i = 1; i + 1 < cuts.size(); ++i) {
    spread = std::max(spread, std::abs(f.slope_at(0.5 * (cuts[i] + cuts[i + 1])) - lo));
  }
  if (spread > 1e-13 * std::max(1.0, std::abs(lo))) return std::nullopt;
  MomentSolution sol;
  const double r = std::sqrt(v);
  sol.law = {{{-r, 0.5}, {r, 0.5}}, zeta, v};
  sol.value = f(0.0);
  sol.certificate = {sol.value, lo, 0.0};
  return sol;
}

// Column generation approaches an interior contact point from both sides, so
// the basis can end with two close atoms on one linear piece. Replace them by
// the exact two-point law {x, y} with x y = -v, where q is tangent to f at the
// merged atom and either interpolates f at the remaining atom or is tangent to
// it as well. For two tangent pieces f = alpha_i + s_i u, subtracting
// q - f_i = cq (u - x_i)^2 gives x + y = 2 (alpha_1 - alpha_2) / (s_2 - s_1).
// A candidate is kept only if its certificate dominates f on every piece and
// matches its value.
template <class Pwl>
void polish_two_point(const Pwl& f, double v, double zeta, std::span<const double> cuts, MomentSolution& sol) {
  auto& atoms = sol.law.atoms;
  if (atoms.size() != 3) return;
  int pair = -1;
  for (int i = 0; i < 2; ++i) {
    const double lo = atoms[i].t, hi = atoms[i + 1].t;
    if (hi - lo > 1e-4 * zeta) continue;
    bool split = false;
    for (double x : cuts) split = split || (x > lo && x < hi);
    if (!split) pair = i;
  }
  if (pair < 0) return;
  const double mid = 0.5 * (atoms[pair].t + atoms[pair + 1].t);
  const double other = atoms[pair == 0 ? 2 : 0].t;
  const double scale = std::max({1.0, std::abs(f(-zeta)), std::abs(f(zeta))});
  const double tol = 1e-12 * scale;

  auto piece_of = [&](double u) {
    std::size_t i = 0;
    while (i + 2 < cuts.size() && cuts[i + 1] <= u) ++i;
    return i;
  };
  auto dominated = [&](const DualCertificate& cert) {
    double worst = f(cuts.front()) - cert(cuts.front());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      worst = std::max(worst, f(cuts[i + 1]) - cert(cuts[i + 1]));
      const double ts = (f.slope_at(0.5 * (cuts[i] + cuts[i + 1])) - cert.b) / (2.0 * cert.cq);
      if (ts > cuts[i] && ts < cuts[i + 1]) worst = std::max(worst, f(ts) - cert(ts));
    }
    return worst <= tol;
  };
  auto tangent_at = [&](double t, double s, double cq) {
    return DualCertificate{f(t) - s * t + cq * t * t, s - 2.0 * cq * t, cq};
  };

  const std::size_t p1 = piece_of(mid);
  const double s1 = f.slope_at(0.5 * (cuts[p1] + cuts[p1 + 1]));
  auto near_pair = [&](double t) {
    return std::abs(t - mid) <= 1e-4 * zeta && t >= cuts[p1] && t <= cuts[p1 + 1];
  };

  std::vector<std::pair<std::array<double, 2>, DualCertificate>> candidates;
  if (other != 0.0) {
    const double t = -v / other;
    if (near_pair(t)) {
      const double cq = (f(other) - f(t) - s1 * (other - t)) / ((other - t) * (other - t));
      if (cq > 0.0) candidates.push_back({{t, other}, tangent_at(t, s1, cq)});
    }
  }
  const std::size_t p2 = piece_of(other);
  const double s2 = f.slope_at(0.5 * (cuts[p2] + cuts[p2 + 1]));
  if (p2 != p1 && s2 != s1) {
    const double alpha1 = f(mid) - s1 * mid;
    const double alpha2 = f(other) - s2 * other;
    const double sum = 2.0 * (alpha1 - alpha2) / (s2 - s1);
    const double root = std::sqrt(sum * sum + 4.0 * v);
    const double lo = 0.5 * (sum - root), hi = 0.5 * (sum + root);
    const double t = other < mid ? hi : lo;
    const double u = other < mid ? lo : hi;
    if (near_pair(t) && u >= cuts[p2] && u <= cuts[p2 + 1] && std::abs(u - other) <= 1e-4 * zeta) {
      const double cq = (s1 - s2) / (2.0 * (t - u));
      if (cq > 0.0) candidates.push_back({{t, u}, tangent_at(t, s1, cq)});
    }
  }

  for (const auto& [pts, cert] : candidates) {
    const double lo = std::min(pts[0], pts[1]), hi = std::max(pts[0], pts[1]);
    if (lo < -zeta || hi > zeta || !(lo < 0.0 && hi > 0.0)) continue;
    if (!dominated(cert)) continue;
    FiniteLaw law{{{lo, hi / (hi - lo)}, {hi, -lo / (hi - lo)}}, zeta, v};
    const double value = law.expect(f);
    // The raw basis is nearly singular, so its value carries an error of a
    // few ulps times the condition number; the polished pair closes the duality
    // gap exactly.
    if (std::abs(value - cert.dual_value(v)) > tol || value < sol.value - 1e-9 * scale) continue;
    sol.law = std::move(law);
    sol.value = value;
    sol.certificate = cert;
    return;
  }
}

}  // namespace detail

/// Exact maximiser for a piecewise-linear objective with precomputed values
/// on a candidate grid (see moment_grid()).
///
/// `Pwl` needs operator()(t), slope_at(t) and xs() (its breakpoints). The grid
/// LP is solved first; then, because f is linear on each piece and q is
/// quadratic, the largest violation of q >= f on a piece sits at the
/// stationary point t = (slope - b) / (2 cq). Such points enter as new columns
/// until no piece is violated, so the certificate holds on the continuum and
/// not only on the grid.
template <class Pwl>
MomentSolution solve_piecewise_linear(const Pwl& f, double v, double zeta, std::span<const double> grid,
                                      std::span<const double> values, bool refine_pieces = true) {
  detail::check_moment_parameters(v, zeta);
  if (v == 0.0 || zeta == 0.0) {
    return detail::degenerate_solution(f(0.0), f.slope_at(-1e-300), f.slope_at(0.0), zeta, grid, f);
  }
  if (auto affine = detail::affine_solution(f, v, zeta)) return *affine;
  double scale = 0.0;
  for (double y : values) {
    if (!std::isfinite(y)) throw InvalidParameter("objective is not finite on [-zeta, zeta]");
    scale = std::max(scale, std::abs(y));
  }
  detail::MomentSimplex lp(v, scale);
  for (std::size_t j = 0; j < grid.size(); ++j) lp.add_column(grid[j], values[j]);
  lp.set_basis({detail::find_point(grid, -zeta), detail::find_point(grid, 0.0), detail::find_point(grid, zeta)});
  lp.optimize();
  if (refine_pieces) {
    std::vector<double> cuts{-zeta};
    for (double x : f.xs()) {
      if (x > -zeta && x < zeta) cuts.push_back(x);
    }
    cuts.push_back(zeta);
    const double merge = 1e-10 * zeta;
    for (int round = 0; round < 200; ++round) {
      const double cq = lp.y()[2];
      if (!(cq > 0.0)) break;  // f - q convex on every piece: maxima at grid points
      bool added = false;
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        const double slope = f.slope_at(0.5 * (lo + hi));
        const double ts = (slope - lp.y()[1]) / (2.0 * cq);
        if (!(ts > lo + merge && ts < hi - merge)) continue;
        if (lp.distance_to_basis(ts) <= 1e-6 * zeta) continue;
        const double fs = f(ts);
        if (fs - lp.quad(ts) > lp.tolerance()) {
          lp.add_column(ts, fs);
          added = true;
        }
      }
      if (!added) break;
      lp.optimize();
    }
    auto sol = detail::extract(lp, v, zeta, false);
    detail::polish_two_point(f, v, zeta, cuts, sol);
    detail::merge_close_atoms(sol.law);
    return sol;
  }
  return detail::extract(lp, v, zeta);
}

struct MomentGridOptions {
  std::size_t uniform_points = 513;
  // Column generation on the linear pieces; makes the result exact for
  // piecewise-linear f instead of grid-optimal.
  bool refine_pieces = true;
};

/// Maximises E[f(T)] for piecewise-linear f over laws on [-zeta, zeta] with
/// E[T] = 0, E[T^2] = v. Throws InfeasibleError when v > zeta^2.
inline MomentSolution solve_moment_problem(const PiecewiseLinear& f, double v, double zeta,
                                           const MomentGridOptions& opts = {}) {
  detail::check_moment_parameters(v, zeta);
  const auto grid = moment_grid(v, zeta, opts.uniform_points, f.xs());
  std::vector<double> values(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) values[j] = f(grid[j]);
  return solve_piecewise_linear(f, v, zeta, grid, values, opts.refine_pieces);
}

/// Exhaustive oracle: best E[f] over all laws with at most three atoms taken
/// from `grid`. For atoms x_i, x_j, x_k the moment equations have the unique
/// solution p_i = (v + x_j x_k) / ((x_i - x_j)(x_i - x_k)), which is feasible
/// when all three are nonnegative. Quadratic-in-memory free, cubic in time:
/// meant for grids of at most a few hundred points.
template <class F>
double brute_force_oracle(const F& f, double v, double zeta, std::span<const double> grid) {
  detail::check_moment_parameters(v, zeta);
  std::vector<double> xs;
  for (double x : grid) {
    if (x >= -zeta * (1.0 + 1e-15) && x <= zeta * (1.0 + 1e-15)) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<double> fx(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) fx[i] = f(xs[i]);

  double best = -std::numeric_limits<double>::infinity();
  bool found = false;
  if (v == 0.0) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] == 0.0) return fx[i];
    }
    throw InfeasibleError("oracle grid lacks 0, the only feasible atom when v = 0");
  }
  const std::size_t n = xs.size();
  constexpr double ptol = -1e-12;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double xi = xs[i], xj = xs[j];
      const double dij = xi - xj;
      for (std::size_t k = j + 1; k < n; ++k) {
        const double xk = xs[k];
        const double pi = (v + xj * xk) / (dij * (xi - xk));
        if (pi < ptol) continue;
        const double pj = (v + xi * xk) / ((xj - xi) * (xj - xk));
        if (pj < ptol) continue;
        const double pk = (v + xi * xj) / ((xk - xi) * (xk - xj));
        if (pk < ptol) continue;
        const double val = pi * fx[i] + pj * fx[j] + pk * fx[k];
        if (val > best) best = val;
        found = true;
      }
    }
  }
  if (!found) throw InfeasibleError("no three-point law on the oracle grid meets the moment constraints");
  return best;
}

struct CertificateReport {
  bool ok = true;
  double max_domination_violation = 0.0;  // max of f - q over checked points
  double worst_t = 0.0;
  double max_slackness_violation = 0.0;   // max of q - f over atoms
  double duality_gap = 0.0;               // |dual value - primal value|
  std::string message;
  explicit operator bool() const { return ok; }
};

namespace detail {

template <class F>
CertificateReport check_certificate_points(const F& f, const FiniteLaw& law, const DualCertificate& cert,
                                           const std::vector<double>& points) {
  constexpr double tol = 1e-8;
  CertificateReport rep;
  rep.max_domination_violation = -std::numeric_limits<double>::infinity();
  for (double t : points) {
    const double d = f(t) - cert(t);
    if (d > rep.max_domination_violation) {
      rep.max_domination_violation = d;
      rep.worst_t = t;
    }
  }
  double primal = 0.0;
  for (const auto& a : law.atoms) {
    const double fa = f(a.t);
    primal += a.p * fa;
    rep.max_slackness_violation = std::max(rep.max_slackness_violation, cert(a.t) - fa);
  }
  rep.duality_gap = std::abs(cert.dual_value(law.v) - primal);
  std::ostringstream os;
  os.precision(6);
  if (rep.max_domination_violation > tol) {
    os << "q < f at t = " << rep.worst_t << " by " << rep.max_domination_violation << "; ";
    rep.ok = false;
  }
  if (law.v > 0.0 && rep.max_slackness_violation > tol) {
    os << "complementary slackness fails by " << rep.max_slackness_violation << "; ";
    rep.ok = false;
  }
  if (rep.duality_gap > tol * std::max(1.0, std::abs(primal))) {
    os << "dual value differs from primal by " << rep.duality_gap << "; ";
    rep.ok = false;
  }
  rep.message = os.str();
  return rep;
}

}  // namespace detail

/// Verifies q >= f (domination), q = f on the support (complementary
/// slackness) and dual value = primal value. For piecewise-linear f the
/// domination check is exact on [-zeta, zeta]: breakpoints, endpoints and the
/// per-piece maximiser of f - q are all examined, plus a dense uniform grid.
inline CertificateReport check_dual_certificate(const PiecewiseLinear& f, const FiniteLaw& law,
                                                const DualCertificate& cert) {
  const double zeta = law.zeta;
  std::vector<double> pts = moment_grid(law.v, zeta, 4097, f.xs());
  if (cert.cq > 0.0) {
    std::vector<double> cuts{-zeta};
    for (double x : f.xs()) {
      if (x > -zeta && x < zeta) cuts.push_back(x);
    }
    cuts.push_back(zeta);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double ts = (f.slope_at(0.5 * (cuts[i] + cuts[i + 1])) - cert.b) / (2.0 * cert.cq);
      if (ts > cuts[i] && ts < cuts[i + 1]) pts.push_back(ts);
    }
  }
  return detail::check_certificate_points(f, law, cert, pts);
}

/// Same checks for an arbitrary objective, on a dense uniform grid plus the
/// caller's breakpoints.
template <class F>
CertificateReport check_dual_certificate(const F& f, const FiniteLaw& law, const DualCertificate& cert,
                                         std::span<const double> breakpoints = {}) {
  return detail::check_certificate_points(f, law, cert, moment_grid(law.v, law.zeta, 4097, breakpoints));
}

}  // namespace minimax

#endif  // MINIMAX_MOMENT_SOLVER_HPP_
