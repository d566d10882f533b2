#ifndef MINIMAX_VERIFICATION_HPP_
#define MINIMAX_VERIFICATION_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "minimax/errors.hpp"
#include "minimax/game_solver.hpp"
#include "minimax/moment_solver.hpp"
#include "minimax/normal.hpp"
#include "minimax/payoff.hpp"
#include "minimax/simulation.hpp"
#include "minimax/stats.hpp"
#include "minimax/stochastic.hpp"

namespace minimax {

enum class CheckStatus { pass, fail, skipped };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
  }
  return "?";
}

/// One compared quantity. margin = bound - measured (after tolerances), so a
/// negative margin is a violation.
struct CheckRow {
  std::string label;
  double measured = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  CheckStatus status = CheckStatus::pass;
  std::string note;
};

struct CheckReport {
  std::string name;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<CheckRow> rows;
  CheckStatus status = CheckStatus::skipped;
  std::string message;

  // Worst (smallest margin) non-skipped row, or nullptr.
  const CheckRow* worst() const {
    const CheckRow* w = nullptr;
    for (const auto& r : rows) {
      if (r.status == CheckStatus::skipped) continue;
      if (!w || r.margin < w->margin) w = &r;
    }
    return w;
  }

  // fail if any row fails, pass if at least one row passes, else skipped.
  void finalize() {
    bool any_pass = false;
    status = CheckStatus::skipped;
    for (const auto& r : rows) {
      if (r.status == CheckStatus::fail) {
        status = CheckStatus::fail;
        return;
      }
      any_pass = any_pass || r.status == CheckStatus::pass;
    }
    if (any_pass) status = CheckStatus::pass;
  }
};

// ---------------------------------------------------------------------------
// Per-step log-moment bounds, evaluated exactly on finite-support laws.

struct LogMoments {
  double mean_log = 0.0;    // E[log(1+T)]
  double mean_log2 = 0.0;   // E[log^2(1+T)]
  double var_log = 0.0;
};

inline LogMoments log_moments(const FiniteLaw& law) {
  LogMoments out;
  for (const auto& a : law.atoms) {
    if (!(a.t > -1.0)) throw DomainError("law has an atom at t <= -1; log(1 + t) undefined");
    const double l = std::log1p(a.t);
    out.mean_log += a.p * l;
    out.mean_log2 += a.p * l * l;
  }
  out.var_log = out.mean_log2 - out.mean_log * out.mean_log;
  return out;
}

struct Precondition {
  std::string label;
  bool holds = false;
};

inline bool all_hold(const std::vector<Precondition>& pre) {
  return std::all_of(pre.begin(), pre.end(), [](const Precondition& p) { return p.holds; });
}

/// Large-n conditions assumed by the first-moment log bound.
inline std::vector<Precondition> logs1_preconditions(double c, int n, double zeta) {
  const double v = std::expm1(c / n);
  return {{"exp(c/n)-1 <= 2c/n", v <= 2.0 * c / n},
          {"exp(c/n)-1-c/n <= 2c^2/n^2", v - c / n <= 2.0 * c * c / (static_cast<double>(n) * n)},
          {"3(1-zeta) >= 1", 3.0 * (1.0 - zeta) >= 1.0}};
}

/// Large-n conditions assumed by the second-moment log bound.
inline std::vector<Precondition> logs2_preconditions(double c, int n, double zeta) {
  const double v = std::expm1(c / n);
  const double lhs = zeta < 1.0 ? (3.0 - 2.0 * std::log1p(-zeta)) / (3.0 * std::pow(1.0 - zeta, 3)) : HUGE_VAL;
  return {{"exp(c/n)-1 <= 2c/n", v <= 2.0 * c / n},
          {"exp(c/n)-1-c/n <= 2c^2/n^2", v - c / n <= 2.0 * c * c / (static_cast<double>(n) * n)},
          {"(3-2log(1-zeta))/(3(1-zeta)^3) <= 2", lhs <= 2.0}};
}

/// Conditions for the conditional-variance bound: both of the above plus
/// (c/(2n) + 2c zeta/n + c^2/n^2)^2 <= c^2/n^2.
inline std::vector<Precondition> variance_preconditions(double c, int n, double zeta) {
  auto pre = logs1_preconditions(c, n, zeta);
  const auto p2 = logs2_preconditions(c, n, zeta);
  pre.push_back(p2.back());
  const double nn = static_cast<double>(n);
  const double s = c / (2.0 * nn) + 2.0 * c * zeta / nn + c * c / (nn * nn);
  pre.push_back({"(c/2n + 2c zeta/n + c^2/n^2)^2 <= c^2/n^2", s * s <= c * c / (nn * nn)});
  return pre;
}

struct TaylorOptions {
  // Absolute slack beyond the stated bound.
  double tolerance = 1e-12;
  // When true, unmet large-n preconditions turn the check into "skipped";
  // when false the inequality is asserted for every law regardless, and the
  // precondition status is only reported.
  bool require_preconditions = true;
};

namespace detail {

enum class TaylorKind { logs1, logs2, variance };

inline CheckReport taylor_check(TaylorKind kind, double c, int n, double zeta, std::span<const FiniteLaw> laws,
                                const TaylorOptions& opts) {
  if (!(c > 0.0) || n < 1) throw InvalidParameter("taylor check needs c > 0, n >= 1");
  if (!(zeta < 1.0)) throw InvalidParameter("taylor check needs zeta < 1");
  const double nn = static_cast<double>(n);
  const double v = std::expm1(c / n);
  CheckReport rep;
  std::vector<Precondition> pre;
  double bound = 0.0;
  switch (kind) {
    case TaylorKind::logs1:
      rep.name = "taylor_logs1";
      pre = logs1_preconditions(c, n, zeta);
      bound = 2.0 * c * zeta / nn + c * c / (nn * nn);
      break;
    case TaylorKind::logs2:
      rep.name = "taylor_logs2";
      pre = logs2_preconditions(c, n, zeta);
      bound = 4.0 * c * zeta / nn + 2.0 * c * c / (nn * nn);
      break;
    case TaylorKind::variance:
      rep.name = "conditional_variance";
      pre = variance_preconditions(c, n, zeta);
      bound = 4.0 * c * zeta / nn + 3.0 * c * c / (nn * nn);
      break;
  }
  rep.parameters = {{"c", c}, {"n", nn}, {"zeta", zeta}, {"laws", static_cast<double>(laws.size())}};
  const bool pre_ok = all_hold(pre);

  std::size_t not_applicable = 0, violations = 0;
  CheckRow worst{"worst law", 0.0, bound, std::numeric_limits<double>::infinity(), CheckStatus::pass, ""};
  for (std::size_t i = 0; i < laws.size(); ++i) {
    const FiniteLaw& law = laws[i];
    for (const auto& a : law.atoms) {
      if (!(a.t > -1.0)) throw DomainError("law " + std::to_string(i) + " has an atom at t <= -1");
    }
    // The bounds assume the saturated second moment; other laws are out of scope.
    if (std::abs(law.second_moment() - v) > 1e-9 * std::max(1.0, v) || std::abs(law.mean()) > 1e-10) {
      ++not_applicable;
      continue;
    }
    const LogMoments lm = log_moments(law);
    double measured = 0.0;
    switch (kind) {
      case TaylorKind::logs1: measured = std::abs(lm.mean_log + c / (2.0 * nn)); break;
      case TaylorKind::logs2: measured = std::abs(lm.mean_log2 - c / nn); break;
      case TaylorKind::variance: measured = std::abs(lm.var_log - c / nn); break;
    }
    const double margin = bound + opts.tolerance - measured;
    if (margin < 0.0) ++violations;
    if (margin < worst.margin) {
      worst.measured = measured;
      worst.margin = margin;
      std::ostringstream os;
      os.precision(17);
      os << "law " << i << ":";
      for (const auto& a : law.atoms) os << " (" << a.t << ", " << a.p << ")";
      worst.note = os.str();
    }
  }

  std::ostringstream msg;
  msg << (laws.size() - not_applicable) << " laws checked, " << violations << " above the bound, "
      << not_applicable << " not applicable (second moment differs from exp(c/n)-1)";
  for (const auto& p : pre) {
    if (!p.holds) msg << "; precondition fails: " << p.label;
  }
  rep.message = msg.str();

  if (laws.size() == not_applicable) {
    worst.status = CheckStatus::skipped;
    worst.margin = 0.0;
    worst.note = "no applicable law";
  } else if (!pre_ok && opts.require_preconditions) {
    worst.status = CheckStatus::skipped;
    worst.note += violations ? " (bound exceeded, preconditions unmet)" : " (bound holds, preconditions unmet)";
  } else {
    worst.status = violations ? CheckStatus::fail : CheckStatus::pass;
  }
  rep.rows.push_back(worst);
  rep.finalize();
  return rep;
}

}  // namespace detail

/// |E[log(1+T)] + c/(2n)| <= 2c zeta/n + c^2/n^2 for every law.
inline CheckReport check_taylor_logs1(double c, int n, double zeta, std::span<const FiniteLaw> laws,
                                      const TaylorOptions& opts = {}) {
  return detail::taylor_check(detail::TaylorKind::logs1, c, n, zeta, laws, opts);
}

/// |E[log^2(1+T)] - c/n| <= 4c zeta/n + 2c^2/n^2 for every law.
inline CheckReport check_taylor_logs2(double c, int n, double zeta, std::span<const FiniteLaw> laws,
                                      const TaylorOptions& opts = {}) {
  return detail::taylor_check(detail::TaylorKind::logs2, c, n, zeta, laws, opts);
}

/// |Var(log(1+T)) - c/n| <= 4c zeta/n + 3c^2/n^2 for every law.
inline CheckReport check_conditional_variance(double c, int n, double zeta, std::span<const FiniteLaw> laws,
                                              const TaylorOptions& opts = {}) {
  return detail::taylor_check(detail::TaylorKind::variance, c, n, zeta, laws, opts);
}

/// Every distinct law stored in a policy.
inline std::vector<FiniteLaw> policy_laws(const AdversaryPolicy& policy) {
  std::vector<FiniteLaw> out;
  out.reserve(policy.laws.size());
  for (const auto& l : policy.laws) out.push_back(l.expand(policy.zeta, policy.v));
  return out;
}

// ---------------------------------------------------------------------------
// Moment identities along sampled adversary paths.

struct PathMoments {
  std::vector<int> stages;
  std::vector<RunningStats> first;   // S_m
  std::vector<RunningStats> second;  // S_m^2
};

inline PathMoments sample_path_moments(const AdversaryPolicy& policy, std::vector<int> stages, std::size_t paths,
                                       std::uint64_t seed, unsigned workers = 1) {
  for (int m : stages) {
    if (m < 0 || m > policy.n) throw InvalidParameter("stage outside 0..n");
  }
  std::vector<double> s(paths * stages.size());
  for_each_adversary_path(policy, paths, seed, workers, [&](std::size_t i, const DiscretePath& p) {
    for (std::size_t j = 0; j < stages.size(); ++j) s[i * stages.size() + j] = p.values[static_cast<std::size_t>(stages[j])];
  });
  PathMoments out{std::move(stages), {}, {}};
  out.first.resize(out.stages.size());
  out.second.resize(out.stages.size());
  for (std::size_t i = 0; i < paths; ++i) {
    for (std::size_t j = 0; j < out.stages.size(); ++j) {
      const double x = s[i * out.stages.size() + j];
      out.first[j].add(x);
      out.second[j].add(x * x);
    }
  }
  return out;
}

namespace detail {

inline CheckRow two_sided_row(std::string label, const RunningStats& st, double target, double k) {
  CheckRow r;
  r.label = std::move(label);
  r.measured = std::abs(st.mean() - target);
  r.bound = k * st.stderr_of_mean();
  r.margin = r.bound - r.measured;
  // An exact match passes even when the standard error is zero.
  r.status = r.measured <= r.bound ? CheckStatus::pass : CheckStatus::fail;
  std::ostringstream os;
  os.precision(17);
  os << "estimate " << st.mean() << ", target " << target << ", stderr " << st.stderr_of_mean();
  r.note = os.str();
  return r;
}

}  // namespace detail

/// E[S_m^2] = exp(c m / n) for m in {ceil(n/4), ceil(n/2), n}, within 5 stderr.
inline CheckReport check_variance_identity(const AdversaryPolicy& policy, std::size_t paths, std::uint64_t seed,
                                           unsigned workers = 1) {
  const int n = policy.n;
  std::vector<int> stages{(n + 3) / 4, (n + 1) / 2, n};
  stages.erase(std::unique(stages.begin(), stages.end()), stages.end());
  const PathMoments pm = sample_path_moments(policy, stages, paths, seed, workers);
  CheckReport rep;
  rep.name = "variance_identity";
  rep.parameters = {{"n", static_cast<double>(n)}, {"c", policy.c}, {"zeta", policy.zeta},
                    {"paths", static_cast<double>(paths)}, {"seed", static_cast<double>(seed)}};
  for (std::size_t j = 0; j < pm.stages.size(); ++j) {
    const int m = pm.stages[j];
    rep.rows.push_back(detail::two_sided_row("E[S_m^2], m = " + std::to_string(m), pm.second[j],
                                             std::exp(policy.c * m / n), 5.0));
  }
  rep.finalize();
  return rep;
}

/// E[S_n] = 1 within 5 stderr.
inline CheckReport check_martingale_mean(const AdversaryPolicy& policy, std::size_t paths, std::uint64_t seed,
                                         unsigned workers = 1) {
  const PathMoments pm = sample_path_moments(policy, {policy.n}, paths, seed, workers);
  CheckReport rep;
  rep.name = "martingale_mean";
  rep.parameters = {{"n", static_cast<double>(policy.n)}, {"c", policy.c}, {"paths", static_cast<double>(paths)},
                    {"seed", static_cast<double>(seed)}};
  rep.rows.push_back(detail::two_sided_row("E[S_n]", pm.first[0], 1.0, 5.0));
  rep.finalize();
  return rep;
}

/// E[g(S_n)] - E[min(g(S_n), M)] <= L^{3/2} exp(c/2) / sqrt(M) + 5 stderr for
/// each M, with g shifted so that g(0) = 0.
inline CheckReport check_truncation_bound(const AdversaryPolicy& policy, const PayoffSpec& g,
                                          std::span<const double> m_list, std::size_t paths, std::uint64_t seed,
                                          unsigned workers = 1) {
  const double g0 = g(0.0);
  const double lip = g.lipschitz();
  std::vector<double> payoff(paths);
  for_each_adversary_path(policy, paths, seed, workers,
                          [&](std::size_t i, const DiscretePath& p) { payoff[i] = g(p.terminal()) - g0; });
  CheckReport rep;
  rep.name = "truncation_bound";
  rep.parameters = {{"n", static_cast<double>(policy.n)}, {"c", policy.c}, {"L", lip},
                    {"paths", static_cast<double>(paths)}, {"seed", static_cast<double>(seed)}};
  for (double big_m : m_list) {
    if (!(big_m > 0.0)) throw InvalidParameter("truncation level M must be > 0");
    RunningStats excess;
    for (double y : payoff) excess.add(std::max(y - big_m, 0.0));
    CheckRow r;
    std::ostringstream label;
    label << "M = " << big_m;
    r.label = label.str();
    r.measured = excess.mean();
    r.bound = std::pow(lip, 1.5) * std::exp(policy.c / 2.0) / std::sqrt(big_m) + 5.0 * excess.stderr_of_mean();
    r.margin = r.bound - r.measured;
    r.status = r.margin >= 0.0 ? CheckStatus::pass : CheckStatus::fail;
    std::ostringstream note;
    note.precision(17);
    note << "stderr " << excess.stderr_of_mean() << ", max payoff " << *std::max_element(payoff.begin(), payoff.end());
    r.note = note.str();
    rep.rows.push_back(r);
  }
  rep.finalize();
  return rep;
}

// ---------------------------------------------------------------------------
// Gaussian tail and ZC-violation probability.

/// Large-n conditions under which a GBM path avoids ZC violations with
/// probability at least (1 - 1/n^2)^n.
inline std::vector<Precondition> tail_preconditions(double c, int n, double zeta) {
  const double nn = static_cast<double>(n);
  std::vector<Precondition> pre{
      {"log(1+zeta) >= zeta/2", std::log1p(zeta) >= zeta / 2.0},
      {"sqrt(n/c) zeta >= sqrt(c/n)", std::sqrt(nn / c) * zeta >= std::sqrt(c / nn)},
      {"sqrt(n) zeta / (2 sqrt(c)) >= sqrt(2/pi)", std::sqrt(nn) * zeta / (2.0 * std::sqrt(c)) >= std::sqrt(2.0 / M_PI)}};
  // log 1 = 0: the last condition is undefined at n = 1.
  pre.push_back({"n zeta^2 / log n >= 16c", n >= 2 && nn * zeta * zeta / std::log(nn) >= 16.0 * c});
  return pre;
}

namespace detail {

inline std::string failed_labels(const std::vector<Precondition>& pre) {
  std::string out;
  for (const auto& p : pre) {
    if (p.holds) continue;
    if (!out.empty()) out += "; ";
    out += p.label;
  }
  return out;
}

}  // namespace detail

/// 1 - Phi(sqrt(n) zeta_n / (2 sqrt(c))) <= 1 / (2 n^2) for each n whose
/// preconditions hold; other n are skipped.
inline CheckReport check_gaussian_tail(std::span<const int> n_list, double c, const ZetaRule& rule) {
  CheckReport rep;
  rep.name = "gaussian_tail";
  rep.parameters = {{"c", c}};
  for (int n : n_list) {
    if (n < 1) throw InvalidParameter("n must be >= 1");
    const double zeta = rule(n);
    const double nn = static_cast<double>(n);
    CheckRow r;
    r.label = "n = " + std::to_string(n);
    r.measured = normal_sf(std::sqrt(nn) * zeta / (2.0 * std::sqrt(c)));
    r.bound = 1.0 / (2.0 * nn * nn);
    r.margin = r.bound - r.measured;
    const auto pre = tail_preconditions(c, n, zeta);
    if (!all_hold(pre)) {
      r.status = CheckStatus::skipped;
      r.note = "preconditions fail: " + detail::failed_labels(pre);
    } else {
      r.status = r.margin >= 0.0 ? CheckStatus::pass : CheckStatus::fail;
    }
    rep.rows.push_back(r);
  }
  rep.finalize();
  return rep;
}

/// P(GBM path has no ZC violation) >= (1 - 1/n^2)^n - 3 stderr for each n
/// whose preconditions hold.
inline CheckReport check_probconv(double c, std::span<const int> n_list, const ZetaRule& rule, std::size_t samples,
                                  std::uint64_t seed, unsigned workers = 1) {
  if (samples < 10000) throw InvalidParameter("probability check needs at least 10^4 samples");
  CheckReport rep;
  rep.name = "probconv";
  rep.parameters = {{"c", c}, {"samples", static_cast<double>(samples)}, {"seed", static_cast<double>(seed)}};
  for (int n : n_list) {
    const double zeta = rule(n);
    const double nn = static_cast<double>(n);
    CheckRow r;
    r.label = "n = " + std::to_string(n);
    const auto pre = tail_preconditions(c, n, zeta);
    if (!all_hold(pre)) {
      r.status = CheckStatus::skipped;
      r.note = "preconditions fail: " + detail::failed_labels(pre);
      rep.rows.push_back(r);
      continue;
    }
    const McEstimate est = estimate_zc_violation(c, static_cast<std::size_t>(n), zeta, samples, seed, workers);
    const double target = std::pow(1.0 - 1.0 / (nn * nn), nn);
    // One-sided lower bound: report it as measured >= target - 3 stderr.
    r.measured = est.estimate;
    r.bound = target - 3.0 * est.standard_error;
    r.margin = r.measured - r.bound;
    r.status = r.margin >= 0.0 ? CheckStatus::pass : CheckStatus::fail;
    std::ostringstream note;
    note.precision(17);
    note << "no-violation frequency " << est.estimate << " (stderr " << est.standard_error << ") vs (1-1/n^2)^n = "
         << target;
    r.note = note.str();
    rep.rows.push_back(r);
  }
  rep.finalize();
  return rep;
}

// ---------------------------------------------------------------------------
// Distributional convergence.

/// KS distance between log S_n + c/2 over sampled adversary paths and
/// Normal(0, c).
inline double ks_terminal_distance(const AdversaryPolicy& policy, std::size_t samples, std::uint64_t seed,
                                   unsigned workers = 1) {
  std::vector<double> x(samples);
  for_each_adversary_path(policy, samples, seed, workers, [&](std::size_t i, const DiscretePath& p) {
    x[i] = std::log(p.terminal()) + 0.5 * policy.c;
  });
  return ks_distance_normal(std::move(x), 0.0, std::sqrt(policy.c));
}

/// KS distances per policy (in the given order); passes when they strictly
/// decrease.
inline CheckReport ks_terminal_convergence(std::span<const AdversaryPolicy* const> policies, std::size_t samples,
                                           std::uint64_t seed, unsigned workers = 1) {
  if (policies.size() < 2) throw InvalidParameter("KS convergence needs at least two policies");
  CheckReport rep;
  rep.name = "ks_terminal_convergence";
  rep.parameters = {{"c", policies[0]->c}, {"samples", static_cast<double>(samples)},
                    {"seed", static_cast<double>(seed)}};
  double prev = std::numeric_limits<double>::infinity();
  for (const AdversaryPolicy* p : policies) {
    CheckRow r;
    r.label = "n = " + std::to_string(p->n);
    r.measured = ks_terminal_distance(*p, samples, seed, workers);
    r.bound = prev;
    r.margin = prev - r.measured;
    r.status = r.margin > 0.0 ? CheckStatus::pass : CheckStatus::fail;
    r.note = std::isinf(prev) ? "first entry" : "must be below the previous distance";
    prev = r.measured;
    rep.rows.push_back(r);
  }
  rep.finalize();
  return rep;
}

// ---------------------------------------------------------------------------
// Convergence of the game value to the Black-Scholes price.

struct SweepRow {
  int n = 0;
  double zeta = 0.0;
  bool feasible = false;
  double value = 0.0;  // V_0(1)
  double beta = 0.0;
  double gap = 0.0;
};

struct SweepOptions {
  std::size_t grid_size = 1025;
  std::size_t lp_grid_size = 513;
  unsigned workers = 1;
  // Gaps within this distance of 0 count as exact.
  double exact_tolerance = 1e-6;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  CheckReport report;
  std::vector<GameSolution> solutions;  // one per feasible row, filled on request
};

/// Solves the game for every n, compares V_0(1) with the Black-Scholes price
/// and checks that the gap is positive and strictly decreasing over feasible
/// rows. Gaps within exact_tolerance of zero are treated as exact (affine
/// payoffs) and only need to stay there.
inline SweepResult convergence_sweep(double c, const PayoffSpec& g, std::span<const int> n_list, const ZetaRule& rule,
                                     const SweepOptions& opts = {}, bool keep_solutions = false) {
  SweepResult out;
  const double beta = bs_price_closed_form(g, c);
  out.report.name = "convergence_sweep";
  out.report.parameters = {{"c", c}, {"beta", beta}, {"grid_size", static_cast<double>(opts.grid_size)}};
  const SweepRow* prev = nullptr;
  for (int n : n_list) {
    GameConfig cfg;
    cfg.n = n;
    cfg.c = c;
    cfg.zeta_rule = rule;
    cfg.grid_size = opts.grid_size;
    cfg.lp_grid_size = opts.lp_grid_size;
    cfg.workers = opts.workers;
    SweepRow row;
    row.n = n;
    row.zeta = cfg.zeta();
    row.beta = beta;
    row.feasible = cfg.feasible();
    out.rows.push_back(row);
    if (!row.feasible) continue;
    GameSolution sol = solve_game(cfg, g);
    out.rows.back().value = sol.value;
    out.rows.back().gap = sol.value - beta;
    if (keep_solutions) out.solutions.push_back(std::move(sol));
  }
  for (const auto& row : out.rows) {
    CheckRow r;
    r.label = "n = " + std::to_string(row.n);
    if (!row.feasible) {
      r.status = CheckStatus::skipped;
      r.note = "infeasible: exp(c/n)-1 > zeta_n^2";
      out.report.rows.push_back(r);
      continue;
    }
    r.measured = row.gap;
    const double tol = opts.exact_tolerance;
    const bool nonnegative = row.gap >= -tol;
    if (!prev) {
      r.bound = -tol;
      r.margin = row.gap + tol;
      r.status = nonnegative ? CheckStatus::pass : CheckStatus::fail;
      r.note = "gap must be nonnegative";
    } else if (std::abs(row.gap) <= tol && std::abs(prev->gap) <= tol) {
      r.bound = tol;
      r.margin = tol - std::abs(row.gap);
      r.status = CheckStatus::pass;
      r.note = "exact case: gap stays within tolerance of 0";
    } else {
      r.bound = prev->gap;
      r.margin = std::min(prev->gap - row.gap, row.gap + tol);
      r.status = nonnegative && row.gap < prev->gap ? CheckStatus::pass : CheckStatus::fail;
      r.note = "gap must be positive and strictly below the previous gap";
    }
    out.report.rows.push_back(r);
    prev = &row;
  }
  out.report.finalize();
  return out;
}

}  // namespace minimax

#endif  // MINIMAX_VERIFICATION_HPP_
