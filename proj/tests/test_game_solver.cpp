#include <catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "minimax/game_solver.hpp"
#include "minimax/stochastic.hpp"

using namespace minimax;
using Catch::Approx;

namespace {

GameConfig config(int n, std::size_t grid = 513) {
  GameConfig cfg;
  cfg.n = n;
  cfg.c = 0.04;
  cfg.zeta_rule = ZetaRule::power(0.25);
  cfg.grid_size = grid;
  cfg.lp_grid_size = 129;
  return cfg;
}

// sup E[(s (1 + T) - K)^+] over the one-step laws, solved in t directly
// without any price grid.
double one_step_call(double s, double strike, double v, double zeta) {
  const double kink = strike / s - 1.0;
  const PiecewiseLinear f({kink - 1.0, kink, kink + 1.0}, {0.0, 0.0, s});
  return solve_moment_problem(f, v, zeta).value;
}

}  // namespace

TEST_CASE("one round: value sqrt(v)/2 and the brute-force oracle") {
  GameConfig cfg = config(1);
  cfg.zeta_rule = ZetaRule::fixed(0.5);
  const auto sol = solve_game(cfg, make_call(1.0));
  const double v = std::expm1(0.04);
  CHECK(sol.value == Approx(std::sqrt(v) / 2.0).epsilon(1e-10));
  CHECK(sol.value == Approx(0.101008).epsilon(1e-5));

  const auto grid = moment_grid(v, 0.5, 195, std::vector<double>{0.0});
  REQUIRE(grid.size() <= 200);
  const PiecewiseLinear hinge({-1.0, 0.0, 1.0}, {0.0, 0.0, 1.0});
  CHECK(sol.value == Approx(brute_force_oracle(hinge, v, 0.5, grid)).epsilon(1e-6));
}

TEST_CASE("two rounds agree with a nested exact recursion") {
  const GameConfig cfg = config(2, 2049);
  const auto sol = solve_game(cfg, make_call(1.0));
  const double v = cfg.step_variance();
  const double zeta = cfg.zeta();
  // V_1(s) is evaluated exactly; the outer sup runs over a 150-point grid.
  const auto outer = moment_grid(v, zeta, 150);
  const double oracle = brute_force_oracle(
      [&](double t) { return one_step_call(1.0 + t, 1.0, v, zeta); }, v, zeta, outer);
  CHECK(sol.value >= oracle - 1e-9);
  CHECK(sol.value == Approx(oracle).epsilon(2e-4));
}

TEST_CASE("identity payoff is priced at 1, constants exactly") {
  for (int n : {1, 3, 8, 16}) {
    INFO("n = " << n);
    CHECK(solve_game(config(n), make_identity()).value == Approx(1.0).margin(1e-6));
    CHECK(solve_game(config(n), make_constant(0.37)).value == 0.37);
  }
}

TEST_CASE("value functions are convex, match g at the last stage and grow backwards") {
  const GameConfig cfg = config(6);
  const PayoffSpec g = make_call(1.0);
  const auto sol = solve_game(cfg, g);
  const PriceGrid& grid = sol.grid;
  REQUIRE(sol.values.size() == 7);
  REQUIRE(grid.price(grid.origin()) == 1.0);
  for (std::size_t k = 0; k < grid.size(); ++k) CHECK(sol.values[6][k] == g(grid.price(k)));
  for (int m = 0; m <= 6; ++m) {
    const auto& v = sol.values[static_cast<std::size_t>(m)];
    for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
      const double s0 = grid.price(k - 1), s1 = grid.price(k), s2 = grid.price(k + 1);
      const double chord = ((s2 - s1) * v[k - 1] + (s1 - s0) * v[k + 1]) / (s2 - s0);
      CHECK(v[k] <= chord + 1e-9);
    }
  }
  for (int m = 1; m <= 6; ++m) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      CHECK(sol.values[static_cast<std::size_t>(m) - 1][k] >= sol.values[static_cast<std::size_t>(m)][k] - 1e-12);
    }
  }
}

TEST_CASE("value_at interpolates linearly in s and rejects prices off the grid") {
  const GameConfig cfg = config(4);
  const PayoffSpec g = make_call(1.0);
  const auto sol = solve_game(cfg, g);
  const PriceGrid& grid = sol.grid;
  const std::size_t k = grid.origin() + 7;
  CHECK(value_at(sol, 4, grid.price(k)) == g(grid.price(k)));
  const double mid = 0.25 * grid.price(k) + 0.75 * grid.price(k + 1);
  CHECK(value_at(sol, 4, mid) == Approx(0.25 * g(grid.price(k)) + 0.75 * g(grid.price(k + 1))).epsilon(1e-14));
  CHECK(value_at(sol, 0, 1.0) == sol.value);

  const auto id = solve_game(cfg, make_identity());
  CHECK(value_at(id, 0, 1.0) == Approx(1.0).margin(1e-6));

  CHECK_THROWS_AS(value_at(sol, 0, grid.max_price() * 1.01), ExtentError);
  CHECK_THROWS_AS(value_at(sol, 0, grid.min_price() * 0.99), ExtentError);
  CHECK_THROWS_AS(value_at(sol, 5, 1.0), InvalidParameter);
}

TEST_CASE("configuration errors") {
  GameConfig cfg = config(4);
  cfg.zeta_rule = ZetaRule::fixed(0.05);
  try {
    solve_game(cfg, make_call(1.0));
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(std::string(e.what()).find("exp(c/n) - 1") != std::string::npos);
  }
  cfg = config(4);
  cfg.zeta_rule = ZetaRule::power(0.5);
  CHECK_THROWS_AS(solve_game(cfg, make_call(1.0)), InvalidParameter);
  cfg.zeta_rule = ZetaRule::power(0.0);
  CHECK_THROWS_AS(solve_game(cfg, make_call(1.0)), InvalidParameter);
  cfg = config(0);
  CHECK_THROWS_AS(solve_game(cfg, make_call(1.0)), InvalidParameter);
  cfg = config(4);
  cfg.c = -1.0;
  CHECK_THROWS_AS(solve_game(cfg, make_call(1.0)), InvalidParameter);

  cfg = config(4);
  cfg.s_max = 1.01;
  CHECK_THROWS_AS(solve_game(cfg, make_call(1.0)), ExtentError);

  const auto concave = make_generic({0.0, 1.0, 2.0}, {0.0, 1.0, 1.5});
  CHECK_THROWS_AS(solve_game(config(2), concave), InvalidParameter);
}

TEST_CASE("zeta condition flag") {
  CHECK_FALSE(config(1).zeta_condition());
  // n zeta^2 / log n = sqrt(n) / log n against 16 c = 0.64.
  CHECK(config(16).zeta_condition());
  CHECK(config(256).zeta_condition());
  GameConfig tight = config(16);
  tight.c = 1.0;
  CHECK_FALSE(tight.zeta_condition());
}

TEST_CASE("every stored law is feasible for the step constraints") {
  const GameConfig cfg = config(5, 257);
  const auto sol = solve_game(cfg, make_put(1.1));
  for (int m = 1; m <= 5; ++m) {
    for (std::size_t k = 0; k < sol.grid.size(); ++k) {
      const auto bad = check_law(sol.policy.law(m, k));
      INFO("stage " << m << " node " << k << ": " << bad.message);
      CHECK(!bad);
    }
  }
}

TEST_CASE("results do not depend on the worker count") {
  GameConfig a = config(6);
  GameConfig b = a;
  b.workers = 3;
  const auto x = solve_game(a, make_call(1.0));
  const auto y = solve_game(b, make_call(1.0));
  CHECK(x.values == y.values);
  REQUIRE(x.policy.laws.size() == y.policy.laws.size());
  bool same = true;
  for (std::size_t i = 0; i < x.policy.laws.size(); ++i) {
    const auto& p = x.policy.laws[i];
    const auto& q = y.policy.laws[i];
    same = same && p.count == q.count;
    for (std::uint8_t j = 0; j < p.count && same; ++j) {
      same = p.atoms[j].t == q.atoms[j].t && p.atoms[j].p == q.atoms[j].p;
    }
  }
  CHECK(same);
}

TEST_CASE("grid refinement") {
  const auto id = refine_and_estimate_error(config(4, 129), make_identity(), 2);
  CHECK(id.gap <= 1e-6);
  CHECK(refine_and_estimate_error(config(4, 129), make_constant(2.0), 2).gap == 0.0);

  GameConfig cfg = config(16, 513);
  const auto call = refine_and_estimate_error(cfg, make_call(1.0), 2);
  INFO("coarse " << call.value_coarse << " fine " << call.value_fine);
  CHECK(call.gap <= 1e-3 * call.value_fine);
  // Interpolating a convex function from above biases values upwards.
  CHECK(call.value_fine <= call.value_coarse + 1e-12);
  CHECK_THROWS_AS(refine_and_estimate_error(cfg, make_call(1.0), 1), InvalidParameter);
}

TEST_CASE("game value dominates the Black-Scholes price") {
  const PayoffSpec g = make_call(1.0);
  const McEstimate beta = bs_price_mc(g, 0.04, 200000, 17);
  CHECK(beta.estimate == Approx(bs_price_closed_form(1.0, 0.04)).margin(4.0 * beta.standard_error));
  for (int n : {1, 4, 16}) {
    const double value = solve_game(config(n), g).value;
    INFO("n = " << n << ": " << value);
    CHECK(value >= beta.estimate - 3.0 * beta.standard_error);
  }
}
