#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "minimax/stochastic.hpp"

using namespace minimax;
using Catch::Approx;

namespace {

// Reference values below were evaluated with 40-digit arithmetic.
constexpr double kPhi01 = 0.53982783727702898367;
constexpr double kBetaAtm = 0.079655674554057967338;

RunningStats terminal_stats(double c, std::size_t n, std::size_t samples, std::uint64_t seed,
                            double (*fn)(double)) {
  RunningStats s;
  std::vector<double> path;
  Rng rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    detail::fill_gbm(rng, c, n, path);
    s.add(fn(path.back()));
  }
  return s;
}

}  // namespace

TEST_CASE("normal distribution against high-precision references") {
  CHECK(normal_cdf(0.1) == Approx(kPhi01).epsilon(1e-15));
  CHECK(normal_cdf(-0.1) == Approx(0.46017216272297101633).epsilon(1e-15));
  CHECK(normal_cdf(1.96) == Approx(0.97500210485177956379).epsilon(1e-15));
  CHECK(normal_cdf(-5.0) == Approx(2.8665157187919391167e-7).epsilon(1e-13));
  CHECK(normal_cdf(-8.0) == Approx(6.2209605742717841235e-16).epsilon(1e-13));
  CHECK(normal_sf(8.0) == Approx(6.2209605742717841235e-16).epsilon(1e-13));
  CHECK(normal_sf(10.0) == Approx(7.619853024160526066e-24).epsilon(1e-13));
  CHECK(normal_sf(12.0) == Approx(1.7764821120776789977e-33).epsilon(1e-12));
  CHECK(normal_pdf(0.0) == Approx(0.3989422804014327).epsilon(1e-15));
}

TEST_CASE("GBM paths start at 1, are deterministic and degenerate as c -> 0") {
  const auto a = sample_gbm({0.04, 16, 123});
  const auto b = sample_gbm({0.04, 16, 123});
  const auto other = sample_gbm({0.04, 16, 124});
  REQUIRE(a.values.size() == 17);
  CHECK(a.values[0] == 1.0);
  CHECK(a.values == b.values);
  CHECK(a.values != other.values);
  CHECK_NOTHROW(check_path(a));

  const auto flat = sample_gbm({1e-12, 64, 5});
  for (double s : flat.values) CHECK(s == Approx(1.0).margin(1e-5));

  CHECK_THROWS_AS(sample_gbm({0.0, 4, 1}), InvalidParameter);
  CHECK_THROWS_AS(sample_gbm({0.04, 0, 1}), InvalidParameter);
}

TEST_CASE("GBM terminal value is a martingale with second moment exp(c)") {
  for (double c : {0.01, 0.04, 0.25}) {
    const auto s = terminal_stats(c, 4, 1000000, 42, [](double x) { return x; });
    INFO("c = " << c << ": mean " << s.mean() << " +- " << s.stderr_of_mean());
    CHECK(std::abs(s.mean() - 1.0) <= 3.0 * s.stderr_of_mean());
  }
  const auto sq = terminal_stats(0.04, 4, 1000000, 43, [](double x) { return x * x; });
  CHECK(std::abs(sq.mean() - std::exp(0.04)) <= 3.0 * sq.stderr_of_mean());
}

TEST_CASE("GBM conditional variance law") {
  const double c = 0.04;
  RunningStats first, second, whole;
  std::vector<double> p;
  Rng rng(77);
  for (int i = 0; i < 200000; ++i) {
    detail::fill_gbm(rng, c, 2, p);
    first.add(std::pow(p[1] - p[0], 2));
    second.add(std::pow((p[2] - p[1]) / p[1], 2));
    whole.add(std::pow(p[2] - p[0], 2));
  }
  CHECK(std::abs(first.mean() - std::expm1(c / 2)) <= 5.0 * first.stderr_of_mean());
  CHECK(std::abs(second.mean() - std::expm1(c / 2)) <= 5.0 * second.stderr_of_mean());
  CHECK(std::abs(whole.mean() - std::expm1(c)) <= 5.0 * whole.stderr_of_mean());
}

TEST_CASE("closed-form Black-Scholes prices") {
  CHECK(bs_price_closed_form(1.0, 0.04) == Approx(kBetaAtm).epsilon(1e-13));
  CHECK(bs_price_closed_form(1.0, 0.04) == Approx(normal_cdf(0.1) - normal_cdf(-0.1)).epsilon(1e-15));
  CHECK(bs_price_closed_form(1e-12, 0.04) == Approx(1.0).margin(1e-11));
  CHECK(bs_price_closed_form(0.5, 1e-12) == Approx(0.5).margin(1e-12));
  CHECK(bs_price_closed_form(2.0, 0.25) == Approx(0.026138699288011123).epsilon(1e-12));
  CHECK(bs_price_closed_form(0.5, 0.25) == Approx(0.51306934964400556).epsilon(1e-12));
  CHECK_THROWS_AS(bs_price_closed_form(0.0, 0.04), InvalidParameter);
  CHECK_THROWS_AS(bs_price_closed_form(-1.0, 0.04), InvalidParameter);
  CHECK_THROWS_AS(bs_price_closed_form(1.0, 0.0), InvalidParameter);

  // Payoff decomposition into calls.
  CHECK(bs_price_closed_form(make_call(1.0), 0.04) == Approx(kBetaAtm).epsilon(1e-13));
  CHECK(bs_price_closed_form(make_identity(), 0.04) == Approx(1.0).epsilon(1e-15));
  CHECK(bs_price_closed_form(make_constant(0.3), 0.04) == Approx(0.3).epsilon(1e-15));
  // Put-call parity with unit forward.
  CHECK(bs_price_closed_form(make_put(1.2), 0.09) ==
        Approx(bs_price_closed_form(1.2, 0.09) - 1.0 + 1.2).epsilon(1e-13));
  const auto strangle = make_generic({0.0, 0.8, 1.25, 3.0}, {0.8, 0.0, 0.0, 1.75});
  CHECK(bs_price_closed_form(strangle, 0.04) ==
        Approx(bs_price_closed_form(1.25, 0.04) + bs_price_closed_form(0.8, 0.04) - 1.0 + 0.8).epsilon(1e-13));
}

TEST_CASE("Monte Carlo prices agree with the closed form") {
  for (double strike : {0.5, 1.0, 2.0}) {
    for (double c : {0.01, 0.04, 0.25}) {
      const auto mc = bs_price_mc(make_call(strike), c, 1000000, 9);
      const double exact = bs_price_closed_form(strike, c);
      INFO("K = " << strike << ", c = " << c << ": mc " << mc.estimate << " +- " << mc.standard_error
                  << ", exact " << exact);
      CHECK(mc.samples == 1000000);
      // K = 2, c = 0.01 prices at 4e-14, beyond the reach of any sample.
      CHECK(std::abs(mc.estimate - exact) <= 3.0 * mc.standard_error + 1e-12);
    }
  }
  const auto id = bs_price_mc(make_identity(), 0.04, 1000000, 3);
  CHECK(std::abs(id.estimate - 1.0) <= 3.0 * id.standard_error);

  const auto generic = make_generic({0.0, 0.9, 1.0, 1.3}, {0.45, 0.0, 0.0, 0.6});
  const auto mc = bs_price_mc(generic, 0.04, 1000000, 21);
  CHECK(std::abs(mc.estimate - bs_price_closed_form(generic, 0.04)) <= 3.0 * mc.standard_error);

  const auto flat = bs_price_mc(make_constant(0.7), 0.04, 10000, 1);
  CHECK(flat.estimate == 0.7);
  CHECK(flat.standard_error == 0.0);

  CHECK_THROWS_AS(bs_price_mc(make_call(1.0), 0.04, 0, 1), InvalidParameter);
}

TEST_CASE("Monte Carlo results do not depend on the worker count") {
  const auto a = bs_price_mc(make_call(1.0), 0.04, 50000, 8, 1);
  const auto b = bs_price_mc(make_call(1.0), 0.04, 50000, 8, 3);
  CHECK(a.estimate == b.estimate);
  CHECK(a.standard_error == b.standard_error);
  const auto x = estimate_zc_violation(0.04, 16, 0.3, 30000, 4, 1);
  const auto y = estimate_zc_violation(0.04, 16, 0.3, 30000, 4, 4);
  CHECK(x.estimate == y.estimate);
}

TEST_CASE("clipping to the step bound") {
  const auto flat = DiscretePath::constant(4);
  CHECK(clip_to_zc(flat, 0.1).values == flat.values);

  const double zeta = 0.1;
  DiscretePath jump{{1.0, 1.0, 1.0 + 2.0 * zeta, 1.0 + 2.0 * zeta}};
  CHECK(clip_to_zc(jump, zeta).values == DiscretePath::constant(3).values);

  DiscretePath ok{{1.0, 1.05, 1.0}};
  CHECK(clip_to_zc(ok, zeta).values == ok.values);

  CHECK_THROWS_AS(clip_to_zc(DiscretePath{{2.0, 1.0}}, zeta), InvalidParameter);
  CHECK_THROWS_AS(clip_to_zc(DiscretePath{{1.0, -1.0}}, zeta), InvalidParameter);

  // Clipped paths satisfy the bound surely and keep the terminal mean at 1.
  const double c = 0.04;
  const std::size_t n = 16;
  const double z = std::pow(16.0, -0.25) * 0.4;
  RunningStats mean;
  for (std::uint64_t i = 0; i < 200000; ++i) {
    const auto clipped = clip_to_zc(sample_gbm({c, n, stream_seed(5, i)}), z);
    REQUIRE(satisfies_zc(clipped, z));
    mean.add(clipped.terminal());
  }
  CHECK(std::abs(mean.mean() - 1.0) <= 3.0 * mean.stderr_of_mean());
}

TEST_CASE("probability of no step-bound violation") {
  const double c = 0.04;
  const std::size_t n = 64;
  const double zeta = std::pow(64.0, -0.25);
  const auto est = estimate_zc_violation(c, n, zeta, 100000, 2024);
  CHECK(est.estimate >= std::pow(1.0 - 1.0 / (64.0 * 64.0), 64.0) - 3.0 * est.standard_error);

  const double permissive = std::exp(6.0 * std::sqrt(c / n)) - 1.0;
  CHECK(estimate_zc_violation(c, n, permissive, 20000, 1).estimate == Approx(1.0).margin(1e-3));
  CHECK(estimate_zc_violation(c, n, 0.0, 1000, 1).estimate == 0.0);
  CHECK_THROWS_AS(estimate_zc_violation(c, 0, zeta, 10, 1), InvalidParameter);
}

TEST_CASE("KS distance is calibrated under the null") {
  Rng rng(31);
  std::vector<double> xs(10000);
  for (auto& x : xs) x = 0.2 * rng.normal() - 0.02;
  const double d = ks_distance_normal(xs, -0.02, 0.2);
  // 99% quantile of the Kolmogorov distribution is about 1.63 / sqrt(N).
  CHECK(d < 1.63 / std::sqrt(10000.0));
  // Shift by 2.6 sd: distance 2 Phi(1.3) - 1 = 0.806.
  CHECK(ks_distance_normal(xs, 0.5, 0.2) == Approx(2.0 * normal_cdf(1.3) - 1.0).margin(0.02));
  CHECK(ks_distance_normal({0.0}, 0.0, 1.0) == Approx(0.5));
  CHECK_THROWS_AS(ks_distance_normal({}, 0.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(ks_distance_normal({1.0}, 0.0, 0.0), InvalidParameter);
}
