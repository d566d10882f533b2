#include <catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <string>

#include "minimax/payoff.hpp"

using namespace minimax;
using Catch::Approx;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
  const std::string path = std::string(P_tmpdir) + "/minimax_" + name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("piecewise-linear evaluation and extrapolation") {
  PiecewiseLinear f({0.0, 1.0, 3.0}, {1.0, 0.0, 4.0});
  CHECK(f(0.0) == 1.0);
  CHECK(f(0.5) == Approx(0.5));
  CHECK(f(2.0) == Approx(2.0));
  CHECK(f(-1.0) == Approx(2.0));  // first slope -1
  CHECK(f(4.0) == Approx(6.0));   // last slope 2
  CHECK(f.slope_at(1.0) == Approx(2.0));
  CHECK(f.slope_at(0.999) == Approx(-1.0));
  CHECK(PiecewiseLinear({2.0}, {5.0})(100.0) == 5.0);
  CHECK_THROWS_AS(PiecewiseLinear({0.0, 0.0}, {1.0, 2.0}), InvalidParameter);
  CHECK_THROWS_AS(PiecewiseLinear({0.0, 1.0}, {1.0}), InvalidParameter);
}

TEST_CASE("call and put payoffs") {
  const PayoffSpec call = make_call(1.0);
  CHECK(call(0.5) == 0.0);
  CHECK(call(1.0) == 0.0);
  CHECK(call(2.5) == Approx(1.5));
  CHECK(call.lipschitz() == 1.0);
  CHECK(call.kind() == PayoffKind::call);
  CHECK(!validate(call));

  const PayoffSpec put = make_put(1.0);
  CHECK(put(0.0) == 1.0);
  CHECK(put(0.25) == Approx(0.75));
  CHECK(put(7.0) == 0.0);
  CHECK(!validate(put));

  CHECK(make_call(0.0)(3.0) == Approx(3.0));
  CHECK_THROWS_AS(make_call(-1.0), InvalidParameter);
  CHECK_THROWS_AS(call(-0.1), DomainError);
}

TEST_CASE("identity and constant payoffs are affine") {
  CHECK(make_identity().is_affine());
  CHECK(make_constant(0.3).is_affine());
  CHECK(make_constant(0.3)(12.0) == 0.3);
  CHECK_FALSE(make_call(1.0).is_affine());
  CHECK(!validate(make_identity()));
  CHECK(!validate(make_constant(2.0)));
}

TEST_CASE("validation rejects nonconvex, steep and negative payoffs") {
  const auto concave = make_generic({0.0, 1.0, 2.0}, {0.0, 1.0, 1.5});
  CHECK(validate(concave).kind == PayoffViolation::Kind::nonconvex);

  const auto steep = make_generic({0.0, 1.0, 2.0}, {0.0, 0.0, 3.0}, 2.0);
  CHECK(validate(steep).kind == PayoffViolation::Kind::slope_exceeds_lipschitz);

  const auto negative = make_generic({0.0, 1.0}, {-0.5, 0.5});
  CHECK(validate(negative).kind == PayoffViolation::Kind::negative_value);

  const auto falling = make_generic({0.0, 1.0}, {1.0, 0.5});
  CHECK(validate(falling).kind == PayoffViolation::Kind::negative_value);

  // The default Lipschitz constant is the largest absolute slope.
  CHECK(make_generic({0.0, 1.0, 2.0}, {1.0, 0.0, 3.0}).lipschitz() == Approx(3.0));
}

TEST_CASE("breakpoints left of zero are dropped on the nonnegative axis") {
  const auto g = make_generic({-1.0, 2.0, 3.0}, {3.0, 0.0, 1.0});
  const PiecewiseLinear f = g.on_nonnegative_axis();
  CHECK(f.xs()[0] == 0.0);
  CHECK(f(0.0) == Approx(2.0));
  CHECK(f.size() == 3);
}

TEST_CASE("payoff CSV loading") {
  const auto good = write_temp("good.csv", "x,g\n0,2\n1,1\n2,1\n4,3\n");
  const PayoffSpec g = load_payoff_csv(good);
  CHECK(g.kind() == PayoffKind::generic);
  CHECK(g(3.0) == Approx(2.0));
  CHECK(!validate(g));
  CHECK(load_payoff_csv(good, 5.0).lipschitz() == 5.0);

  const auto unsorted = write_temp("unsorted.csv", "x,g\n0,1\n2,1\n1,1\n");
  try {
    load_payoff_csv(unsorted);
    FAIL("expected an error");
  } catch (const InvalidParameter& e) {
    CHECK(std::string(e.what()).find(":4:") != std::string::npos);
  }

  const auto text = write_temp("text.csv", "x,g\n0,abc\n");
  CHECK_THROWS_WITH(load_payoff_csv(text), Catch::Matchers::ContainsSubstring(":2: non-numeric"));

  const auto one_col = write_temp("onecol.csv", "x,g\n0\n");
  CHECK_THROWS_WITH(load_payoff_csv(one_col), Catch::Matchers::ContainsSubstring("two columns"));

  CHECK_THROWS_AS(load_payoff_csv(write_temp("empty.csv", "x,g\n")), InvalidParameter);
  CHECK_THROWS_AS(load_payoff_csv("/nonexistent/payoff.csv"), InvalidParameter);
}
