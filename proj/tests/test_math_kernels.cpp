#include <cmath>

#include "doctest.h"
#include "ssp/math_kernels.hpp"
#include "ssp/random.hpp"

using namespace ssp;

TEST_CASE("span and sup deviation") {
  CHECK(span({3.0, 3.0, 3.0}) == 0.0);
  CHECK(span({0.0, 2.0}) == doctest::Approx(1.0));
  CHECK(min_sup_deviation_nonpos({1.0, 0.5}) == doctest::Approx(1.0));
  CHECK(min_sup_deviation_nonpos({0.0, 0.0}) == 0.0);
  CHECK_THROWS_AS(min_sup_deviation_nonpos({-1.0}), Error);
}

TEST_CASE("weighted l1 deviation") {
  const MinLocation m = min_weighted_l1_deviation({0.3, 0.2, 0.2, 0.4}, {1, 3, 5, 6}, LambdaConstraint::Free);
  CHECK(m.location == doctest::Approx(5.0));
  CHECK(m.value == doctest::Approx(2.0));
  const MinLocation med = min_weighted_l1_deviation({1, 1, 1}, {4, 1, 9}, LambdaConstraint::Free);
  CHECK(med.location == doctest::Approx(4.0));
  CHECK(med.value == doctest::Approx(8.0));
  const MinLocation np = min_weighted_l1_deviation({1, 1}, {2, 3}, LambdaConstraint::NonPositive);
  CHECK(np.location <= 0.0);
  CHECK(np.value == doctest::Approx(5.0));
  CHECK_THROWS_AS(min_weighted_l1_deviation({0.0, 1.0}, {1, 2}, LambdaConstraint::Free), Error);

  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    Vec a(4), b(4);
    for (int j = 0; j < 4; ++j) {
      a[j] = 0.1 + uniform01(rng);
      b[j] = 4.0 * uniform01(rng) - 2.0;
    }
    const auto f = [&](double l) {
      double v = 0.0;
      for (int j = 0; j < 4; ++j) v += a[j] * std::abs(b[j] - l);
      return v;
    };
    const MinLocation grid = grid_minimize_1d(f, -3.0, 3.0, 1e-4);
    CHECK(min_weighted_l1_deviation(a, b, LambdaConstraint::Free).value <= grid.value + 1e-12);
    CHECK(min_weighted_l1_deviation(a, b, LambdaConstraint::Free).value >= grid.value - 1e-3);
  }
}

TEST_CASE("hyperbola and x log x minima") {
  const MinLocation h = min_hyperbola(1.0, 2.0);
  CHECK(h.location == doctest::Approx(std::sqrt(2.0)));
  CHECK(h.value == doctest::Approx(2.0 * std::sqrt(2.0)));
  const MinLocation h1 = min_hyperbola(1.0, 1.0);
  CHECK(h1.location == doctest::Approx(1.0));
  CHECK(h1.value == doctest::Approx(2.0));
  CHECK_THROWS_AS(min_hyperbola(0.0, 1.0), Error);

  const MinLocation x2 = min_xlog(2.0);
  CHECK(x2.location == doctest::Approx(2.0 / std::exp(1.0)));
  CHECK(x2.value == doctest::Approx(-2.0 / std::exp(1.0)));
  const MinLocation xe = min_xlog(std::exp(1.0));
  CHECK(xe.location == doctest::Approx(1.0));
  CHECK(xe.value == doctest::Approx(-1.0));
}

TEST_CASE("cumulant margin is nonnegative") {
  CHECK(cumulant_bound_margin({0.3, 0.7}, {2.0, 2.0}, 1.0) == doctest::Approx(0.0));
  CHECK(cumulant_bound_margin({0.5, 0.5}, {0.0, 1.0}, 1.0) >= 0.0);
  try {
    cumulant_bound_margin({0.5, 0.5}, {0.0, 1.0}, 0.1);
    FAIL("expected LambdaTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::LambdaTooSmall);
  }
  Rng rng(8);
  double worst = 1.0;
  for (int i = 0; i < 1000; ++i) {
    Vec p = random_simplex(rng, 4);
    p.pop_back();
    Vec x(3);
    for (double& v : x) v = 3.0 * uniform01(rng);
    const double mean = dot(p, x);
    double spread = 1e-6;
    for (double v : x) spread = std::max(spread, std::abs(v - mean));
    worst = std::min(worst, cumulant_bound_margin(p, x, spread * (1.0 + 3.0 * uniform01(rng))));
  }
  CHECK(worst >= -1e-12);
}

TEST_CASE("max-min rearrangement") {
  CHECK(minmax_rearrange_holds({0.2, 0.7}, {0.2, 0.7}));
  CHECK(minmax_rearrange_holds({1.0, 0.9}, {1.0, 2.0}));
  Rng rng(9);
  bool all = true;
  for (int i = 0; i < 10000; ++i) {
    Vec x(3), y(3);
    for (int j = 0; j < 3; ++j) {
      x[j] = 4.0 * uniform01(rng) - 2.0;
      y[j] = 4.0 * uniform01(rng) - 2.0;
    }
    all = all && minmax_rearrange_holds(x, y);
  }
  CHECK(all);
}
