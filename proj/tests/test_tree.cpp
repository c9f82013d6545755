#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "hardcore/tree.hpp"

using hardcore::lambda_c;
using hardcore::semi_invariant_fixed_points;
using hardcore::symmetric_fixed_point;
using hardcore::tree_recursion;

TEST_CASE("critical activity values") {
  CHECK(lambda_c(3) == 4.0);
  CHECK(lambda_c(4) == 1.6875);
  CHECK(lambda_c(6) == doctest::Approx(3125.0 / 4096.0).epsilon(1e-15));
  CHECK(lambda_c(6) > 0.7625);
  CHECK(lambda_c(6) < 0.7635);
  CHECK_THROWS_AS(lambda_c(2), std::invalid_argument);
}

TEST_CASE("recursion endpoint and critical fixed point") {
  CHECK(tree_recursion(0.0, 1.0, 3).value == 1.0);
  CHECK(tree_recursion(1.0 / 3.0, 4.0, 3).value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(tree_recursion(1.0, 1.0, 3), std::invalid_argument);
}

TEST_CASE("clamping: raw value goes negative past lambda/(1+lambda)") {
  const auto r = tree_recursion(0.9, 1.0, 3);
  CHECK(r.raw < 0.0);
  CHECK(r.value == 0.0);
}

TEST_CASE("raw recursion strictly decreasing up to its zero crossing") {
  for (int d : {3, 4, 6})
    for (double lambda : {0.3, 1.0, 4.0, 8.0}) {
      const double x_zero = lambda / (1 + lambda);
      double prev = tree_recursion(1e-4, lambda, d).raw;
      for (int i = 1; i <= 400; ++i) {
        const double x = 1e-4 + (x_zero - 1e-4) * i / 400.0;
        const double cur = tree_recursion(x, lambda, d).raw;
        CHECK(cur < prev);
        prev = cur;
      }
    }
}

TEST_CASE("symmetric fixed point: residual, critical value, small-lambda limit") {
  for (int d : {3, 4, 5, 6})
    for (double lambda : {0.05, 0.5, 1.0, lambda_c(d), 2 * lambda_c(d), 10.0}) {
      const double p = symmetric_fixed_point(lambda, d);
      CHECK(std::abs(tree_recursion(p, lambda, d).value - p) <= 1e-12);
    }
  for (int d : {3, 4, 5, 6})
    CHECK(std::abs(symmetric_fixed_point(lambda_c(d), d) - 1.0 / d) <= 1e-10);
  CHECK(symmetric_fixed_point(0.001, 3) < 0.001);
}

// independent root finder: plain bisection on f(x) - x with no Newton polish
static double bisect_fixed_point(double lambda, int d) {
  double lo = 0.0, hi = lambda / (1 + lambda);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (tree_recursion(mid, lambda, d).value - mid > 0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

TEST_CASE("two independent root finders agree") {
  for (int d : {3, 6})
    for (double lambda : {0.4, 1.0, 4.0}) {
      const double a = symmetric_fixed_point(lambda, d);
      const double b = bisect_fixed_point(lambda, d);
      CHECK(std::abs(a - b) <= 1e-10);
    }
}

TEST_CASE("uniqueness below the critical activity") {
  const auto fp = semi_invariant_fixed_points(0.9 * lambda_c(3), 3);
  CHECK(fp.is_unique);
  CHECK(std::abs(fp.p1 - fp.p_star) <= 1e-9);
  CHECK(std::abs(fp.p2 - fp.p_star) <= 1e-9);
}

TEST_CASE("semi-invariant pair above the critical activity") {
  const auto fp = semi_invariant_fixed_points(4.2, 3);
  CHECK(!fp.is_unique);
  CHECK(fp.p1 < 1.0 / 3.0);
  CHECK(fp.p2 > 1.0 / 3.0);
  CHECK(std::abs(tree_recursion(fp.p1, 4.2, 3).value - fp.p2) <= 1e-10);
  CHECK(std::abs(tree_recursion(fp.p2, 4.2, 3).value - fp.p1) <= 1e-10);
  CHECK(fp.p1 < fp.p_star);
  CHECK(fp.p_star < fp.p2);
}

TEST_CASE("pair ordering for several degrees above threshold") {
  for (int d : {3, 4, 5, 6}) {
    const double lam = lambda_c(d) * 1.05;
    const auto fp = semi_invariant_fixed_points(lam, d);
    CHECK(fp.p1 < fp.p_star);
    CHECK(fp.p_star < fp.p2);
    CHECK(std::abs(tree_recursion(fp.p1, lam, d).value - fp.p2) <= 1e-10);
  }
}

TEST_CASE("gap closes monotonically toward the critical activity") {
  double prev_gap = 1.0;
  for (double lambda : {4.5, 4.25, 4.1, 4.01}) {
    const auto fp = semi_invariant_fixed_points(lambda, 3);
    const double gap = fp.p2 - fp.p1;
    CHECK(gap > 0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
}

TEST_CASE("uniqueness flag along a lambda grid is monotone") {
  int prev = 1;
  for (double lambda = 3.5; lambda <= 5.0 + 1e-12; lambda += 0.05) {
    const auto fp = semi_invariant_fixed_points(lambda, 3);
    const int u = fp.is_unique ? 1 : 0;
    CHECK(u <= prev);
    if (lambda <= lambda_c(3)) CHECK(u == 1);
    if (lambda > lambda_c(3) * (1 + 1e-6)) CHECK(u == 0);
    prev = u;
  }
}

TEST_CASE("fixed points move continuously in lambda") {
  double prev_star = symmetric_fixed_point(3.5, 3);
  auto prev_pair = semi_invariant_fixed_points(4.05, 3);
  for (double lambda = 3.51; lambda <= 5.0; lambda += 0.01) {
    const double p = symmetric_fixed_point(lambda, 3);
    CHECK(std::abs(p - prev_star) < 0.01);
    prev_star = p;
  }
  for (double lambda = 4.06; lambda <= 5.0; lambda += 0.01) {
    const auto fp = semi_invariant_fixed_points(lambda, 3);
    CHECK(std::abs(fp.p1 - prev_pair.p1) < 0.02);
    CHECK(std::abs(fp.p2 - prev_pair.p2) < 0.02);
    prev_pair = fp;
  }
}
