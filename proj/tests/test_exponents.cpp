#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "hardcore/exponents.hpp"
#include "hardcore/moments.hpp"
#include "hardcore/rng.hpp"
#include "hardcore/tree.hpp"

using namespace hardcore;

namespace {

// random point strictly inside the overlap region with all slacks >= margin
struct RegionSampler {
  CounterRng rng{2024, 0};
  double margin;
  explicit RegionSampler(double m) : margin(m) {}

  void sample(DensityPoint& p, OverlapPoint& o) {
    for (;;) {
      const double a = 0.05 + 0.5 * rng.next_double();
      const double b = 0.05 + 0.5 * rng.next_double();
      if (a + b > 0.85) continue;
      const double g = rng.next_double() * a;
      const double dl = rng.next_double() * b;
      const double emax = std::min(a - g, 1 - 2 * b + dl - g);
      if (emax <= 2 * margin) continue;
      const double e = margin + rng.next_double() * (emax - 2 * margin);
      p = {a, b};
      o = {g, dl, e};
      if (region_slack(p, o) >= margin && g >= margin && dl >= margin && e >= margin) return;
    }
  }
};

}  // namespace

TEST_CASE("entropy endpoint values") {
  CHECK(entropy(0.0) == 0.0);
  CHECK(entropy(1.0) == 0.0);
  CHECK(entropy(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(entropy(1.0 / 3.0) ==
        doctest::Approx(std::log(3.0) - (2.0 / 3.0) * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("h1 conventions and the scaled-entropy identity") {
  CHECK(h1(0.0, 0.7) == 0.0);
  CHECK(h1(0.4, 0.4) == 0.0);
  CHECK_THROWS_AS(h1(0.5, 0.4), std::invalid_argument);
  CHECK(h1(1.0 / 9.0, 1.0 / 3.0) ==
        doctest::Approx((1.0 / 3.0) * entropy(1.0 / 3.0)).epsilon(1e-13));
  CounterRng rng(7, 0);
  for (int i = 0; i < 200; ++i) {
    const double y = 0.05 + 0.9 * rng.next_double();
    const double x = rng.next_double() * y;
    CHECK(std::abs(h1(x, y) - y * entropy(x / y)) <= 1e-13);
  }
}

TEST_CASE("first-moment exponent basics") {
  CHECK(phi1({0.0, 0.0}, 1.5, 3) == 0.0);
  CHECK(grad_phi1({1.0 / 3.0, 1.0 / 3.0}, 4.0, 3).norm() <= 1e-10);
}

TEST_CASE("first-moment exponent matches the exact finite-n moment") {
  const std::int64_t n = 3000;
  const double lhs = expected_Z(n, n / 3, n / 3, 4.0, 3) / static_cast<double>(n);
  const double rhs = phi1({1.0 / 3.0, 1.0 / 3.0}, 4.0, 3);
  CHECK(std::abs(lhs - rhs) <= 10 * std::log(static_cast<double>(n)) / static_cast<double>(n));
}

TEST_CASE("pair exponent vanishes at the origin and doubles at the star") {
  CHECK(psi2({0.0, 0.0}, {0.0, 0.0, 0.0}) == 0.0);
  CounterRng rng(11, 0);
  for (int i = 0; i < 300; ++i) {
    const double a = 0.03 + 0.4 * rng.next_double();
    const double b = 0.03 + 0.4 * rng.next_double();
    if (a + b > 0.9) continue;
    const DensityPoint p{a, b};
    const OverlapPoint star = star_point(p);
    CHECK(std::abs(psi2(p, star) - 2 * psi1(p)) <= 1e-12);
  }
}

TEST_CASE("pair exponent matches the finite-n avoidance probability rate") {
  // alpha=beta=1/4, gamma=delta=1/20, eps=1/10
  for (std::int64_t n : {40, 400}) {
    const double val = psi2({0.25, 0.25}, {0.05, 0.05, 0.10});
    const double fin = log_pair_avoidance_term(n, n / 4, n / 4, n / 20, n / 20, n / 10) /
                       static_cast<double>(n);
    CHECK(std::abs(val - fin) <= 5 * std::log(static_cast<double>(n)) / static_cast<double>(n));
  }
}

TEST_CASE("entropy-form and H1-form pair exponents are identical") {
  RegionSampler rs(1e-6);
  DensityPoint p;
  OverlapPoint o;
  for (int i = 0; i < 10000; ++i) {
    rs.sample(p, o);
    CHECK(std::abs(psi2(p, o) - psi2_h1(p, o)) <= 1e-12);
    CHECK(std::abs(phi2(p, o, 2.3, 3) - second_moment_f(p, o, 2.3, 3)) <= 1e-12);
  }
}

TEST_CASE("deficiency is twice-first minus second pointwise") {
  RegionSampler rs(1e-6);
  DensityPoint p;
  OverlapPoint o;
  for (int i = 0; i < 2000; ++i) {
    rs.sample(p, o);
    const double g = gamma_fn(p, o, 4);
    const double direct = 2 * phi1(p, 1.7, 4) - phi2(p, o, 1.7, 4);
    CHECK(std::abs(g - direct) <= 1e-12);
  }
}

TEST_CASE("deficiency vanishes exactly at the star overlap") {
  CounterRng rng(13, 0);
  for (int i = 0; i < 400; ++i) {
    const double a = 0.03 + 0.45 * rng.next_double();
    const double b = 0.03 + 0.45 * rng.next_double();
    if (a + b > 0.92) continue;
    const DensityPoint p{a, b};
    const OverlapPoint star = star_point(p);
    CHECK(std::abs(gamma_fn(p, star, 3)) <= 1e-10);
    CHECK(std::abs(phi2(p, star, 3.3, 3) - 2 * phi1(p, 3.3, 3)) <= 1e-12);
  }
}

TEST_CASE("deficiency is strictly positive near (not at) the star for the balanced point") {
  // the star maximizes the pair exponent at the balanced density, so
  // 2*phi1 - phi2 grows when the overlap moves off the star
  const DensityPoint p{1.0 / 3.0, 1.0 / 3.0};
  const OverlapPoint star = star_point(p);
  for (double h : {1e-3, 5e-3, 2e-2}) {
    CHECK(gamma_fn(p, {star.gamma + h, star.delta, star.epsilon}, 3) > 0);
    CHECK(gamma_fn(p, {star.gamma, star.delta - h, star.epsilon}, 3) > 0);
    CHECK(gamma_fn(p, {star.gamma, star.delta, star.epsilon + h}, 3) > 0);
    CHECK(gamma_fn(p, {star.gamma - h, star.delta + h, star.epsilon - h}, 3) > 0);
  }
}

TEST_CASE("gradient of the pair exponent vanishes at the star") {
  CounterRng rng(17, 0);
  for (int i = 0; i < 200; ++i) {
    const double a = 0.05 + 0.4 * rng.next_double();
    const double b = 0.05 + 0.4 * rng.next_double();
    if (a + b > 0.88) continue;
    const DensityPoint p{a, b};
    CHECK(grad_f(p, star_point(p), 1.9, 3).norm() <= 1e-10);
  }
}

TEST_CASE("pair-exponent Hessian at the balanced d=3 star equals the closed matrix") {
  const DensityPoint p{1.0 / 3.0, 1.0 / 3.0};
  const Eigen::Matrix3d H = hessian_f(p, star_point(p), 4.0, 3);
  Eigen::Matrix3d want;
  want << -243.0 / 4, 81.0 / 2, -243.0 / 4, 81.0 / 2, -81.0 / 2, 81.0 / 2, -243.0 / 4, 81.0 / 2,
      -405.0 / 4;
  CHECK((H - want).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("boundary evaluation of derivatives is rejected") {
  const DensityPoint p{0.3, 0.3};
  CHECK_THROWS_AS(grad_f(p, {0.3, 0.09, 0.0}, 1.0, 3), std::domain_error);  // gamma = alpha
}

TEST_CASE("gradient matches central finite differences") {
  // margin keeps third derivatives bounded so the h^2 truncation term of the
  // central difference stays below the comparison tolerance
  RegionSampler rs(0.02);
  DensityPoint p;
  OverlapPoint o;
  const double h = 1e-5;
  for (int i = 0; i < 1000; ++i) {
    rs.sample(p, o);
    const Eigen::Vector3d g = grad_f(p, o, 2.7, 4);
    const double f0g = second_moment_f(p, {o.gamma + h, o.delta, o.epsilon}, 2.7, 4) -
                       second_moment_f(p, {o.gamma - h, o.delta, o.epsilon}, 2.7, 4);
    const double f0d = second_moment_f(p, {o.gamma, o.delta + h, o.epsilon}, 2.7, 4) -
                       second_moment_f(p, {o.gamma, o.delta - h, o.epsilon}, 2.7, 4);
    const double f0e = second_moment_f(p, {o.gamma, o.delta, o.epsilon + h}, 2.7, 4) -
                       second_moment_f(p, {o.gamma, o.delta, o.epsilon - h}, 2.7, 4);
    const Eigen::Vector3d fd(f0g / (2 * h), f0d / (2 * h), f0e / (2 * h));
    for (int k = 0; k < 3; ++k)
      CHECK(std::abs(g[k] - fd[k]) <= 1e-6 * std::max(1.0, std::abs(g[k])));
  }
}

TEST_CASE("Hessian matches central finite differences of the gradient") {
  RegionSampler rs(0.02);
  DensityPoint p;
  OverlapPoint o;
  const double h = 1e-5;
  for (int i = 0; i < 300; ++i) {
    rs.sample(p, o);
    const Eigen::Matrix3d H = hessian_f(p, o, 1.4, 3);
    Eigen::Matrix3d fd;
    for (int k = 0; k < 3; ++k) {
      OverlapPoint hi = o, lo = o;
      (k == 0 ? hi.gamma : k == 1 ? hi.delta : hi.epsilon) += h;
      (k == 0 ? lo.gamma : k == 1 ? lo.delta : lo.epsilon) -= h;
      fd.col(k) = (grad_f(p, hi, 1.4, 3) - grad_f(p, lo, 1.4, 3)) / (2 * h);
    }
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        CHECK(std::abs(H(r, c) - fd(r, c)) <= 1e-6 * std::max(1.0, std::abs(H(r, c))));
  }
}

TEST_CASE("closed-form slack maximizer") {
  CHECK(std::abs(eps_hat({0.4, 0.3}, 0.16, 0.09) - 0.4 * (1 - 0.7)) <= 1e-13);
  CHECK(std::abs(eps_hat({1.0 / 3, 1.0 / 3}, 1.0 / 9, 1.0 / 9) - 1.0 / 9) <= 1e-13);
  RegionSampler rs(1e-4);
  DensityPoint p;
  OverlapPoint o;
  for (int i = 0; i < 500; ++i) {
    rs.sample(p, o);
    const double eh = eps_hat(p, o.gamma, o.delta);
    if (region_slack(p, {o.gamma, o.delta, eh}) < 1e-9) continue;
    CHECK(std::abs(grad_f(p, {o.gamma, o.delta, eh}, 2.0, 3)[2]) <= 1e-10);
  }
}

TEST_CASE("reduced two-variable exponent and its derivatives") {
  const DensityPoint p{1.0 / 3, 1.0 / 3};
  CHECK(grad_g(p, 1.0 / 9, 1.0 / 9, 1.0, 3).norm() <= 1e-10);

  // finite differences of g_fn
  CounterRng rng(23, 0);
  const double h = 1e-5;
  for (int i = 0; i < 300; ++i) {
    const double a = 0.15 + 0.25 * rng.next_double();
    const double b = 0.15 + 0.25 * rng.next_double();
    const DensityPoint q{a, b};
    const double g = 0.02 + rng.next_double() * (a - 0.06);
    const double dl = 0.02 + rng.next_double() * (b - 0.06);
    const double eh = eps_hat(q, g, dl);
    if (region_slack(q, {g, dl, eh}) < 1e-3) continue;
    const Eigen::Vector2d an = grad_g(q, g, dl, 1.8, 4);
    const Eigen::Vector2d fd((g_fn(q, g + h, dl, 1.8, 4) - g_fn(q, g - h, dl, 1.8, 4)) / (2 * h),
                             (g_fn(q, g, dl + h, 1.8, 4) - g_fn(q, g, dl - h, 1.8, 4)) / (2 * h));
    for (int k = 0; k < 2; ++k)
      CHECK(std::abs(an[k] - fd[k]) <= 1e-6 * std::max(1.0, std::abs(an[k])));

    const Eigen::Matrix2d H = hessian_g(q, g, dl, 1.8, 4);
    Eigen::Matrix2d Hfd;
    Hfd.col(0) = (grad_g(q, g + h, dl, 1.8, 4) - grad_g(q, g - h, dl, 1.8, 4)) / (2 * h);
    Hfd.col(1) = (grad_g(q, g, dl + h, 1.8, 4) - grad_g(q, g, dl - h, 1.8, 4)) / (2 * h);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        CHECK(std::abs(H(r, c) - Hfd(r, c)) <= 1e-6 * std::max(1.0, std::abs(H(r, c))));
  }
}

TEST_CASE("reduced-exponent cross derivative is positive for balanced d >= 4") {
  for (int d : {4, 5}) {
    const double ab = 1.0 / d;
    const DensityPoint p{ab, ab};
    for (int i = 1; i <= 12; ++i)
      for (int j = 1; j <= 12; ++j) {
        const double g = ab * i / 13.0;
        const double dl = ab * j / 13.0;
        const double eh = eps_hat(p, g, dl);
        if (region_slack(p, {g, dl, eh}) < 1e-6) continue;
        CHECK(hessian_g(p, g, dl, 1.0, d)(0, 1) > 0);
      }
  }
}

TEST_CASE("multistart finds the star as the unique interior maximum") {
  for (int d : {3, 4}) {
    const double ab = 1.0 / d;
    const auto rep = find_stationary_points({ab, ab}, lambda_c(d), d, 120, 5);
    REQUIRE(rep.points.size() == 1);
    CHECK(rep.unique_interior_max);
    const auto& sp = rep.points[0];
    CHECK(sp.is_max);
    CHECK(std::abs(sp.point.gamma - ab * ab) <= 1e-8);
    CHECK(std::abs(sp.point.delta - ab * ab) <= 1e-8);
    CHECK(std::abs(sp.point.epsilon - ab * (1 - 2 * ab)) <= 1e-8);
    CHECK(sp.gradient_norm <= 1e-8);
  }
  CHECK_THROWS_AS(find_stationary_points({0.25, 0.25}, 1.0, 4, 50, 1), std::invalid_argument);
}

TEST_CASE("characteristic polynomial of the d=3 maximum Hessian") {
  const auto rep = find_stationary_points({1.0 / 3, 1.0 / 3}, 4.0, 3, 120, 9);
  REQUIRE(rep.points.size() == 1);
  const Eigen::Matrix3d H = rep.points[0].hessian;
  // x^3 - tr x^2 + m2 x - det  ==  x^3 + c2 x^2 + c1 x + c0
  const double c2 = -H.trace();
  const double m2 = H(0, 0) * H(1, 1) - H(0, 1) * H(1, 0) + H(0, 0) * H(2, 2) -
                    H(0, 2) * H(2, 0) + H(1, 1) * H(2, 2) - H(1, 2) * H(2, 1);
  const double c0 = -H.determinant();
  CHECK(std::abs(c2 - 405.0 / 2) <= 1e-9 * (405.0 / 2));
  CHECK(std::abs(m2 - 45927.0 / 8) <= 1e-9 * (45927.0 / 8));
  CHECK(std::abs(c0 - 531441.0 / 16) <= 1e-9 * (531441.0 / 16));
}

TEST_CASE("polynomial sign claims hold") {
  const auto d3 = verify_appendix_polynomials(3);
  REQUIRE(d3.size() == 6);
  for (const auto& c : d3) {
    CHECK(c.grid_ok);
    CHECK(c.certified);
  }
  CHECK(d3[0].name == "27e^2-9e+1");
  CHECK(d3[0].grid_min == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(d3[0].worst_point == doctest::Approx(1.0 / 6).epsilon(1e-3));
  for (int d : {4, 5, 7}) {
    for (const auto& c : verify_appendix_polynomials(d)) {
      CHECK(c.grid_ok);
      CHECK(c.certified);
    }
  }
  CHECK_THROWS_AS(verify_appendix_polynomials(2), std::invalid_argument);
}

TEST_CASE("first-moment landscape below and above the threshold") {
  // unique symmetric maximizer below
  const auto low = maximize_phi1(3.8, 3);
  REQUIRE(low.maximizers.size() == 1);
  const double ps = symmetric_fixed_point(3.8, 3);
  CHECK(std::abs(low.maximizers[0].point.alpha - ps) <= 1e-8);
  CHECK(std::abs(low.maximizers[0].point.beta - ps) <= 1e-8);
  CHECK(!low.symmetric_is_saddle);

  // split pair above
  const auto high = maximize_phi1(4.4, 3);
  REQUIRE(high.maximizers.size() == 2);
  const auto fp = semi_invariant_fixed_points(4.4, 3);
  const auto& m0 = high.maximizers[0].point;
  const auto& m1 = high.maximizers[1].point;
  const double lo = std::min(m0.alpha, m1.alpha);
  const double hi = std::max(m0.alpha, m1.alpha);
  CHECK(std::abs(lo - fp.p1) <= 1e-8);
  CHECK(std::abs(hi - fp.p2) <= 1e-8);
  CHECK(high.symmetric_is_saddle);
  CHECK(high.symmetric_eigs.maxCoeff() >= 0.0);

  // mutual fixed-point identities and the local-max constraint
  for (const auto& lm : {low, high})
    for (const auto& m : lm.maximizers) {
      CHECK(std::abs(tree_recursion(m.point.alpha, lm.maximizers.size() == 1 ? 3.8 : 4.4, 3).value -
                     m.point.beta) <= 1e-9);
      CHECK(m.point.alpha + m.point.beta + 3 * (3 - 2) * m.point.alpha * m.point.beta <=
            1 + 1e-9);
    }
}
