#include "hardcore/tree.hpp"

#include <cmath>
#include <stdexcept>

namespace hardcore {

double lambda_c(int d) {
  if (d < 3) throw std::invalid_argument("lambda_c: d must be >= 3");
  return std::pow(d - 1.0, d - 1.0) / std::pow(d - 2.0, static_cast<double>(d));
}

static void check_recursion_args(double x, double lambda, int d) {
  if (!(x >= 0.0) || x >= 1.0) throw std::invalid_argument("tree_recursion: need 0 <= x < 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("tree_recursion: lambda must be positive");
  if (d < 3) throw std::invalid_argument("tree_recursion: d must be >= 3");
}

RecursionValue tree_recursion(double x, double lambda, int d) {
  check_recursion_args(x, lambda, d);
  if (x == 0.0) return {1.0, 1.0};
  const double u = std::pow(x / (lambda * (1.0 - x)), 1.0 / d);
  const double raw = (1.0 - x) * (1.0 - u);
  return {raw < 0.0 ? 0.0 : raw, raw};
}

double tree_recursion_derivative(double x, double lambda, int d) {
  check_recursion_args(x, lambda, d);
  if (x == 0.0) throw std::invalid_argument("tree_recursion_derivative: x must be > 0");
  const double u = std::pow(x / (lambda * (1.0 - x)), 1.0 / d);
  return -1.0 + u * (1.0 - 1.0 / (d * x));
}

double symmetric_fixed_point(double lambda, int d) {
  if (!(lambda > 0.0)) throw std::invalid_argument("symmetric_fixed_point: lambda must be positive");
  if (d < 3) throw std::invalid_argument("symmetric_fixed_point: d must be >= 3");
  // f(x) - x is strictly decreasing: + near 0, - at x = lambda/(1+lambda) where f = 0
  double lo = 1e-300, hi = lambda / (1.0 + lambda);
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (tree_recursion(mid, lambda, d).value - mid > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double p = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {  // Newton polish on f(x) - x
    const double g = tree_recursion(p, lambda, d).value - p;
    if (std::abs(g) <= 1e-15) break;
    const double dg = tree_recursion_derivative(p, lambda, d) - 1.0;
    double step = -g / dg;
    double q = p + step;
    if (!(q > 0.0) || q >= lambda / (1.0 + lambda)) break;  // keep the bracketed root
    p = q;
  }
  if (std::abs(tree_recursion(p, lambda, d).value - p) > 1e-12)
    throw std::runtime_error("symmetric_fixed_point: residual tolerance not met");
  return p;
}

namespace {

double f2_minus_x(double x, double lambda, int d) {
  const double y = tree_recursion(x, lambda, d).value;
  if (y >= 1.0) return 1.0;  // f(x)=1 only at x=0; treat as escape upward
  return tree_recursion(y, lambda, d).value - x;
}

double f2_derivative(double x, double lambda, int d) {
  const double y = tree_recursion(x, lambda, d).value;
  return tree_recursion_derivative(y, lambda, d) * tree_recursion_derivative(x, lambda, d) - 1.0;
}

}  // namespace

TreeFixedPoints semi_invariant_fixed_points(double lambda, int d) {
  TreeFixedPoints out;
  out.lambda = lambda;
  out.d = d;
  out.p_star = symmetric_fixed_point(lambda, d);
  const double ps = out.p_star;

  // At or below the critical activity the doubled recursion has a single
  // fixed point; skip the search there, since F(x) - x is flat to machine
  // precision near p_star and a grid scan can pick up noise-level sign flips.
  if (lambda <= lambda_c(d)) {
    out.p1 = ps;
    out.p2 = ps;
    out.is_unique = true;
    return out;
  }

  // Search for the smallest fixed point of F = f∘f below p_star.  F(x) - x is
  // negative near 0 and, when the semi-invariant pair exists, positive just
  // below p_star; it has no sign change at all in the uniqueness regime.
  double lo = -1.0, hi = -1.0;
  double prev_x = ps * 1e-12;
  double prev_g = f2_minus_x(prev_x, lambda, d);
  const int kGrid = 1024;
  for (int j = 1; j <= kGrid && lo < 0.0; ++j) {
    const double x = ps * static_cast<double>(j) / (kGrid + 1);
    const double g = f2_minus_x(x, lambda, d);
    if (prev_g < 0.0 && g >= 0.0) {
      lo = prev_x;
      hi = x;
    }
    prev_x = x;
    prev_g = g;
  }
  if (lo < 0.0) {
    // refine toward p_star: the pitchfork opens like sqrt(lambda - lambda_c),
    // so a geometric ladder catches sign changes arbitrarily close to p_star
    for (int m = 11; m <= 45 && lo < 0.0; ++m) {
      const double x = ps * (1.0 - std::pow(0.5, m));
      const double g = f2_minus_x(x, lambda, d);
      if (prev_g < 0.0 && g >= 0.0) {
        lo = prev_x;
        hi = x;
      }
      prev_x = x;
      prev_g = g;
    }
  }

  if (lo < 0.0) {  // no sign change: unique fixed point
    out.p1 = ps;
    out.p2 = ps;
    out.is_unique = true;
    return out;
  }

  for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f2_minus_x(mid, lambda, d) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double p1 = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {
    const double g = f2_minus_x(p1, lambda, d);
    if (std::abs(g) <= 1e-15) break;
    const double dg = f2_derivative(p1, lambda, d);
    const double q = p1 - g / dg;
    if (!(q > 0.0) || q >= ps) break;
    p1 = q;
  }
  if (std::abs(f2_minus_x(p1, lambda, d)) > 1e-13)
    throw std::runtime_error("semi_invariant_fixed_points: residual tolerance not met");

  out.p1 = p1;
  out.p2 = tree_recursion(p1, lambda, d).value;
  out.is_unique = std::abs(out.p2 - out.p1) <= 1e-9;
  return out;
}

}  // namespace hardcore
