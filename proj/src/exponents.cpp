#include "hardcore/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hardcore/numerics.hpp"
#include "hardcore/tree.hpp"

namespace hardcore {

double entropy(double x) {
  if (!(x >= 0.0) || x > 1.0) throw std::invalid_argument("entropy: need 0 <= x <= 1");
  return -xlogy(x, x) - xlogy(1.0 - x, 1.0 - x);
}

double h1(double x, double y) {
  if (!(x >= 0.0) || x > y) throw std::invalid_argument("h1: need 0 <= x <= y");
  if (y == 0.0) return 0.0;
  // -x(ln x - ln y) + (x-y)(ln(y-x) - ln y) == y*Ent(x/y)
  return -(xlogy(x, x) - xlogy(x, y)) + (xlogy(x - y, y - x) - xlogy(x - y, y));
}

// y * Ent(x/y); 0 when y = 0 (then x = 0 in all uses)
static double scaled_ent(double x, double y) {
  if (y <= 0.0) return 0.0;
  double t = x / y;
  if (t < 0.0) t = 0.0;
  if (t > 1.0) t = 1.0;
  return y * entropy(t);
}

double psi1(const DensityPoint& p) {
  return scaled_ent(p.alpha, 1.0 - p.beta) - entropy(p.alpha);
}

double phi1(const DensityPoint& p, double lambda, int d) {
  return (p.alpha + p.beta) * std::log(lambda) + entropy(p.alpha) + entropy(p.beta) +
         d * psi1(p);
}

Eigen::Vector2d grad_phi1(const DensityPoint& p, double lambda, int d) {
  const double a = p.alpha, b = p.beta;
  Eigen::Vector2d g;
  g[0] = std::log(lambda) + std::log((1.0 - a) / a) + d * std::log((1.0 - a - b) / (1.0 - a));
  g[1] = std::log(lambda) + std::log((1.0 - b) / b) + d * std::log((1.0 - a - b) / (1.0 - b));
  return g;
}

Eigen::Matrix2d hessian_phi1(const DensityPoint& p, int d) {
  const double a = p.alpha, b = p.beta, s = 1.0 - a - b;
  Eigen::Matrix2d h;
  h(0, 0) = -1.0 / (a * (1.0 - a)) + d * (1.0 / (1.0 - a) - 1.0 / s);
  h(1, 1) = -1.0 / (b * (1.0 - b)) + d * (1.0 / (1.0 - b) - 1.0 / s);
  h(0, 1) = h(1, 0) = -d / s;
  return h;
}

std::vector<double> region_slacks(const DensityPoint& p, const OverlapPoint& o) {
  const double a = p.alpha, b = p.beta, g = o.gamma, dl = o.delta, e = o.epsilon;
  return {g,
          a - g,
          dl,
          b - dl,
          e,
          a - g - e,
          (b - dl) - (a - g - e),
          1.0 - 2.0 * b + dl - g - e,
          1.0 - a - b - e,
          1.0 - 2.0 * a + g};
}

double region_slack(const DensityPoint& p, const OverlapPoint& o) {
  double m = std::numeric_limits<double>::infinity();
  for (double s : region_slacks(p, o)) m = std::min(m, s);
  return m;
}

static void require_region(const DensityPoint& p, const OverlapPoint& o) {
  if (region_slack(p, o) < -1e-13)
    throw std::domain_error("overlap point outside the admissible region");
}

double psi2(const DensityPoint& p, const OverlapPoint& o) {
  require_region(p, o);
  const double a = p.alpha, b = p.beta, g = o.gamma, dl = o.delta, e = o.epsilon;
  return scaled_ent(g, 1.0 - 2.0 * b + dl) - entropy(g) +
         scaled_ent(e, 1.0 - 2.0 * b + dl - g) + scaled_ent(a - g - e, b - dl) -
         scaled_ent(a - g, 1.0 - g) + scaled_ent(a - g, 1.0 - b - g - e) -
         scaled_ent(a - g, 1.0 - a);
}

// same surface through H1; boundary values may need tiny clamps against
// -1e-13-scale slack noise allowed by require_region
static double h1_clamped(double x, double y) {
  if (x < 0.0) x = 0.0;
  if (x > y) x = y;
  if (y <= 0.0) return 0.0;
  return h1(x, y);
}

double psi2_h1(const DensityPoint& p, const OverlapPoint& o) {
  require_region(p, o);
  const double a = p.alpha, b = p.beta, g = o.gamma, dl = o.delta, e = o.epsilon;
  return h1_clamped(g, 1.0 - 2.0 * b + dl) - entropy(std::clamp(g, 0.0, 1.0)) +
         h1_clamped(e, 1.0 - 2.0 * b + dl - g) + h1_clamped(a - g - e, b - dl) -
         h1_clamped(a - g, 1.0 - g) + h1_clamped(a - g, 1.0 - b - g - e) -
         h1_clamped(a - g, 1.0 - a);
}

double phi2(const DensityPoint& p, const OverlapPoint& o, double lambda, int d) {
  const double a = p.alpha, b = p.beta, g = o.gamma, dl = o.delta;
  return 2.0 * (a + b) * std::log(lambda) + entropy(a) + scaled_ent(g, a) +
         scaled_ent(a - g, 1.0 - a) + entropy(b) + scaled_ent(dl, b) +
         scaled_ent(b - dl, 1.0 - b) + d * psi2(p, o);
}

double second_moment_f(const DensityPoint& p, const OverlapPoint& o, double lambda, int d) {
  const double a = p.alpha, b = p.beta, g = o.gamma, dl = o.delta;
  return 2.0 * (a + b) * std::log(lambda) + entropy(a) + h1_clamped(g, a) +
         h1_clamped(a - g, 1.0 - a) + entropy(b) + h1_clamped(dl, b) +
         h1_clamped(b - dl, 1.0 - b) + d * psi2_h1(p, o);
}

double gamma_fn(const DensityPoint& p, const OverlapPoint& o, int d) {
  const double a = p.alpha, b = p.beta, g = o.gamma, dl = o.delta;
  return entropy(a) + entropy(b) -
         (scaled_ent(g, a) + scaled_ent(a - g, 1.0 - a) + scaled_ent(dl, b) +
          scaled_ent(b - dl, 1.0 - b)) +
         d * (2.0 * psi1(p) - psi2(p, o));
}

static void require_interior(const DensityPoint& p, const OverlapPoint& o) {
  if (region_slack(p, o) < 1e-12)
    throw std::domain_error("derivative evaluation needs region slack >= 1e-12");
}

Eigen::Vector3d grad_f(const DensityPoint& p, const OverlapPoint& o, double /*lambda*/, int d) {
  require_interior(p, o);
  const double a = p.alpha, b = p.beta, g = o.gamma, dl = o.delta, e = o.epsilon;
  const double A = 1.0 - 2.0 * b + dl - g - e;  // right side untouched by either set
  const double B = a - g - e;
  const double C = 1.0 - 2.0 * a + g;
  const double D = (b - dl) - (a - g - e);
  const double E = 1.0 - b - g - e;
  const double F = a - g;
  const double G = 1.0 - 2.0 * b + dl;
  const double I = b - dl;
  const double J = 1.0 - a - b - e;
  Eigen::Vector3d r;
  r[0] = d * std::log(A) + d * std::log(B) + (d - 1) * std::log(C) - d * std::log(E) -
         d * std::log(D) - (d - 2) * std::log(F) - std::log(g);
  r[1] = d * std::log(D) + (d - 1) * std::log(G) - d * std::log(A) - (d - 2) * std::log(I) -
         std::log(dl);
  r[2] = d * std::log(A) + d * std::log(B) + d * std::log(J) - d * std::log(E) -
         d * std::log(D) - d * std::log(e);
  return r;
}

Eigen::Matrix3d hessian_f(const DensityPoint& p, const OverlapPoint& o, double /*lambda*/, int d) {
  require_interior(p, o);
  const double a = p.alpha, b = p.beta, g = o.gamma, dl = o.delta, e = o.epsilon;
  const double A = 1.0 - 2.0 * b + dl - g - e;
  const double B = a - g - e;
  const double C = 1.0 - 2.0 * a + g;
  const double D = (b - dl) - (a - g - e);
  const double E = 1.0 - b - g - e;
  const double F = a - g;
  const double G = 1.0 - 2.0 * b + dl;
  const double I = b - dl;
  const double J = 1.0 - a - b - e;
  const double fgg = -d / A - d / B + (d - 1) / C - d / D + d / E + (d - 2) / F - 1.0 / g;
  const double fgd = d / A + d / D;
  const double fge = -d / A - d / B - d / D + d / E;
  const double fdd = -d / D + (d - 1) / G - d / A + (d - 2) / I - 1.0 / dl;
  const double fde = d / D + d / A;
  const double fee = -d / A - d / B - d / J + d / E - d / D - d / e;
  Eigen::Matrix3d h;
  h << fgg, fgd, fge, fgd, fdd, fde, fge, fde, fee;
  return h;
}

OverlapPoint star_point(const DensityPoint& p) {
  return {p.alpha * p.alpha, p.beta * p.beta, p.alpha * (1.0 - p.alpha - p.beta)};
}

double eps_hat(const DensityPoint& p, double gamma, double delta) {
  const double a = p.alpha, b = p.beta;
  if (gamma > a || delta > b) throw std::invalid_argument("eps_hat: need gamma <= alpha, delta <= beta");
  const double disc = (1.0 - a - b) * (1.0 - a - b) + 4.0 * (a - gamma) * (b - delta);
  if (disc < 0.0) throw std::logic_error("eps_hat: negative discriminant");
  return 0.5 * (1.0 + a - b - 2.0 * gamma - std::sqrt(disc));
}

double g_fn(const DensityPoint& p, double gamma, double delta, double lambda, int d) {
  return second_moment_f(p, {gamma, delta, eps_hat(p, gamma, delta)}, lambda, d);
}

Eigen::Vector2d grad_g(const DensityPoint& p, double gamma, double delta, double lambda, int d) {
  const Eigen::Vector3d gf = grad_f(p, {gamma, delta, eps_hat(p, gamma, delta)}, lambda, d);
  return {gf[0], gf[1]};
}

Eigen::Matrix2d hessian_g(const DensityPoint& p, double gamma, double delta, double lambda, int d) {
  const double a = p.alpha, b = p.beta;
  const double eh = eps_hat(p, gamma, delta);
  const double root =
      std::sqrt((1.0 - a - b) * (1.0 - a - b) + 4.0 * (a - gamma) * (b - delta));
  const double deh_dg = -1.0 + (b - delta) / root;
  const double deh_dd = (a - gamma) / root;
  const Eigen::Matrix3d hf = hessian_f(p, {gamma, delta, eh}, lambda, d);
  Eigen::Matrix2d h;
  h(0, 0) = hf(0, 0) + deh_dg * hf(0, 2);
  h(0, 1) = h(1, 0) = hf(1, 0) + deh_dg * hf(1, 2);
  h(1, 1) = hf(1, 1) + deh_dd * hf(1, 2);
  return h;
}

// ---- multistart stationary-point search ------------------------------------

namespace {

double halton(std::uint64_t i, int base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
    i /= static_cast<std::uint64_t>(base);
  }
  return r;
}

bool feasible_start(const DensityPoint& p, double u1, double u2, double u3, OverlapPoint& out) {
  const double a = p.alpha, b = p.beta;
  const double m = 0.03;  // stay away from the boundary where derivatives blow up
  const double g = a * (m + (1.0 - 2.0 * m) * u1);
  const double dl = b * (m + (1.0 - 2.0 * m) * u2);
  double lo = std::max(0.0, (a - g) - (b - dl));
  double hi = std::min({a - g, 1.0 - a - b, 1.0 - 2.0 * b + dl - g});
  const double w = hi - lo;
  if (!(w > 1e-6)) return false;
  out = {g, dl, lo + w * (m + (1.0 - 2.0 * m) * u3)};
  return region_slack(p, out) > 1e-9;
}

struct NewtonResult {
  OverlapPoint x;
  double grad_norm = 0;
  bool converged = false;
};

NewtonResult newton_on_gradient(const DensityPoint& p, OverlapPoint start, double lambda, int d) {
  Eigen::Vector3d x(start.gamma, start.delta, start.epsilon);
  auto pt = [](const Eigen::Vector3d& v) { return OverlapPoint{v[0], v[1], v[2]}; };
  double gnorm = grad_f(p, pt(x), lambda, d).norm();
  for (int it = 0; it < 200; ++it) {
    if (gnorm <= 1e-11) return {pt(x), gnorm, true};
    const Eigen::Vector3d g = grad_f(p, pt(x), lambda, d);
    const Eigen::Matrix3d H = hessian_f(p, pt(x), lambda, d);
    Eigen::Vector3d step = H.fullPivLu().solve(-g);
    if (!step.allFinite()) step = -g * 1e-3;
    bool accepted = false;
    double t = 1.0;
    for (int bt = 0; bt < 50; ++bt, t *= 0.5) {
      const Eigen::Vector3d y = x + t * step;
      if (region_slack(p, pt(y)) < 1e-12) continue;
      const double gy = grad_f(p, pt(y), lambda, d).norm();
      if (gy < gnorm * (1.0 - 1e-4 * t) || gy < 1e-11) {
        x = y;
        gnorm = gy;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Levenberg fallback on the squared gradient norm
      const Eigen::Matrix3d HtH = H * H;
      double mu = std::max(1e-8, 1e-6 * HtH.trace() / 3.0);
      bool lm_ok = false;
      for (int k = 0; k < 25 && !lm_ok; ++k, mu *= 10.0) {
        const Eigen::Vector3d s =
            (HtH + mu * Eigen::Matrix3d::Identity()).ldlt().solve(-(H * g));
        const Eigen::Vector3d y = x + s;
        if (!s.allFinite() || region_slack(p, pt(y)) < 1e-12) continue;
        const double gy = grad_f(p, pt(y), lambda, d).norm();
        if (gy < gnorm) {
          x = y;
          gnorm = gy;
          lm_ok = true;
        }
      }
      if (!lm_ok) return {pt(x), gnorm, false};
    }
  }
  return {pt(x), gnorm, gnorm <= 1e-11};
}

}  // namespace

StationaryReport find_stationary_points(const DensityPoint& p, double lambda, int d,
                                        int n_starts, std::uint64_t seed) {
  if (n_starts < 100) throw std::invalid_argument("find_stationary_points: n_starts >= 100");
  StationaryReport rep;
  rep.n_starts = n_starts;

  std::vector<NewtonResult> converged;
  int produced = 0;
  std::uint64_t idx = seed;
  int guard = 0;
  while (produced < n_starts && guard < 200 * n_starts) {
    ++guard;
    ++idx;
    OverlapPoint start;
    if (!feasible_start(p, halton(idx, 2), halton(idx, 3), halton(idx, 5), start)) continue;
    ++produced;
    NewtonResult r = newton_on_gradient(p, start, lambda, d);
    if (r.converged)
      converged.push_back(r);
    else
      ++rep.n_failed;
  }
  rep.n_starts = produced;
  rep.n_converged = static_cast<int>(converged.size());

  std::sort(converged.begin(), converged.end(), [](const NewtonResult& a, const NewtonResult& b) {
    if (a.x.gamma != b.x.gamma) return a.x.gamma < b.x.gamma;
    if (a.x.delta != b.x.delta) return a.x.delta < b.x.delta;
    return a.x.epsilon < b.x.epsilon;
  });

  auto dist = [](const OverlapPoint& u, const OverlapPoint& v) {
    const double dg = u.gamma - v.gamma, dd = u.delta - v.delta, de = u.epsilon - v.epsilon;
    return std::sqrt(dg * dg + dd * dd + de * de);
  };

  for (const NewtonResult& r : converged) {
    bool merged = false;
    for (StationaryPoint& sp : rep.points) {
      if (dist(sp.point, r.x) < 1e-6) {
        ++sp.basin_count;
        if (r.grad_norm < sp.gradient_norm) {
          sp.point = r.x;
          sp.gradient_norm = r.grad_norm;
        }
        merged = true;
        break;
      }
    }
    if (!merged) {
      StationaryPoint sp;
      sp.point = r.x;
      sp.gradient_norm = r.grad_norm;
      sp.basin_count = 1;
      rep.points.push_back(sp);
    }
  }

  for (StationaryPoint& sp : rep.points) {
    sp.value = second_moment_f(p, sp.point, lambda, d);
    sp.hessian = hessian_f(p, sp.point, lambda, d);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(sp.hessian);
    sp.is_max = (es.eigenvalues().maxCoeff() < -1e-9);
  }
  std::sort(rep.points.begin(), rep.points.end(),
            [](const StationaryPoint& a, const StationaryPoint& b) { return a.value > b.value; });
  rep.unique_interior_max = rep.points.size() == 1 && rep.points[0].is_max && rep.n_converged > 0;
  return rep;
}

// ---- polynomial sign certification ------------------------------------------

namespace {

double poly_eval(const std::vector<double>& coeffs_desc, double x) {
  double r = 0.0;
  for (double c : coeffs_desc) r = r * x + c;
  return r;
}

struct Interval {
  double lo, hi;
};

Interval iv_widen(double lo, double hi) {
  return {std::nextafter(lo, -std::numeric_limits<double>::infinity()),
          std::nextafter(hi, std::numeric_limits<double>::infinity())};
}

Interval iv_mul(Interval a, Interval b) {
  const double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return iv_widen(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}));
}

Interval iv_add(Interval a, double c) { return iv_widen(a.lo + c, a.hi + c); }

Interval poly_eval_interval(const std::vector<double>& coeffs_desc, Interval x) {
  Interval r{coeffs_desc[0], coeffs_desc[0]};
  for (std::size_t i = 1; i < coeffs_desc.size(); ++i) r = iv_add(iv_mul(r, x), coeffs_desc[i]);
  return r;
}

bool certify_sign(const std::vector<double>& coeffs_desc, double lo, double hi, int sign,
                  int depth = 0) {
  const Interval v = poly_eval_interval(coeffs_desc, {lo, hi});
  if (sign > 0 && v.lo > 0.0) return true;
  if (sign < 0 && v.hi < 0.0) return true;
  if (depth >= 60 || hi - lo < 1e-14) return false;
  const double mid = 0.5 * (lo + hi);
  return certify_sign(coeffs_desc, lo, mid, sign, depth + 1) &&
         certify_sign(coeffs_desc, mid, hi, sign, depth + 1);
}

PolynomialCheck run_check(const std::string& name, const std::vector<double>& coeffs_desc,
                          double lo, double hi, int sign, int grid_points) {
  PolynomialCheck c;
  c.name = name;
  c.lo = lo;
  c.hi = hi;
  c.claimed_sign = sign;
  c.grid_min = std::numeric_limits<double>::infinity();
  c.grid_max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= grid_points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / grid_points;
    const double v = poly_eval(coeffs_desc, x);
    if (v < c.grid_min) {
      c.grid_min = v;
      if (sign > 0) c.worst_point = x;
    }
    if (v > c.grid_max) {
      c.grid_max = v;
      if (sign < 0) c.worst_point = x;
    }
  }
  c.grid_ok = sign > 0 ? c.grid_min > 0.0 : c.grid_max < 0.0;
  c.certified = certify_sign(coeffs_desc, lo, hi, sign);
  return c;
}

}  // namespace

std::vector<PolynomialCheck> verify_appendix_polynomials(int d) {
  std::vector<PolynomialCheck> out;
  if (d == 3) {
    const double third = 1.0 / 3.0;
    out.push_back(run_check("27e^2-9e+1", {27, -9, 1}, 0.0, third, +1, 100000));
    out.push_back(
        run_check("81e^4-81e^3-27e^2+12e-1", {81, -81, -27, 12, -1}, 0.0, third, -1, 100000));
    out.push_back(run_check("1296e^4-1917e^3+840e^2-97e+6", {1296, -1917, 840, -97, 6}, 0.0,
                            third, +1, 100000));
    out.push_back(run_check("1458d^3+405d^2+24d+1", {1458, 405, 24, 1}, 0.0, third, +1, 100000));
    out.push_back(run_check(
        "P(delta) degree 11",
        {1549681956, 2970223749, -157837977, -36669429, 42830208, -35446896, -4331961, 1160487,
         22734, 47529, 12720, 64},
        0.0, third, +1, 1000000));
    out.push_back(run_check("6561g^5-5832g^4+1377g^3+18g^2-36g+8",
                            {6561, -5832, 1377, 18, -36, 8}, 0.0, third, +1, 100000));
  } else if (d >= 4) {
    const double dd = d;
    // Q1 = 2d^3(d-3) x^2 - d(d-1)(d-2) x + (d-2)(d-3), claimed positive on [0, 1/d]
    out.push_back(run_check("Q1(d,delta)",
                            {2 * dd * dd * dd * (dd - 3), -dd * (dd - 1) * (dd - 2),
                             (dd - 2) * (dd - 3)},
                            0.0, 1.0 / dd, +1, 100000));
    // Q2, claimed positive on [0, 1/d^2]
    out.push_back(run_check(
        "Q2(d,delta)",
        {8 * std::pow(dd, 6), 4 * std::pow(dd, 5) * (dd - 8),
         std::pow(dd, 4) * (-6 * dd * dd + 8 * dd + 32),
         std::pow(dd, 3) * (10 * dd * dd - 20 * dd - 8),
         dd * (dd - 2) * (dd * dd * dd - 9 * dd * dd + 8 * dd - 4), (dd - 1) * (dd - 2) * (dd - 2)},
        0.0, 1.0 / (dd * dd), +1, 100000));
  } else {
    throw std::invalid_argument("verify_appendix_polynomials: d >= 3");
  }
  return out;
}

// ---- phi1 maximization -------------------------------------------------------

namespace {

bool phi1_newton(DensityPoint& p, double lambda, int d) {
  Eigen::Vector2d x(p.alpha, p.beta);
  double gnorm = grad_phi1({x[0], x[1]}, lambda, d).norm();
  for (int it = 0; it < 200; ++it) {
    if (gnorm <= 1e-12) break;
    const Eigen::Vector2d g = grad_phi1({x[0], x[1]}, lambda, d);
    const Eigen::Matrix2d H = hessian_phi1({x[0], x[1]}, d);
    Eigen::Vector2d step = H.fullPivLu().solve(-g);
    if (!step.allFinite()) step = -g * 1e-3;
    bool ok = false;
    double t = 1.0;
    for (int bt = 0; bt < 60; ++bt, t *= 0.5) {
      const Eigen::Vector2d y = x + t * step;
      if (!(y[0] > 1e-12) || !(y[1] > 1e-12) || !(y[0] + y[1] < 1.0 - 1e-12)) continue;
      const double gy = grad_phi1({y[0], y[1]}, lambda, d).norm();
      if (gy < gnorm * (1.0 - 1e-4 * t) || gy < 1e-12) {
        x = y;
        gnorm = gy;
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  p = {x[0], x[1]};
  return gnorm <= 1e-10;
}

}  // namespace

Phi1Landscape maximize_phi1(double lambda, int d) {
  Phi1Landscape out;
  const double ps = symmetric_fixed_point(lambda, d);
  out.symmetric_point = {ps, ps};
  out.symmetric_value = phi1(out.symmetric_point, lambda, d);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(hessian_phi1(out.symmetric_point, d));
  out.symmetric_eigs = es.eigenvalues();
  out.symmetric_is_saddle =
      out.symmetric_eigs.minCoeff() < -1e-9 && out.symmetric_eigs.maxCoeff() > 1e-9;

  // coarse grid over the open triangle, then Newton from every local grid max
  const int K = 220;
  std::vector<std::vector<double>> val(K + 1, std::vector<double>(K + 1, kNegInf));
  auto coord = [&](int i) { return 1e-4 + (1.0 - 2e-4) * static_cast<double>(i) / K; };
  for (int i = 1; i < K; ++i)
    for (int j = 1; j < K; ++j) {
      const double a = coord(i), b = coord(j);
      if (a + b >= 1.0 - 1e-9) continue;
      val[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = phi1({a, b}, lambda, d);
    }
  std::vector<DensityPoint> candidates;
  for (int i = 1; i < K; ++i)
    for (int j = 1; j < K; ++j) {
      const double v = val[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (v == kNegInf) continue;
      bool is_local_max = true;
      for (int di = -1; di <= 1 && is_local_max; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const double w = val[static_cast<std::size_t>(i + di)][static_cast<std::size_t>(j + dj)];
          if (w > v) {
            is_local_max = false;
            break;
          }
        }
      if (is_local_max) candidates.push_back({coord(i), coord(j)});
    }
  candidates.push_back(out.symmetric_point);

  std::vector<Phi1Maximizer> found;
  for (DensityPoint c : candidates) {
    if (!phi1_newton(c, lambda, d)) continue;
    // keep only local maxima (negative-definite Hessian up to tolerance)
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> hc(hessian_phi1(c, d));
    if (hc.eigenvalues().maxCoeff() > 1e-7) continue;
    bool dup = false;
    for (const Phi1Maximizer& m : found)
      if (std::abs(m.point.alpha - c.alpha) < 1e-7 && std::abs(m.point.beta - c.beta) < 1e-7) {
        dup = true;
        break;
      }
    if (!dup) found.push_back({c, phi1(c, lambda, d)});
  }
  double best = kNegInf;
  for (const Phi1Maximizer& m : found) best = std::max(best, m.value);
  for (const Phi1Maximizer& m : found)
    if (m.value >= best - 1e-9 * (1.0 + std::abs(best))) out.maximizers.push_back(m);
  std::sort(out.maximizers.begin(), out.maximizers.end(),
            [](const Phi1Maximizer& a, const Phi1Maximizer& b) {
              return a.point.alpha < b.point.alpha;
            });
  return out;
}

}  // namespace hardcore
