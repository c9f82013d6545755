#include "hardcore/moments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "hardcore/enumerate.hpp"
#include "hardcore/exponents.hpp"
#include "hardcore/graph.hpp"
#include "hardcore/numerics.hpp"
#include "hardcore/rng.hpp"

namespace hardcore {

namespace {

void check_occupancy_args(std::int64_t n, std::int64_t a, std::int64_t b, double lambda, int d) {
  if (n < 1) throw std::invalid_argument("moments: n must be >= 1");
  if (a < 0 || a > n || b < 0 || b > n) throw std::invalid_argument("moments: need 0 <= a, b <= n");
  if (!(lambda > 0)) throw std::invalid_argument("moments: lambda must be > 0");
  if (d < 1) throw std::invalid_argument("moments: d must be >= 1");
}

}  // namespace

double expected_Z(std::int64_t n, std::int64_t a, std::int64_t b, double lambda, int d) {
  check_occupancy_args(n, a, b, lambda, d);
  LogFactorialTable lf(n);
  const double avoid = lf.log_choose(n - b, a);  // -inf when a > n-b
  if (avoid == kNegInf) return kNegInf;
  return lf.log_choose(n, a) + lf.log_choose(n, b) + static_cast<double>(a + b) * std::log(lambda) +
         d * (avoid - lf.log_choose(n, a));
}

namespace {

// the (c,e,k) term of the one-matching pair-avoidance probability:
//   [C(n-2b+e,c)/C(n,c)] * C(n-2b+e-c,k) C(b-e,a-c-k) / C(n-c,a-c)
//                        * C(n-b-c-k,a-c) / C(n-a,a-c)
double avoidance_term(const LogFactorialTable& lf, std::int64_t n, std::int64_t a, std::int64_t b,
                      std::int64_t c, std::int64_t e, std::int64_t k) {
  const double den = lf.log_choose(n, c) + lf.log_choose(n - c, a - c) + lf.log_choose(n - a, a - c);
  if (den == kNegInf) return kNegInf;  // no pair with this overlap exists at all
  const double num = lf.log_choose(n - 2 * b + e, c) + lf.log_choose(n - 2 * b + e - c, k) +
                     lf.log_choose(b - e, a - c - k) + lf.log_choose(n - b - c - k, a - c);
  if (num == kNegInf) return kNegInf;
  return num - den;
}

void check_overlap_args(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t c,
                        std::int64_t e) {
  if (n < 1 || a < 0 || a > n || b < 0 || b > n) throw std::invalid_argument("moments: bad (n,a,b)");
  if (c < 0 || c > a || e < 0 || e > b) throw std::invalid_argument("moments: need 0 <= c <= a, 0 <= e <= b");
}

}  // namespace

double log_pair_avoidance_term(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t c,
                               std::int64_t e, std::int64_t k) {
  check_overlap_args(n, a, b, c, e);
  if (k < 0 || k > a - c) throw std::invalid_argument("moments: need 0 <= k <= a-c");
  LogFactorialTable lf(n);
  return avoidance_term(lf, n, a, b, c, e, k);
}

double log_pair_avoidance(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t c,
                          std::int64_t e) {
  check_overlap_args(n, a, b, c, e);
  LogFactorialTable lf(n);
  LogSumAcc acc;
  for (std::int64_t k = 0; k <= a - c; ++k) {
    const double t = avoidance_term(lf, n, a, b, c, e, k);
    if (t != kNegInf) acc.add(t);
  }
  return acc.value();
}

double expected_Z2(std::int64_t n, std::int64_t a, std::int64_t b, double lambda, int d) {
  check_occupancy_args(n, a, b, lambda, d);
  LogFactorialTable lf(n);
  LogSumAcc acc;
  for (std::int64_t c = 0; c <= a; ++c) {
    // number of ordered (S1, S2) pairs at V1-overlap c, divided by C(n,a)
    const double s_pairs = lf.log_choose(a, c) + lf.log_choose(n - a, a - c);
    if (s_pairs == kNegInf) continue;
    for (std::int64_t e = 0; e <= b; ++e) {
      const double t_pairs = lf.log_choose(b, e) + lf.log_choose(n - b, b - e);
      if (t_pairs == kNegInf) continue;
      LogSumAcc inner;
      for (std::int64_t k = 0; k <= a - c; ++k) {
        const double t = avoidance_term(lf, n, a, b, c, e, k);
        if (t != kNegInf) inner.add(t);
      }
      if (inner.empty()) continue;
      acc.add(s_pairs + t_pairs + d * inner.value());
    }
  }
  if (acc.empty()) return kNegInf;
  return lf.log_choose(n, a) + lf.log_choose(n, b) + 2.0 * static_cast<double>(a + b) * std::log(lambda) +
         acc.value();
}

double moment_ratio(std::int64_t n, std::int64_t a, std::int64_t b, int d) {
  const double m1 = expected_Z(n, a, b, 1.0, d);
  if (m1 == kNegInf) throw std::domain_error("moment_ratio: first moment vanishes");
  return std::exp(expected_Z2(n, a, b, 1.0, d) - 2.0 * m1);
}

namespace {

void check_density_args(double alpha, double beta, int d) {
  if (!(alpha > 0) || !(beta > 0) || !(alpha < 1) || !(beta < 1))
    throw std::invalid_argument("moments: need alpha, beta in (0,1)");
  if (d < 1) throw std::invalid_argument("moments: d must be >= 1");
}

}  // namespace

TauResult tau(double alpha, double beta, int d) {
  check_density_args(alpha, beta, d);
  TauResult r;
  const double s = 1 - alpha - beta;
  const double ab = alpha * beta;
  const double last = s - (d - 2) * ab;
  if (s <= 0 || last <= 0) {
    r.diverges = true;
    r.value = std::numeric_limits<double>::infinity();
    return r;
  }
  const double num = d * std::log((1 - alpha) * (1 - beta));
  const double den = 0.5 * (d - 1) * (std::log(s + 2 * ab) + std::log(s)) +
                     0.5 * std::log(s + d * ab) + 0.5 * std::log(last);
  r.value = std::exp(num - den);
  return r;
}

TauResult tau_from_cycle_sums(double alpha, double beta, int d) {
  check_density_args(alpha, beta, d);
  TauResult r;
  const double x = alpha * beta / ((1 - alpha) * (1 - beta));
  if (1 - alpha - beta <= 0 || (d - 1) * x >= 1) {
    r.diverges = true;
    r.value = std::numeric_limits<double>::infinity();
    return r;
  }
  auto rho = [](double y) { return -0.5 * std::log1p(-y * y); };
  r.value = std::exp(rho((d - 1) * x) + (d - 1) * rho(x));
  return r;
}

Eigen::Matrix3d star_hessian(double alpha, double beta, int d) {
  check_density_args(alpha, beta, d);
  const double a = alpha, b = beta;
  if (1 - a - b <= 0) throw std::domain_error("star_hessian: alpha + beta must be < 1");
  const double dd = d;
  const double s = 1 - a - b;
  const double h11 = (a + dd - 2) / (a * (a - 1) * (a - 1)) - (b + dd * a) / (a * a * b) +
                     dd / ((1 - a) * (1 - b)) - dd / (b * (1 - b) * s);
  const double h12 = dd / (b * (1 - b) * s);
  const double h13 = -dd * (1 - a - 2 * b + 2 * a * b + b * b) / (a * b * (1 - a) * (1 - b) * s);
  const double h22 = -(s + dd * a * b) / (b * b * (1 - b) * (1 - b) * s);
  const double h23 = h12;
  const double h33 = -dd * (s + 2 * a * b) / (a * b * (1 - a) * (1 - b) * s);
  Eigen::Matrix3d h;
  h << h11, h12, h13, h12, h22, h23, h13, h23, h33;
  return h;
}

namespace {

struct QuadResult {
  double value = 0;
  double err = 0;
};

// 15-point Kronrod / 7-point Gauss panel
QuadResult gk15_panel(const std::function<double(double)>& f, double a, double b) {
  static const double xgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                                0.741531185599394, 0.586087235467691, 0.405845151377397,
                                0.207784955007898, 0.0};
  static const double wgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                                0.140653259715525, 0.169004726639267, 0.190350578064785,
                                0.204432940075298, 0.209482141084728};
  static const double wg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                               0.417959183673469};
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = wgk[7] * fc;
  double resg = wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    resk += wgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += wg[(j - 1) / 2] * (f1 + f2);
  }
  QuadResult r;
  r.value = resk * h;
  r.err = std::abs(resk - resg) * h;
  return r;
}

QuadResult adaptive_split(const std::function<double(double)>& f, double a, double b, double tol,
                          int depth) {
  const QuadResult p = gk15_panel(f, a, b);
  if (p.err <= tol || depth <= 0) return p;
  const double m = 0.5 * (a + b);
  const QuadResult l = adaptive_split(f, a, m, 0.5 * tol, depth - 1);
  const QuadResult r = adaptive_split(f, m, b, 0.5 * tol, depth - 1);
  return {l.value + r.value, l.err + r.err};
}

QuadResult adaptive_gk(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  const QuadResult first = gk15_panel(f, a, b);
  const double tol = std::max(std::abs(first.value) * rel_tol, 1e-300);
  return adaptive_split(f, a, b, tol, 28);
}

// the printed coefficients of the epsilon-quadratic inside the inner Gaussian
struct InnerCoeffs {
  double a, b, c;
};

InnerCoeffs inner_gaussian_coeffs(double al, double be, double g, double dl, int dint) {
  const double d = dint;
  InnerCoeffs out;
  out.a = (2 * be * al - be + 1 - al) / (2 * be * al * (1 - be - al + be * al) * (be + al - 1));
  out.b = (-al * g + 2 * be * g * al + g - 2 * be * g + be * be * g + dl * al * al - dl * al) /
          (be * al * (-al + be * al + 1 - 2 * be + be * be) * (al - 1));
  const double n1 = 2 * d * be * al * al * al - d * al * al * al + 2 * d * be * be * al * al -
                    5 * d * al * al * be + 2 * d * al * al + d * be * be * be * al -
                    3 * d * be * be * al - be * be * al + 3 * d * be * al + be * al - d * al -
                    be * be * be + 2 * be * be - be;
  const double den1 =
      2 * d * al * al * (be - 1) * (-1 + be + al) * (al - 1) * (al - 1) * be;
  const double term2 = dl * g / (2 * be * (-al + be * al + 1 - 2 * be + be * be));
  const double n3 = g * d * be * be - g * d * be + d * be * al * dl - dl * al + dl - dl * be;
  const double den3 = 2 * d * be * be * (-al + be * al + 1 - 2 * be + be * be) * (be - 1);
  out.c = g * g * n1 / den1 + term2 + n3 * dl / den3;
  return out;
}

}  // namespace

TauQuadrature tau_by_quadrature(double alpha, double beta, int d) {
  check_density_args(alpha, beta, d);
  if (d < 3) throw std::invalid_argument("tau_by_quadrature: d must be >= 3");
  if (1 - alpha - beta <= 0) throw std::domain_error("tau_by_quadrature: alpha + beta must be < 1");
  const DensityPoint p{alpha, beta};
  const OverlapPoint star = star_point(p);
  const Eigen::Matrix3d hf = hessian_f(p, star, 1.0, d);
  {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(hf, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().maxCoeff() >= 0)
      throw std::domain_error("tau_by_quadrature: star Hessian not negative definite");
  }
  const double h11 = hf(0, 0), h12 = hf(0, 1), h13 = hf(0, 2);
  const double h22 = hf(1, 1), h23 = hf(1, 2), h33 = hf(2, 2);

  // the (gamma, delta) marginal after integrating epsilon is Gaussian with
  // inverse covariance -(H22 - h h^t / h33); an 8-sigma box truncates it
  Eigen::Matrix2d schur;
  schur << h11 - h13 * h13 / h33, h12 - h13 * h23 / h33, h12 - h13 * h23 / h33,
      h22 - h23 * h23 / h33;
  const Eigen::Matrix2d cov = (-schur).inverse();
  if (!(cov(0, 0) > 0) || !(cov(1, 1) > 0))
    throw std::domain_error("tau_by_quadrature: marginal not integrable");
  const double gmax = 8 * std::sqrt(cov(0, 0));
  const double dmax = 8 * std::sqrt(cov(1, 1));

  const double pref = 1.0 / (2 * M_PI * alpha * (1 - alpha) * beta * (1 - beta));
  const double log_ad =
      std::log((1 - alpha) * (1 - beta)) -
      0.5 * std::log((1 - alpha - beta + 2 * alpha * beta) * (1 - alpha - beta));

  TauQuadrature out;

  // route (i): closed-form inner Gaussian (A_d e^{-B_d})^d via the printed
  // quadratic coefficients, then iterated 2-D quadrature
  {
    double inner_err = 0;
    auto outer_fn = [&](double g) {
      auto fn = [&](double dl) {
        const InnerCoeffs ic = inner_gaussian_coeffs(alpha, beta, g, dl, d);
        const double bd = (ic.b * ic.b - 4 * ic.a * ic.c) / (4 * ic.a);
        return std::exp(d * (log_ad - bd));
      };
      const QuadResult q = adaptive_gk(fn, -dmax, dmax, 1e-10);
      inner_err = std::max(inner_err, q.err);
      return q.value;
    };
    const QuadResult q = adaptive_gk(outer_fn, -gmax, gmax, 1e-9);
    out.gaussian_2d = pref * q.value;
    out.gaussian_2d_err = pref * (q.err + 2 * gmax * inner_err);
  }

  // route (ii): all three variables by nested quadrature
  {
    const double c_in = (1.0 / std::sqrt(2 * M_PI)) / (1 - alpha - beta) *
                        std::sqrt((1 - alpha) * (1 - beta) / (alpha * beta));
    const double sig_e = std::sqrt(d / (-h33));
    double inner_err = 0;
    auto outer_fn = [&](double g) {
      auto mid_fn = [&](double dl) {
        const double mean_e = -(h13 * g + h23 * dl) / h33;
        auto eps_fn = [&](double e) {
          const double q2 = h11 * g * g + h22 * dl * dl + h33 * e * e + 2 * h12 * g * dl +
                            2 * h13 * g * e + 2 * h23 * dl * e;
          return std::exp(q2 / (2.0 * d));
        };
        const QuadResult qe = adaptive_gk(eps_fn, mean_e - 8 * sig_e, mean_e + 8 * sig_e, 1e-11);
        inner_err = std::max(inner_err, qe.err);
        return std::pow(c_in * qe.value, d);
      };
      const QuadResult qm = adaptive_gk(mid_fn, -dmax, dmax, 1e-10);
      inner_err = std::max(inner_err, qm.err);
      return qm.value;
    };
    const QuadResult q = adaptive_gk(outer_fn, -gmax, gmax, 1e-9);
    out.nested_3d = pref * q.value;
    out.nested_3d_err = pref * (q.err + 2 * gmax * inner_err);
  }

  out.difference = std::abs(out.gaussian_2d - out.nested_3d);
  return out;
}

double cycle_lambda(int d, int i) {
  if (d < 2) throw std::invalid_argument("cycle_lambda: d must be >= 2");
  if (i < 2 || i % 2 != 0) throw std::invalid_argument("cycle_lambda: cycle length must be even and >= 2");
  return (std::pow(d - 1, i) + (d - 1)) / i;
}

double cycle_delta(double alpha, double beta, int i) {
  if (!(alpha >= 0) || !(beta >= 0) || alpha >= 1 || beta >= 1)
    throw std::invalid_argument("cycle_delta: need alpha, beta in [0,1)");
  if (i < 2 || i % 2 != 0) throw std::invalid_argument("cycle_delta: cycle length must be even and >= 2");
  const double x = alpha * beta / ((1 - alpha) * (1 - beta));
  return std::pow(x, i / 2);
}

ConditioningSummary conditioning_summary(double alpha, double beta, int d, int i_max) {
  check_density_args(alpha, beta, d);
  if (i_max < 2) throw std::invalid_argument("conditioning_summary: i_max must be >= 2");
  ConditioningSummary s;
  s.d = d;
  s.alpha = alpha;
  s.beta = beta;
  for (int i = 2; i <= i_max; i += 2) {
    const double li = cycle_lambda(d, i);
    const double di = cycle_delta(alpha, beta, i);
    s.cycle_lengths.push_back(i);
    s.lambdas.push_back(li);
    s.deltas.push_back(di);
    s.partial_sum += li * di * di;
  }
  s.tau_closed_form = tau(alpha, beta, d).value;
  return s;
}

SizeBiasedReport size_biased_cycle_check(int n, int a, int b, const std::vector<int>& cycle_lengths,
                                         int d, int n_samples, std::uint64_t seed) {
  if (n < 1 || a < 0 || b < 0 || a > n || b > n)
    throw std::invalid_argument("size_biased_cycle_check: bad occupancy target");
  if (a + b > 0 && n > 14)
    throw std::invalid_argument("size_biased_cycle_check: weighted runs need n <= 14");
  if (cycle_lengths.empty()) throw std::invalid_argument("size_biased_cycle_check: no cycle lengths");
  if (n_samples < 2) throw std::invalid_argument("size_biased_cycle_check: need >= 2 samples");
  int i_max = 0;
  for (int i : cycle_lengths) {
    if (i < 2 || i % 2 != 0)
      throw std::invalid_argument("size_biased_cycle_check: cycle lengths must be even and >= 2");
    i_max = std::max(i_max, i);
  }

  const int nl = static_cast<int>(cycle_lengths.size());
  std::vector<double> y(static_cast<std::size_t>(n_samples));
  std::vector<std::vector<double>> x(static_cast<std::size_t>(nl),
                                     std::vector<double>(static_cast<std::size_t>(n_samples)));
  std::vector<double> joint(static_cast<std::size_t>(n_samples));
  double y_sum = 0;
  for (int s = 0; s < n_samples; ++s) {
    CounterRng derive(seed, static_cast<std::uint64_t>(s));
    const BipartiteMultigraph g = sample_graph(n, d, derive.next_u64());
    double ys = 1.0;
    if (a + b > 0) {
      const OccupancyProfile prof = occupancy_profile(g, 1.0);
      const double lw = prof.logw[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      ys = (lw == kNegInf) ? 0.0 : std::exp(lw);
    }
    y[static_cast<std::size_t>(s)] = ys;
    y_sum += ys;
    const CycleCensus census = count_cycles(g, i_max);
    double prod = 1.0;
    for (int j = 0; j < nl; ++j) {
      const auto it = census.counts.find(cycle_lengths[static_cast<std::size_t>(j)]);
      const double xv = it == census.counts.end() ? 0.0 : static_cast<double>(it->second);
      x[static_cast<std::size_t>(j)][static_cast<std::size_t>(s)] = xv;
      prod *= xv;
    }
    joint[static_cast<std::size_t>(s)] = prod;
  }

  SizeBiasedReport rep;
  rep.n_samples = n_samples;
  rep.inconclusive = !(y_sum > 0);

  const double alpha = static_cast<double>(a) / n;
  const double beta = static_cast<double>(b) / n;
  auto ratio_row = [&](const std::vector<double>& xs) {
    CycleCheckRow row;
    if (rep.inconclusive) return row;
    double num = 0;
    for (int s = 0; s < n_samples; ++s) num += y[static_cast<std::size_t>(s)] * xs[static_cast<std::size_t>(s)];
    row.estimate = num / y_sum;
    double ss = 0;
    for (int s = 0; s < n_samples; ++s) {
      const double u = y[static_cast<std::size_t>(s)] * (xs[static_cast<std::size_t>(s)] - row.estimate);
      ss += u * u;
    }
    row.std_error = std::sqrt(ss * n_samples / (n_samples - 1.0)) / y_sum;
    return row;
  };

  double joint_target = 1.0;
  for (int j = 0; j < nl; ++j) {
    CycleCheckRow row = ratio_row(x[static_cast<std::size_t>(j)]);
    row.i = cycle_lengths[static_cast<std::size_t>(j)];
    // targets are meaningless (and alpha or beta may sit on the boundary)
    // when every sampled graph had zero weight
    if (!rep.inconclusive) {
      row.target = cycle_lambda(d, row.i) * (1 + cycle_delta(alpha, beta, row.i));
      joint_target *= row.target;
    }
    rep.rows.push_back(row);
  }
  rep.joint = ratio_row(joint);
  rep.joint.i = 0;
  rep.joint.target = rep.inconclusive ? 0.0 : joint_target;
  return rep;
}

}  // namespace hardcore
