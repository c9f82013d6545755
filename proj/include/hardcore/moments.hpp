#pragma once
// Exact finite-n moments of the occupancy-restricted partition function over
// the random d-matching ensemble, the limiting second-to-first moment ratio
// tau in closed form and by numerical quadrature, and the short-cycle
// conditioning quantities (lambda_i, delta_i) with Monte Carlo size-biased
// checks against exact enumeration.
#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace hardcore {

// log E[Z^{a,b}] = log[ C(n,a) C(n,b) lambda^(a+b) (C(n-b,a)/C(n,a))^d ];
// -inf when a > n-b (no placement avoids every matching)
double expected_Z(std::int64_t n, std::int64_t a, std::int64_t b, double lambda, int d);

// probability that one uniform matching avoids both S1 x T1 and S2 x T2 for
// fixed sides |S1|=|S2|=a, |T1|=|T2|=b with overlaps |S1 cap S2| = c,
// |T1 cap T2| = e; log-space, -inf for impossible overlap patterns
double log_pair_avoidance(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t c,
                          std::int64_t e);

// one (c,e,k) term of that sum, k = #(S1-only vertices matched outside
// T1 cup T2); exposed because (1/n) log of this term converges to the
// psi2 exponent surface and the tests pin that rate down
double log_pair_avoidance_term(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t c,
                               std::int64_t e, std::int64_t k);

// log E[(Z^{a,b})^2]: exact double sum over integer overlaps (c,e) of
// pair-count factors times log_pair_avoidance^d
double expected_Z2(std::int64_t n, std::int64_t a, std::int64_t b, double lambda, int d);

// E[(Z^{a,b})^2] / E[Z^{a,b}]^2 (lambda cancels; computed at lambda = 1)
double moment_ratio(std::int64_t n, std::int64_t a, std::int64_t b, int d);

struct TauResult {
  double value = 0;
  bool diverges = false;  // 1-alpha-beta-(d-2)*alpha*beta <= 0 or alpha+beta >= 1
};

// limiting moment ratio, closed product form:
// ((1-a)(1-b))^d / [ (1-a-b+2ab)^((d-1)/2) (1-a-b)^((d-1)/2)
//                    sqrt(1-a-b+d ab) sqrt(1-a-b-(d-2) ab) ]
TauResult tau(double alpha, double beta, int d);

// the same limit as exp(rho((d-1)x) + (d-1) rho(x)) with
// x = ab/((1-a)(1-b)), rho(x) = -0.5*ln(1-x^2)
TauResult tau_from_cycle_sums(double alpha, double beta, int d);

// closed-form Hessian entries of the second-moment inner exponent at the
// star overlap (alpha^2, beta^2, alpha(1-alpha-beta))
Eigen::Matrix3d star_hessian(double alpha, double beta, int d);

struct TauQuadrature {
  double gaussian_2d = 0;  // inner eps integral in closed Gaussian form, then
                           // adaptive 2-D quadrature over (gamma, delta)
  double gaussian_2d_err = 0;
  double nested_3d = 0;  // nested adaptive 1-D quadratures over all three variables
  double nested_3d_err = 0;
  double difference = 0;
};
// both quadrature routes for the limiting ratio; requires the star Hessian
// to be negative definite
TauQuadrature tau_by_quadrature(double alpha, double beta, int d);

// lambda_i = ((d-1)^i + (d-1)) / i, the limiting mean count of i-cycles; even i only
double cycle_lambda(int d, int i);
// delta_i = (alpha*beta / ((1-alpha)(1-beta)))^(i/2); even i only
double cycle_delta(double alpha, double beta, int i);

struct ConditioningSummary {
  int d = 0;
  double alpha = 0, beta = 0;
  std::vector<int> cycle_lengths;  // even i in [2, i_max]
  std::vector<double> lambdas;
  std::vector<double> deltas;
  double partial_sum = 0;       // sum over the listed i of lambda_i delta_i^2
  double tau_closed_form = 0;   // tau(alpha, beta, d)
};
ConditioningSummary conditioning_summary(double alpha, double beta, int d, int i_max);

struct CycleCheckRow {
  int i = 0;  // cycle length; 0 marks the joint product row
  double estimate = 0;
  double std_error = 0;
  double target = 0;
};

struct SizeBiasedReport {
  std::vector<CycleCheckRow> rows;  // one per requested cycle length
  CycleCheckRow joint;              // product over all requested lengths
  bool inconclusive = false;        // every sampled graph had zero weight
  int n_samples = 0;
};

// Monte Carlo estimate of E[Y * X_i] / E[Y] where Y counts independent sets
// at occupancy (a, b) (exact per-graph enumeration; Y = 1 when a = b = 0) and
// X_i counts i-cycles; compared against lambda_i (1 + delta_i)
SizeBiasedReport size_biased_cycle_check(int n, int a, int b, const std::vector<int>& cycle_lengths,
                                         int d, int n_samples, std::uint64_t seed);

}  // namespace hardcore
