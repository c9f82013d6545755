#pragma once
// Exponent-scale surfaces for independent sets on random bipartite d-regular
// graphs: the first-moment exponent phi1, the second-moment exponent in two
// independently coded forms (phi2 / second_moment_f), their gap gamma_fn, the
// overlap-restricted surface g, analytic derivatives, stationary-point
// search, and sign certification of the auxiliary polynomials used in the
// interior-maximum arguments.
#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace hardcore {

struct DensityPoint {
  double alpha = 0;
  double beta = 0;
};

struct OverlapPoint {
  double gamma = 0;
  double delta = 0;
  double epsilon = 0;
};

// Ent(x) = -x ln x - (1-x) ln(1-x), with 0 ln 0 = 0
double entropy(double x);
// H1(x,y) = -x(ln x - ln y) + (x-y)(ln(y-x) - ln y) = y*Ent(x/y); needs 0 <= x <= y
double h1(double x, double y);

double psi1(const DensityPoint& p);
double phi1(const DensityPoint& p, double lambda, int d);
Eigen::Vector2d grad_phi1(const DensityPoint& p, double lambda, int d);
Eigen::Matrix2d hessian_phi1(const DensityPoint& p, int d);

// the ten quantities that must stay nonnegative for the overlap surfaces to
// be defined; order: gamma, alpha-gamma, delta, beta-delta, epsilon,
// alpha-gamma-epsilon, (beta-delta)-(alpha-gamma-epsilon),
// 1-2beta+delta-gamma-epsilon, 1-alpha-beta-epsilon, 1-2alpha+gamma
std::vector<double> region_slacks(const DensityPoint& p, const OverlapPoint& o);
double region_slack(const DensityPoint& p, const OverlapPoint& o);  // minimum slack

double psi2(const DensityPoint& p, const OverlapPoint& o);     // entropy form
double psi2_h1(const DensityPoint& p, const OverlapPoint& o);  // H1 form (cross-check)

// two independently coded forms of the same second-moment exponent
double phi2(const DensityPoint& p, const OverlapPoint& o, double lambda, int d);
double second_moment_f(const DensityPoint& p, const OverlapPoint& o, double lambda, int d);

// gamma_fn = 2*phi1 - phi2, coded directly (lambda cancels)
double gamma_fn(const DensityPoint& p, const OverlapPoint& o, int d);

// analytic derivatives of second_moment_f in (gamma, delta, epsilon);
// require every region slack >= 1e-12 (they diverge on the boundary)
Eigen::Vector3d grad_f(const DensityPoint& p, const OverlapPoint& o, double lambda, int d);
Eigen::Matrix3d hessian_f(const DensityPoint& p, const OverlapPoint& o, double lambda, int d);

// overlap star point (alpha^2, beta^2, alpha(1-alpha-beta)): the stationary
// point where the second moment matches the squared first moment
OverlapPoint star_point(const DensityPoint& p);

// argmax of f over epsilon at fixed (gamma, delta)
double eps_hat(const DensityPoint& p, double gamma, double delta);

double g_fn(const DensityPoint& p, double gamma, double delta, double lambda, int d);
Eigen::Vector2d grad_g(const DensityPoint& p, double gamma, double delta, double lambda, int d);
Eigen::Matrix2d hessian_g(const DensityPoint& p, double gamma, double delta, double lambda, int d);

struct StationaryPoint {
  OverlapPoint point;
  double value = 0;
  double gradient_norm = 0;
  Eigen::Matrix3d hessian;
  bool is_max = false;  // all Hessian eigenvalues < -1e-9
  int basin_count = 0;  // how many starts converged into this cluster
};

struct StationaryReport {
  std::vector<StationaryPoint> points;  // distinct clusters, sorted by value desc
  int n_starts = 0;
  int n_converged = 0;
  int n_failed = 0;  // starts that did not converge within the iteration cap
  bool unique_interior_max = false;
};

// multistart Newton on grad_f with projection-safe line search; quasi-random
// starts; clusters within 1e-6; n_starts >= 100 required
StationaryReport find_stationary_points(const DensityPoint& p, double lambda, int d,
                                        int n_starts, std::uint64_t seed = 1);

struct PolynomialCheck {
  std::string name;
  double lo = 0, hi = 0;       // interval of the claim
  int claimed_sign = 0;        // +1 strictly positive, -1 strictly negative
  double grid_min = 0, grid_max = 0;
  bool grid_ok = false;        // sign holds on the dense grid
  bool certified = false;      // interval arithmetic certifies the sign
  double worst_point = 0;      // grid argmin (for +) or argmax (for -)
};

// sign checks for the fixed-degree polynomials appearing in the uniqueness
// arguments; d = 3 selects the resultant-factor set, d >= 4 the Q1/Q2 set
std::vector<PolynomialCheck> verify_appendix_polynomials(int d);

struct Phi1Maximizer {
  DensityPoint point;
  double value = 0;
};

struct Phi1Landscape {
  std::vector<Phi1Maximizer> maximizers;  // global argmaxes over the triangle
  DensityPoint symmetric_point;           // (p*, p*)
  double symmetric_value = 0;
  Eigen::Vector2d symmetric_eigs;         // Hessian eigenvalues at (p*, p*)
  bool symmetric_is_saddle = false;       // indefinite Hessian at (p*, p*)
};

// grid + Newton maximization of phi1 over the open triangle
Phi1Landscape maximize_phi1(double lambda, int d);

}  // namespace hardcore
