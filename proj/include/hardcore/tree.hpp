#pragma once
// Hard-core recursion on the infinite d-regular tree: critical activity,
// symmetric fixed point, and the semi-translation-invariant pair above it.
namespace hardcore {

// (d-1)^(d-1) / (d-2)^d; rejects d < 3 (degenerate at d = 2)
double lambda_c(int d);

struct RecursionValue {
  double value;  // f(x) clamped to [0,1]
  double raw;    // unclamped (1-x)*(1 - (x/(lambda(1-x)))^(1/d))
};

// f(x) = (1-x)*[1 - (x/(lambda*(1-x)))^(1/d)]; x = 1 rejected.
RecursionValue tree_recursion(double x, double lambda, int d);

// f'(x) = -1 + u*(1 - 1/(d*x)) with u = (x/(lambda*(1-x)))^(1/d); valid on (0,1).
double tree_recursion_derivative(double x, double lambda, int d);

// unique root of f(x) = x, residual <= 1e-12 (bisection + Newton polish)
double symmetric_fixed_point(double lambda, int d);

struct TreeFixedPoints {
  double lambda = 0;
  int d = 0;
  double p_star = 0;
  double p1 = 0;  // p1 <= p_star <= p2, f(p1) = p2, f(p2) = p1
  double p2 = 0;
  bool is_unique = true;  // |p2 - p1| <= 1e-9
};

// Fixed points of f∘f: p1 is the smallest root, located by bracketing the
// sign change of f(f(x)) - x below p_star and polishing with Newton.
// (p1 is a repelling fixed point of f∘f, so naive iteration cannot reach it.)
TreeFixedPoints semi_invariant_fixed_points(double lambda, int d);

}  // namespace hardcore
