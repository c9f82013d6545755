#pragma once
// Shared numeric helpers: log-space combinatorics and stable accumulation.
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace hardcore {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// x*log(y) with the 0*log(0) = 0 convention used throughout the exponent surfaces.
inline double xlogy(double x, double y) {
  if (x == 0.0) return 0.0;
  return x * std::log(y);
}

// log C(n,k); -inf outside the admissible range (the convention C(n,k)=0).
double log_binomial(std::int64_t n, std::int64_t k);

// Cached log-factorials for a fixed n range.  All finite-n moment formulas
// run off this table so repeated lgamma calls stay out of inner loops.
class LogFactorialTable {
 public:
  explicit LogFactorialTable(std::int64_t max_n);
  double log_factorial(std::int64_t n) const { return table_[static_cast<std::size_t>(n)]; }
  // log C(n,k), -inf if k<0 or k>n (n must be within the table range)
  double log_choose(std::int64_t n, std::int64_t k) const {
    if (k < 0 || n < 0 || k > n) return kNegInf;
    return table_[static_cast<std::size_t>(n)] - table_[static_cast<std::size_t>(k)] -
           table_[static_cast<std::size_t>(n - k)];
  }
  std::int64_t max_n() const { return static_cast<std::int64_t>(table_.size()) - 1; }

 private:
  std::vector<double> table_;
};

// Streaming log-sum-exp: value() = log(sum of exp(x_i)) without overflow.
class LogSumAcc {
 public:
  void add(double log_term);
  double value() const;
  bool empty() const { return max_ == kNegInf; }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;  // sum of exp(x_i - max_)
};

double log_sum_exp(const std::vector<double>& log_terms);

// Median of an unsorted sample (even length: average of the two middle values).
double median(std::vector<double> v);

}  // namespace hardcore
