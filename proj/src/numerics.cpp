#include "hardcore/numerics.hpp"

#include <algorithm>
#include <stdexcept>

namespace hardcore {

double log_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return kNegInf;
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

LogFactorialTable::LogFactorialTable(std::int64_t max_n) {
  if (max_n < 0) throw std::invalid_argument("LogFactorialTable: max_n < 0");
  table_.resize(static_cast<std::size_t>(max_n) + 1);
  table_[0] = 0.0;
  for (std::int64_t i = 1; i <= max_n; ++i)
    table_[static_cast<std::size_t>(i)] =
        table_[static_cast<std::size_t>(i - 1)] + std::log(static_cast<double>(i));
}

void LogSumAcc::add(double log_term) {
  if (log_term == kNegInf) return;
  if (log_term <= max_) {
    sum_ += std::exp(log_term - max_);
  } else {
    sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
    max_ = log_term;
  }
}

double LogSumAcc::value() const {
  if (max_ == kNegInf) return kNegInf;
  return max_ + std::log(sum_);
}

double log_sum_exp(const std::vector<double>& log_terms) {
  LogSumAcc acc;
  for (double t : log_terms) acc.add(t);
  return acc.value();
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  if (v.size() % 2 == 1) return v[m];
  return 0.5 * (v[m - 1] + v[m]);
}

}  // namespace hardcore
