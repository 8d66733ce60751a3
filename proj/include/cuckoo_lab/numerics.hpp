#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace cuckoo_lab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Neumaier's variant of Kahan summation. The summands handled here span
// dozens of orders of magnitude, so a plain running double loses the tail.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// ln(k!) for k in [0, max_k], precomputed once per evaluation.
class LogFactorials {
 public:
  explicit LogFactorials(std::uint64_t max_k);

  double operator()(std::uint64_t k) const { return table_[k]; }
  std::uint64_t max_k() const { return table_.size() - 1; }

  // ln C(n, k); -inf when k > n.
  double log_binomial(std::uint64_t n, std::uint64_t k) const {
    if (k > n) return kNegInf;
    return table_[n] - table_[k] - table_[n - k];
  }

 private:
  std::vector<double> table_;
};

// exponent * ln(base) with the 0^0 = 1 convention; -inf for 0^positive.
double log_pow(double base, double exponent);

// exponent * ln(1 - x) for x in [0, 1], exact at x = 1.
double log_pow_one_minus(double x, double exponent);

}  // namespace cuckoo_lab
