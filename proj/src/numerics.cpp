#include "cuckoo_lab/numerics.hpp"

namespace cuckoo_lab {

LogFactorials::LogFactorials(std::uint64_t max_k) : table_(max_k + 1, 0.0) {
  for (std::uint64_t k = 2; k <= max_k; ++k) {
    table_[k] = std::lgamma(static_cast<double>(k) + 1.0);
  }
}

double log_pow(double base, double exponent) {
  if (exponent == 0.0) return 0.0;
  if (base == 0.0) return exponent > 0.0 ? kNegInf : std::numeric_limits<double>::infinity();
  return exponent * std::log(base);
}

double log_pow_one_minus(double x, double exponent) {
  if (exponent == 0.0) return 0.0;
  if (x >= 1.0) return kNegInf;
  return exponent * std::log1p(-x);
}

}  // namespace cuckoo_lab
