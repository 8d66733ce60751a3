#include "cuckoo_lab/exact_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cuckoo_lab/numerics.hpp"

namespace cuckoo_lab {
namespace {

constexpr std::size_t kTruncationRun = 50;
constexpr double kTruncationRatio = 1e-18;
constexpr double kIntegralTolerance = 1e-9;

// Collects the summands of a deficit sum and decides when the rest is
// negligible.
class DeficitAccumulator {
 public:
  explicit DeficitAccumulator(SumOptions options) : options_(options) {}

  // Returns false once the sum may stop.
  bool add(double term) {
    total_.add(term);
    terms_.push_back(term);
    if (options_.truncate) {
      const bool small = term < kTruncationRatio * total_.value();
      const bool falling = terms_.size() >= 2 && term <= terms_[terms_.size() - 2];
      run_ = (small && falling) ? run_ + 1 : 0;
      if (run_ >= kTruncationRun) {
        truncated_at_ = terms_.size() - 1;
        return false;
      }
    }
    return true;
  }

  ExactResult finish(std::uint64_t n, std::uint64_t m) && {
    ExactResult result;
    const double cap = static_cast<double>(std::min(n, m));
    result.mu = std::clamp(static_cast<double>(m) - total_.value(), 0.0, cap);
    result.stash_expected = static_cast<double>(n) - result.mu;
    result.terms = std::move(terms_);
    result.truncated_at = truncated_at_;
    return result;
  }

 private:
  SumOptions options_;
  CompensatedSum total_;
  std::vector<double> terms_;
  std::size_t run_ = 0;
  std::optional<std::size_t> truncated_at_;
};

// Deficit sum shared by the two-choice and fixed-share models: `two` elements
// with two choices, `one` elements with a single choice.
ExactResult mixed_deficit_sum(std::uint64_t two, std::uint64_t one, std::uint64_t m,
                              const LogFactorials& lf, SumOptions options) {
  DeficitAccumulator acc(options);
  const double md = static_cast<double>(m);
  const std::uint64_t b = std::min(two, m - 1);
  for (std::uint64_t s = 0; s <= b; ++s) {
    const double sd = static_cast<double>(s);
    const double q = sd + 1.0;
    const double outside = 2.0 * static_cast<double>(two - s) + static_cast<double>(one);
    const double log_term = lf.log_binomial(two, s) + lf.log_binomial(m, s + 1) +
                            log_pow_one_minus(q / md, outside) + log_pow(q / md, 2.0 * sd) +
                            sd * std::log(2.0) + lf(s) - q * std::log(q);
    if (!acc.add(std::exp(log_term))) break;
  }
  return std::move(acc).finish(two + one, m);
}

bool near_integer(double x) {
  return std::fabs(x - std::round(x)) <= kIntegralTolerance * std::max(1.0, std::fabs(x));
}

}  // namespace

std::uint64_t two_choice_count(std::uint64_t n, double a) {
  if (!(a >= 1.0 && a <= 2.0)) {
    throw std::invalid_argument("mean number of choices a must lie in [1, 2]");
  }
  const double one = (2.0 - a) * static_cast<double>(n);
  if (!near_integer(one)) {
    throw std::invalid_argument("a * n must be an integer");
  }
  return n - static_cast<std::uint64_t>(std::llround(one));
}

std::uint64_t up_bank_size(std::uint64_t m, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("beta must lie in [0, 1]");
  }
  const double up = beta * static_cast<double>(m);
  if (!near_integer(up)) {
    throw std::invalid_argument("beta * m must be an integer");
  }
  return static_cast<std::uint64_t>(std::llround(up));
}

void validate(const ModelParams& params) {
  if (params.m < 1) throw std::invalid_argument("m must be at least 1");
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, MixedDet>) {
          two_choice_count(params.n, v.a);
        } else if constexpr (std::is_same_v<T, MixedRand>) {
          if (!(v.p >= 0.0 && v.p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
        } else if constexpr (std::is_same_v<T, Partitioned>) {
          up_bank_size(params.m, v.beta);
        } else if constexpr (std::is_same_v<T, FixedD>) {
          if (v.d < 2) throw std::invalid_argument("d must be at least 2");
        }
      },
      params.variant);
}

std::string model_name(const ModelVariant& variant) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Fixed2>) return "d2";
        if constexpr (std::is_same_v<T, MixedDet>) return "mixed-det";
        if constexpr (std::is_same_v<T, MixedRand>) return "mixed-rand";
        if constexpr (std::is_same_v<T, Partitioned>) return "partitioned";
        return "fixed-d";
      },
      variant);
}

double log_tree_count_d2(std::uint64_t s) {
  const double q = static_cast<double>(s) + 1.0;
  return (static_cast<double>(s) - 1.0) * std::log(q) + std::lgamma(static_cast<double>(s) + 1.0);
}

double log_tree_count_partitioned(std::uint64_t i, std::uint64_t j) {
  if (i == 0 && j == 0) {
    throw std::invalid_argument("partitioned component needs at least one right vertex");
  }
  const double id = static_cast<double>(i);
  const double jd = static_cast<double>(j);
  // The exponents are -1 only when the other bank is empty, and then the base
  // is the lone vertex's count of 1.
  return log_pow(id, jd - 1.0) + log_pow(jd, id - 1.0) + std::lgamma(id + jd);
}

double log_husimi_count(std::uint64_t s, unsigned d) {
  if (d < 2) throw std::invalid_argument("d must be at least 2");
  const double sd = static_cast<double>(s);
  const double q = static_cast<double>(d - 1) * sd + 1.0;
  return std::lgamma(q + 1.0) - sd * std::lgamma(static_cast<double>(d)) +
         (sd - 2.0) * std::log(q);
}

double connect_probability(const ComponentShape& component) {
  const double log_p = std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, shape::D2>) {
          if (v.s < 0) throw std::invalid_argument("negative component size");
          const auto s = static_cast<std::uint64_t>(v.s);
          const double sd = static_cast<double>(s);
          return sd * std::log(2.0) + log_tree_count_d2(s) - 2.0 * sd * std::log(sd + 1.0);
        } else if constexpr (std::is_same_v<T, shape::Partitioned>) {
          if (v.i < 0 || v.j < 0) throw std::invalid_argument("negative component size");
          const auto i = static_cast<std::uint64_t>(v.i);
          const auto j = static_cast<std::uint64_t>(v.j);
          const double edges = static_cast<double>(i + j) - 1.0;
          return log_tree_count_partitioned(i, j) -
                 log_pow(static_cast<double>(i * j), edges);
        } else {
          if (v.s < 0) throw std::invalid_argument("negative component size");
          if (v.d < 2) throw std::invalid_argument("d must be at least 2");
          const auto s = static_cast<std::uint64_t>(v.s);
          const double sd = static_cast<double>(s);
          const double dd = static_cast<double>(v.d);
          const double q = (dd - 1.0) * sd + 1.0;
          return sd * std::lgamma(dd + 1.0) + log_husimi_count(s, v.d) - dd * sd * std::log(q);
        }
      },
      component);
  return std::clamp(std::exp(log_p), 0.0, 1.0);
}

ExactResult expected_matching_d2(std::uint64_t n, std::uint64_t m, SumOptions options) {
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  const LogFactorials lf(std::max(n, m) + 1);
  return mixed_deficit_sum(n, 0, m, lf, options);
}

ExactResult expected_matching_mixed_det(std::uint64_t n, std::uint64_t m, double a,
                                        SumOptions options) {
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  const std::uint64_t two = two_choice_count(n, a);
  const LogFactorials lf(std::max(n, m) + 1);
  return mixed_deficit_sum(two, n - two, m, lf, options);
}

ExactResult expected_matching_mixed_rand(std::uint64_t n, std::uint64_t m, double p,
                                         SumOptions options) {
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  const LogFactorials lf(std::max(n, m) + 1);
  const double nd = static_cast<double>(n);
  const double sigma = std::sqrt(nd * p * (1.0 - p));
  const double centre = nd * p;
  const auto lo = static_cast<std::uint64_t>(std::max(0.0, std::floor(centre - 12.0 * sigma)));
  const auto hi = static_cast<std::uint64_t>(std::min(nd, std::ceil(centre + 12.0 * sigma)));

  ExactResult result;
  CompensatedSum mu;
  CompensatedSum weight_total;
  for (std::uint64_t two = lo; two <= hi; ++two) {
    const double log_w = lf.log_binomial(n, two) + log_pow(p, static_cast<double>(two)) +
                         log_pow(1.0 - p, static_cast<double>(n - two));
    const double w = std::exp(log_w);
    weight_total.add(w);
    const double term = w == 0.0 ? 0.0 : w * mixed_deficit_sum(two, n - two, m, lf, options).mu;
    mu.add(term);
    result.terms.push_back(term);
  }
  const double cap = static_cast<double>(std::min(n, m));
  result.mu = std::clamp(mu.value(), 0.0, cap);
  result.stash_expected = nd - result.mu;
  result.error_bound = std::max(0.0, 1.0 - weight_total.value()) * cap;
  return result;
}

ExactResult expected_matching_partitioned(std::uint64_t n, std::uint64_t m, double beta,
                                          SumOptions options) {
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  const std::uint64_t up = up_bank_size(m, beta);
  if (up == 0 || up == m) {
    throw std::invalid_argument(
        "trivial partition has no exact formula; use the asymptotic closed form");
  }
  const std::uint64_t down = m - up;
  const LogFactorials lf(std::max(n, m) + 1);
  const double upd = static_cast<double>(up);
  const double downd = static_cast<double>(down);

  DeficitAccumulator acc(options);
  const std::uint64_t s_max = std::min(n, m - 1);
  for (std::uint64_t s = 0; s <= s_max; ++s) {
    const double sd = static_cast<double>(s);
    const double outside = static_cast<double>(n - s);
    const std::uint64_t i_lo = s + 1 > down ? s + 1 - down : 0;
    const std::uint64_t i_hi = std::min(s + 1, up);
    CompensatedSum inner;
    for (std::uint64_t i = i_lo; i <= i_hi; ++i) {
      const std::uint64_t j = s + 1 - i;
      const double log_t = log_tree_count_partitioned(i, j);
      if (log_t == kNegInf) continue;
      const double id = static_cast<double>(i);
      const double jd = static_cast<double>(j);
      const double log_term = lf.log_binomial(n, s) + lf.log_binomial(up, i) +
                              lf.log_binomial(down, j) + log_pow_one_minus(id / upd, outside) +
                              log_pow_one_minus(jd / downd, outside) + log_pow(id / upd, sd) +
                              log_pow(jd / downd, sd) + log_t - log_pow(id * jd, sd);
      inner.add(std::exp(log_term));
    }
    if (!acc.add(inner.value())) break;
  }
  return std::move(acc).finish(n, m);
}

ExactResult expected_matching(const ModelParams& params, SumOptions options) {
  validate(params);
  return std::visit(
      [&](const auto& v) -> ExactResult {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Fixed2>) {
          return expected_matching_d2(params.n, params.m, options);
        } else if constexpr (std::is_same_v<T, MixedDet>) {
          return expected_matching_mixed_det(params.n, params.m, v.a, options);
        } else if constexpr (std::is_same_v<T, MixedRand>) {
          return expected_matching_mixed_rand(params.n, params.m, v.p, options);
        } else if constexpr (std::is_same_v<T, Partitioned>) {
          return expected_matching_partitioned(params.n, params.m, v.beta, options);
        } else {
          if (v.d == 2) return expected_matching_d2(params.n, params.m, options);
          throw std::invalid_argument("no exact expectation for d > 2; use the upper bound");
        }
      },
      params.variant);
}

double matching_upper_bound_d(std::uint64_t n, std::uint64_t m, unsigned d) {
  if (d < 2) throw std::invalid_argument("d must be at least 2");
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  const LogFactorials lf(std::max(n, m) + 1);
  const double md = static_cast<double>(m);
  const double dd = static_cast<double>(d);
  const std::uint64_t b = std::min<std::uint64_t>(n, (m - 1) / (d - 1));
  CompensatedSum total;
  for (std::uint64_t s = 0; s <= b; ++s) {
    const double sd = static_cast<double>(s);
    const std::uint64_t q = (d - 1) * s + 1;
    const double qd = static_cast<double>(q);
    const double log_term = std::log(qd - sd) + lf.log_binomial(n, s) + lf.log_binomial(m, q) +
                            log_pow_one_minus(qd / md, dd * static_cast<double>(n - s)) +
                            log_pow(qd / md, dd * sd) + sd * std::log(dd) + lf(q) -
                            ((dd - 1.0) * sd + 2.0) * std::log(qd);
    total.add(std::exp(log_term));
  }
  return std::min(static_cast<double>(n), md - total.value());
}

double stash_size_for_epsilon(std::uint64_t n, std::uint64_t m, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1]");
  }
  const ExactResult exact = expected_matching_d2(n, m);
  return exact.stash_expected + std::sqrt(2.0 * static_cast<double>(n) * std::log(1.0 / epsilon));
}

double concentration_tail_bound(double lambda, Tail tail) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be non-negative");
  const double scale = tail == Tail::kTwoSided ? 2.0 : 1.0;
  return std::min(1.0, scale * std::exp(-lambda * lambda / 2.0));
}

}  // namespace cuckoo_lab
