#include "cuckoo_lab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cuckoo_lab {
namespace {

constexpr double kBranchPoint = -1.0 / std::numbers::e;
constexpr double kDomainTolerance = 1e-12;
constexpr int kHalleyIterations = 50;
constexpr double kHalleyStep = 1e-14;

double halley(double x, double w) {
  for (int it = 0; it < kHalleyIterations; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    if (denom == 0.0 || !std::isfinite(denom)) break;
    const double step = f / denom;
    w -= step;
    if (std::fabs(step) <= kHalleyStep * std::max(1.0, std::fabs(w))) break;
  }
  return w;
}

// Series about the branch point in p = +-sqrt(2(e x + 1)).
double branch_point_guess(double x, double sign) {
  const double p = sign * std::sqrt(std::max(0.0, 2.0 * (std::numbers::e * x + 1.0)));
  return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
}

bool at_branch_point(double x) {
  return x <= kBranchPoint && x >= kBranchPoint - kDomainTolerance;
}

double one_choice_limit(double alpha) { return -std::expm1(-alpha) / alpha; }

void require_positive_load(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("load alpha must be positive");
  }
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x) || x < kBranchPoint - kDomainTolerance) {
    throw std::domain_error("lambert_w0: argument below -1/e");
  }
  if (at_branch_point(x)) return -1.0;
  if (x == 0.0) return 0.0;
  double w;
  if (x < -0.32) {
    w = branch_point_guess(x, 1.0);
  } else if (x <= 3.0) {
    w = std::log1p(x);
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }
  return std::max(-1.0, halley(x, w));
}

double lambert_w_m1(double x) {
  if (std::isnan(x) || x < kBranchPoint - kDomainTolerance || x >= 0.0) {
    throw std::domain_error("lambert_w_m1: argument outside [-1/e, 0)");
  }
  if (at_branch_point(x)) return -1.0;
  double w;
  if (x < -0.25) {
    w = branch_point_guess(x, -1.0);
  } else {
    const double l1 = std::log(-x);
    const double l2 = std::log(-l1);
    w = l1 - l2 + l2 / l1;
  }
  return std::min(-1.0, halley(x, w));
}

AsymptoticResult gamma_d2(double alpha) {
  require_positive_load(alpha);
  if (alpha <= 0.5) return {1.0, std::nullopt, true};
  const double w = lambert_w0(-2.0 * alpha * std::exp(-2.0 * alpha));
  const double gamma = 1.0 / alpha + w / (2.0 * alpha * alpha) + w * w / (4.0 * alpha * alpha);
  return {std::clamp(gamma, 0.0, 1.0), std::nullopt, false};
}

AsymptoticResult gamma_mixed(double alpha, double a) {
  require_positive_load(alpha);
  if (!(a >= 1.0 && a <= 2.0)) throw std::invalid_argument("a must lie in [1, 2]");
  if (a == 1.0) return {one_choice_limit(alpha), std::nullopt, true};
  if (a == 2.0) return gamma_d2(alpha);
  const double k = a - 1.0;
  const double w = lambert_w0(-2.0 * alpha * k * std::exp(-a * alpha));
  const double gamma =
      1.0 / alpha + w / (2.0 * alpha * alpha * k) + w * w / (4.0 * alpha * alpha * k);
  return {std::clamp(gamma, 0.0, 1.0), std::nullopt, false};
}

AsymptoticResult gamma_mixed_rand(double alpha, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  return gamma_mixed(alpha, 1.0 + p);
}

BranchPoint solve_partition_pair(double x, double y) {
  if (!(x > 0.0 && y > 0.0)) throw std::invalid_argument("partition pair needs x, y > 0");
  // Eliminating t2 leaves f(t) = t - x exp(y e^t), concave in t with f(0) < 0.
  // Newton started at 0 climbs monotonically to the smallest root, which is
  // the root where t1 * t2 <= 1.
  double t = 0.0;
  for (int it = 0; it < 500; ++it) {
    const double t2 = y * std::exp(t);
    const double g = x * std::exp(t2);
    const double f = t - g;
    const double fp = 1.0 - g * t2;
    if (f >= 0.0) break;
    if (!(fp > 0.0)) {
      throw std::runtime_error("partition pair has no solution on the t1*t2 <= 1 branch");
    }
    const double step = -f / fp;
    t += step;
    if (step <= 1e-16 * std::max(1.0, t)) break;
  }
  const double t2 = y * std::exp(t);
  if (!std::isfinite(t) || !std::isfinite(t2) || t * t2 > 1.0 + 1e-9) {
    throw std::runtime_error("partition pair solver did not converge on the t1*t2 <= 1 branch");
  }
  return {t, t2};
}

AsymptoticResult gamma_partitioned(double alpha, double beta) {
  require_positive_load(alpha);
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in [0, 1]");
  if (beta == 0.0 || beta == 1.0) return {one_choice_limit(alpha), std::nullopt, true};
  const double other = 1.0 - beta;
  // x pairs with the up bank (size beta * m), y with the down bank.
  const double x = alpha / other * std::exp(-alpha / beta);
  const double y = alpha / beta * std::exp(-alpha / other);
  const BranchPoint tp = solve_partition_pair(x, y);
  const double gamma =
      1.0 / alpha - beta * other / (alpha * alpha) * (tp.t1 + tp.t2 - tp.t1 * tp.t2);
  return {std::clamp(gamma, 0.0, 1.0), tp, false};
}

std::optional<Interval> perfect_beta_interval(double alpha) {
  require_positive_load(alpha);
  if (alpha > 0.5) return std::nullopt;
  const double r = std::sqrt(1.0 - 4.0 * alpha * alpha);
  return Interval{(1.0 - r) / 2.0, (1.0 + r) / 2.0};
}

}  // namespace cuckoo_lab
