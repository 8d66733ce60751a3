#pragma once

// Limits of the normalized expected maximum matching size (matching / n) as
// n grows with the load alpha = n / m held fixed.

#include <optional>
#include <utility>

namespace cuckoo_lab {

// Principal real branch of the Lambert W function (w >= -1, w * e^w = x).
// Throws std::domain_error for x < -1/e beyond a 1e-12 tolerance.
double lambert_w0(double x);

// Lower real branch (w <= -1) on [-1/e, 0).
double lambert_w_m1(double x);

struct BranchPoint {
  double t1 = 0.0;
  double t2 = 0.0;
};

struct AsymptoticResult {
  double gamma = 0.0;
  // Solution of the partitioned model's implicit pair, when one was solved.
  std::optional<BranchPoint> branch;
  // The degenerate closed form was returned instead of the general one.
  bool closed_form_used = false;
};

// Two choices per element. Exactly 1 for alpha <= 0.5.
AsymptoticResult gamma_d2(double alpha);

// Mean number of choices a in [1, 2].
AsymptoticResult gamma_mixed(double alpha, double a);

// Two choices with probability p; the limit coincides with a = 1 + p.
AsymptoticResult gamma_mixed_rand(double alpha, double p);

// Bins split into banks of beta * m and (1 - beta) * m bins, one choice in
// each. Throws std::runtime_error if the implicit pair cannot be solved on
// the t1 * t2 <= 1 branch.
AsymptoticResult gamma_partitioned(double alpha, double beta);

// Solves t1 = x e^{t2}, t2 = y e^{t1} for the solution reached continuously
// from (0, 0), i.e. the one with t1 * t2 <= 1.
BranchPoint solve_partition_pair(double x, double y);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Range of beta for which the partitioned model still has a limit of 1 at
// load alpha; empty above alpha = 0.5.
std::optional<Interval> perfect_beta_interval(double alpha);

}  // namespace cuckoo_lab
