#pragma once

// Exact finite-size expectations for the random bipartite graph models that
// describe a cuckoo hash table with a stash: n elements (left vertices) each
// choose bins (right vertices) among m. The maximum matching size is the
// number of elements the table can hold; n minus it is the stash occupancy.
//
// Every count is evaluated in the log domain and the per-size summands are
// accumulated with compensated summation.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cuckoo_lab {

// Each element picks 2 bins uniformly with repetition.
struct Fixed2 {};
// A fixed share of elements picks 2 bins, the rest 1; `a` is the mean number
// of choices, so (2 - a) * n elements pick one bin.
struct MixedDet {
  double a = 2.0;
};
// Each element independently picks 2 bins with probability p, otherwise 1.
struct MixedRand {
  double p = 1.0;
};
// Bins split into an "up" bank of beta * m bins and a "down" bank of the
// rest; each element picks one bin in each bank.
struct Partitioned {
  double beta = 0.5;
};
// Each element picks d bins uniformly with repetition.
struct FixedD {
  unsigned d = 3;
};

using ModelVariant = std::variant<Fixed2, MixedDet, MixedRand, Partitioned, FixedD>;

struct ModelParams {
  std::uint64_t n = 0;
  std::uint64_t m = 1;
  ModelVariant variant = Fixed2{};
};

// Throws std::invalid_argument when the parameters violate the model's
// integrality or range constraints.
void validate(const ModelParams& params);

// Number of elements with two choices under MixedDet; requires a * n integral.
std::uint64_t two_choice_count(std::uint64_t n, double a);
// Size of the up bank under Partitioned; requires beta * m integral.
std::uint64_t up_bank_size(std::uint64_t m, double beta);

std::string model_name(const ModelVariant& variant);

struct ExactResult {
  double mu = 0.0;
  double stash_expected = 0.0;
  // Non-negative summands of the deficit sum, one per component size s (or
  // per two-choice count for the MixedRand mixture).
  std::vector<double> terms;
  std::optional<std::size_t> truncated_at;
  // Absolute bound on mass deliberately left out of the sum (MixedRand window).
  double error_bound = 0.0;
};

struct SumOptions {
  // Stop once 50 consecutive decreasing summands are each below 1e-18 of the
  // running total.
  bool truncate = true;
};

// ln of the number of connected labeled bipartite graphs with s left vertices
// of degree 2 and s + 1 right vertices: (s+1)^(s-1) * s!.
double log_tree_count_d2(std::uint64_t s);

// ln of the number of connected graphs with i up-bank and j down-bank right
// vertices and i + j - 1 left vertices, each left vertex joined to one vertex
// of each bank: i^(j-1) * j^(i-1) * (i+j-1)!. Returns -inf when the count is 0.
// Throws on i = j = 0.
double log_tree_count_partitioned(std::uint64_t i, std::uint64_t j);

// ln of the number of connected labeled bipartite graphs with s left vertices
// of degree d and q = (d-1)s + 1 right vertices:
// q! / ((d-1)!)^s * q^(s-2).
double log_husimi_count(std::uint64_t s, unsigned d);

namespace shape {
struct D2 {
  std::int64_t s = 0;
};
struct Partitioned {
  std::int64_t i = 0;
  std::int64_t j = 0;
};
struct GeneralD {
  std::int64_t s = 0;
  unsigned d = 2;
};
}  // namespace shape

using ComponentShape = std::variant<shape::D2, shape::Partitioned, shape::GeneralD>;

// Probability that uniformly random choices of the shape's left vertices,
// restricted to the shape's right vertices, form a connected graph.
double connect_probability(const ComponentShape& shape);

ExactResult expected_matching_d2(std::uint64_t n, std::uint64_t m, SumOptions options = {});
ExactResult expected_matching_mixed_det(std::uint64_t n, std::uint64_t m, double a,
                                        SumOptions options = {});
ExactResult expected_matching_mixed_rand(std::uint64_t n, std::uint64_t m, double p,
                                         SumOptions options = {});
// beta must lie strictly inside (0, 1); the trivial partitions have no
// finite-n formula here (use the asymptotic closed form instead).
ExactResult expected_matching_partitioned(std::uint64_t n, std::uint64_t m, double beta,
                                          SumOptions options = {});

// Dispatches on the model; FixedD throws (only an upper bound exists).
ExactResult expected_matching(const ModelParams& params, SumOptions options = {});

// Upper bound on the expected maximum matching size with d choices per
// element. Equals expected_matching_d2 for d = 2.
double matching_upper_bound_d(std::uint64_t n, std::uint64_t m, unsigned d);

// Stash slots that keep the probability of overflowing the stash below
// epsilon with two choices: n - mu + sqrt(2 n ln(1/epsilon)).
double stash_size_for_epsilon(std::uint64_t n, std::uint64_t m, double epsilon);

enum class Tail { kTwoSided, kOneSided };

// Bound on Pr(|matching - mean| > lambda * sqrt(n)), clamped to 1.
double concentration_tail_bound(double lambda, Tail tail = Tail::kTwoSided);

}  // namespace cuckoo_lab
