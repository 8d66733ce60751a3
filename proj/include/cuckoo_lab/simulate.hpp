#pragma once

// Monte-Carlo counterpart of the exact model: draw random graphs, measure
// their maximum matching, aggregate.

#include <cstdint>
#include <span>

#include "cuckoo_lab/exact_model.hpp"
#include "cuckoo_lab/matching.hpp"
#include "cuckoo_lab/rng.hpp"

namespace cuckoo_lab {

struct SimStats {
  std::uint64_t trials = 0;
  double mean = 0.0;
  double std_dev = 0.0;  // sample standard deviation
  double min = 0.0;
  double max = 0.0;
  double std_error = 0.0;
};

// Aggregates in index order, so the result does not depend on which worker
// produced which sample.
SimStats summarize(std::span<const double> samples);

// One random instance of the model. The trivial partitions (beta of 0 or 1)
// give each element a single choice in the non-empty bank.
BipartiteGraph gen_graph(const ModelParams& params, SplitMix64& rng);

// Trial t draws from derive_state({seed, t}).
SimStats estimate_mu(const ModelParams& params, std::uint64_t trials, std::uint64_t seed,
                     unsigned threads = 0);

struct ConcentrationOutcome {
  double empirical_fraction = 0.0;
  double bound = 0.0;
  double mu_exact = 0.0;
  std::uint64_t exceedances = 0;
  std::uint64_t trials = 0;
};

// Share of trials whose matching deviates from the exact mean by more than
// lambda * sqrt(n), next to the two-sided tail bound. Needs trials >= 100 and
// a model with an exact mean.
ConcentrationOutcome concentration_experiment(const ModelParams& params, std::uint64_t trials,
                                              double lambda, std::uint64_t seed,
                                              unsigned threads = 0);

}  // namespace cuckoo_lab
