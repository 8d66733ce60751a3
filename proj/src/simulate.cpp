#include "cuckoo_lab/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cuckoo_lab/numerics.hpp"
#include "cuckoo_lab/parallel.hpp"

namespace cuckoo_lab {
namespace {

std::uint32_t draw(SplitMix64& rng, std::uint64_t bound) {
  return static_cast<std::uint32_t>(rng.uniform(bound));
}

std::vector<double> matching_samples(const ModelParams& params, std::uint64_t trials,
                                     std::uint64_t seed, unsigned threads) {
  std::vector<double> samples(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    SplitMix64 rng(derive_state({seed, t}));
    samples[t] = static_cast<double>(max_matching(gen_graph(params, rng)).size);
  });
  return samples;
}

}  // namespace

SimStats summarize(std::span<const double> samples) {
  SimStats stats;
  stats.trials = samples.size();
  if (samples.empty()) return stats;
  CompensatedSum sum;
  stats.min = samples.front();
  stats.max = samples.front();
  for (double x : samples) {
    sum.add(x);
    stats.min = std::min(stats.min, x);
    stats.max = std::max(stats.max, x);
  }
  const double count = static_cast<double>(samples.size());
  stats.mean = std::clamp(sum.value() / count, stats.min, stats.max);
  if (samples.size() > 1) {
    CompensatedSum squares;
    for (double x : samples) squares.add((x - stats.mean) * (x - stats.mean));
    stats.std_dev = std::sqrt(squares.value() / (count - 1.0));
  }
  stats.std_error = stats.std_dev / std::sqrt(count);
  return stats;
}

BipartiteGraph gen_graph(const ModelParams& params, SplitMix64& rng) {
  validate(params);
  BipartiteGraph g;
  g.m = static_cast<std::uint32_t>(params.m);
  g.choices.resize(params.n);
  const std::uint64_t m = params.m;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Fixed2>) {
          for (auto& c : g.choices) c = {draw(rng, m), draw(rng, m)};
        } else if constexpr (std::is_same_v<T, MixedDet>) {
          const std::uint64_t single = params.n - two_choice_count(params.n, v.a);
          for (std::uint64_t i = 0; i < params.n; ++i) {
            if (i < single) {
              g.choices[i] = {draw(rng, m)};
            } else {
              g.choices[i] = {draw(rng, m), draw(rng, m)};
            }
          }
        } else if constexpr (std::is_same_v<T, MixedRand>) {
          for (auto& c : g.choices) {
            if (rng.unit() < v.p) {
              c = {draw(rng, m), draw(rng, m)};
            } else {
              c = {draw(rng, m)};
            }
          }
        } else if constexpr (std::is_same_v<T, Partitioned>) {
          const std::uint64_t up = up_bank_size(m, v.beta);
          g.partition_boundary = static_cast<std::uint32_t>(up);
          if (up == 0 || up == m) {
            for (auto& c : g.choices) c = {draw(rng, m)};
          } else {
            for (auto& c : g.choices) {
              c = {draw(rng, up), static_cast<std::uint32_t>(up + rng.uniform(m - up))};
            }
          }
        } else {
          for (auto& c : g.choices) {
            c.resize(v.d);
            for (auto& r : c) r = draw(rng, m);
          }
        }
      },
      params.variant);
  return g;
}

SimStats estimate_mu(const ModelParams& params, std::uint64_t trials, std::uint64_t seed,
                     unsigned threads) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  validate(params);
  const std::vector<double> samples = matching_samples(params, trials, seed, threads);
  return summarize(samples);
}

ConcentrationOutcome concentration_experiment(const ModelParams& params, std::uint64_t trials,
                                              double lambda, std::uint64_t seed,
                                              unsigned threads) {
  if (trials < 100) throw std::invalid_argument("concentration experiment needs >= 100 trials");
  ConcentrationOutcome out;
  out.trials = trials;
  out.bound = concentration_tail_bound(lambda);
  out.mu_exact = expected_matching(params).mu;
  const double radius = lambda * std::sqrt(static_cast<double>(params.n));
  const std::vector<double> samples = matching_samples(params, trials, seed, threads);
  for (double x : samples) {
    if (std::fabs(x - out.mu_exact) > radius) ++out.exceedances;
  }
  out.empirical_fraction = static_cast<double>(out.exceedances) / static_cast<double>(trials);
  return out;
}

}  // namespace cuckoo_lab
