#include "cuckoo_lab/hashing.hpp"

#include <stdexcept>

namespace cuckoo_lab {

std::uint32_t reduce_hash(std::uint64_t h, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("reduce_hash: empty range");
  const std::uint64_t threshold = (0 - bound) % bound;
  // A bijective mix cannot stay inside the rejected range for long; the cap
  // only guards against a pathological short cycle.
  for (int round = 0; h < threshold && round < 64; ++round) h = wang_mix64(h);
  return static_cast<std::uint32_t>(h % bound);
}

std::vector<std::uint32_t> bin_choices(std::uint64_t key, std::span<const std::uint64_t> seeds,
                                       std::uint32_t m,
                                       std::optional<std::uint32_t> partition_boundary) {
  if (m < 1) throw std::invalid_argument("bin_choices: m must be at least 1");
  std::vector<std::uint32_t> out(seeds.size());
  if (partition_boundary) {
    const std::uint32_t k = *partition_boundary;
    if (seeds.size() != 2 || k == 0 || k >= m) {
      throw std::invalid_argument("bin_choices: partition needs d = 2 and 0 < boundary < m");
    }
    out[0] = reduce_hash(wang_mix64(key ^ seeds[0]), k);
    out[1] = k + reduce_hash(wang_mix64(key ^ seeds[1]), m - k);
    return out;
  }
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    out[i] = reduce_hash(wang_mix64(key ^ seeds[i]), m);
  }
  return out;
}

}  // namespace cuckoo_lab
