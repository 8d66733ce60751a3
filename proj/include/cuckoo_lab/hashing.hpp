#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace cuckoo_lab {

// Thomas Wang's 64-bit integer mix, bit-exact.
constexpr std::uint64_t wang_mix64(std::uint64_t x) {
  x = (~x) + (x << 21);
  x ^= x >> 24;
  x = x + (x << 3) + (x << 8);
  x ^= x >> 14;
  x = x + (x << 2) + (x << 4);
  x ^= x >> 28;
  x = x + (x << 31);
  return x;
}

// Maps a hash value to [0, bound) without modulo bias: values in the short
// low range are re-mixed until they leave it.
std::uint32_t reduce_hash(std::uint64_t h, std::uint64_t bound);

// Bin i = reduce(wang_mix64(key ^ seeds[i]), m). With a partition boundary
// (d = 2 only), choice 0 lands in [0, boundary) and choice 1 in [boundary, m).
std::vector<std::uint32_t> bin_choices(std::uint64_t key, std::span<const std::uint64_t> seeds,
                                       std::uint32_t m,
                                       std::optional<std::uint32_t> partition_boundary = {});

}  // namespace cuckoo_lab
