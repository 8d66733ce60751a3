#pragma once

// Trace-driven experiments: feed a key stream through the cuckoo table under
// freshly seeded hash functions, many times, and report how much overflowed
// into the stash.
//
// Key files come in two formats:
//   hex-lines      one hex token (1-16 digits, either case) per line; blank
//                  lines and lines starting with '#' are skipped
//   binary-u64-le  consecutive little-endian 8-byte records

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cuckoo_lab {

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class KeyFormat { kHexLines, kBinaryU64Le };

// Parses "hex-lines" / "binary-u64-le".
KeyFormat parse_key_format(const std::string& name);

enum class DuplicatePolicy {
  kDeduplicate,   // keep the first occurrence
  kDisambiguate,  // XOR the k-th repeat with a mixed occurrence counter
};

struct KeyStream {
  std::vector<std::uint64_t> keys;
  std::string source;
  bool dedup_applied = false;
};

KeyStream apply_duplicate_policy(std::vector<std::uint64_t> keys, std::string source,
                                 DuplicatePolicy policy);

// Throws TraceError on unreadable files, malformed lines (message names the
// line number) and truncated binary records.
KeyStream read_keys(const std::filesystem::path& path, KeyFormat format,
                    DuplicatePolicy policy = DuplicatePolicy::kDeduplicate);

// `count` distinct keys drawn from the seeded generator.
KeyStream synthetic_keys(std::uint64_t count, std::uint64_t seed);

struct TraceConfig {
  std::uint32_t m = 1;
  unsigned d = 2;
  std::uint32_t repeats = 1;
  std::uint64_t base_seed = 0;
  std::optional<std::uint32_t> partition_boundary;
  // Stash capacity to test against; repeats whose stash ends above it are
  // counted in TraceReport::stash_overflows.
  std::optional<std::uint64_t> stash_limit;
  unsigned threads = 0;
};

struct RepeatOutcome {
  std::uint64_t hash_seed = 0;  // seeds[i] are the next d outputs of SplitMix64(hash_seed)
  std::uint64_t placed = 0;
  std::uint64_t stashed = 0;
  double inserted_fraction = 0.0;
  double overflow_fraction = 0.0;
};

struct TraceReport {
  std::uint32_t m = 0;
  std::uint64_t n = 0;
  unsigned d = 0;
  std::uint32_t repeats = 0;
  double overflow_mean = 0.0;
  double overflow_min = 0.0;
  double overflow_max = 0.0;
  double inserted_mean = 0.0;
  // Cross-repeat standard error of the placed count.
  double placed_std_error = 0.0;
  double placed_mean = 0.0;
  std::uint64_t duplicates_rejected = 0;
  std::uint32_t stash_overflows = 0;
  std::vector<RepeatOutcome> per_repeat;
};

TraceReport run_trace_experiment(const KeyStream& stream, const TraceConfig& config);

}  // namespace cuckoo_lab
