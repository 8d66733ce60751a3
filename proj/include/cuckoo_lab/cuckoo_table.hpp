#pragma once

// Cuckoo hash table with one slot per bin and an unbounded stash. Insertion
// runs a breadth-first augmenting-path search from the new key, so the
// number of binned keys always equals the maximum matching size of the
// element/bin graph formed by every stored key.

#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "cuckoo_lab/matching.hpp"

namespace cuckoo_lab {

enum class InsertStatus { kPlaced, kStashed, kDuplicate };

struct InsertOutcome {
  InsertStatus status = InsertStatus::kPlaced;
  std::optional<std::uint32_t> bin;  // set when placed
};

enum class LookupStatus { kFound, kFoundInStash, kAbsent };

struct LookupOutcome {
  LookupStatus status = LookupStatus::kAbsent;
  std::optional<std::uint32_t> bin;
  std::uint32_t probes = 0;
};

struct TableCounters {
  std::uint64_t placed = 0;
  std::uint64_t stashed = 0;
  std::uint64_t displacements = 0;
  std::uint64_t lookups = 0;
  // Inserts that found the stash already at its configured limit.
  std::uint64_t stash_limit_hits = 0;
};

struct LoadStats {
  std::uint64_t placed = 0;
  std::uint64_t stash_size = 0;
  double load_fraction = 0.0;      // placed / m
  double overflow_fraction = 0.0;  // stash / (placed + stash), 0 when empty
};

struct TableConfig {
  std::uint32_t m = 1;
  std::vector<std::uint64_t> seeds;  // one per choice; d = seeds.size()
  std::optional<std::uint32_t> partition_boundary;
  // Reporting threshold only; the stash never drops keys.
  std::optional<std::uint64_t> stash_limit;
};

class CuckooTable {
 public:
  // Throws std::invalid_argument for m < 1, fewer than 2 seeds, or a
  // partition with d != 2 or a boundary outside (0, m).
  explicit CuckooTable(TableConfig config);

  InsertOutcome insert(std::uint64_t key);
  LookupOutcome lookup(std::uint64_t key);
  // Removes the key; if it held a bin, stashed keys are retried in stash
  // order until one of them is placed.
  bool remove(std::uint64_t key);

  LoadStats load_stats() const;
  const TableCounters& counters() const { return counters_; }

  std::vector<std::uint32_t> bin_choices(std::uint64_t key) const;
  std::uint32_t m() const { return config_.m; }
  unsigned d() const { return static_cast<unsigned>(config_.seeds.size()); }
  std::optional<std::uint64_t> key_in_bin(std::uint32_t bin) const;
  const std::vector<std::uint64_t>& stash() const { return stash_; }

  // Element/bin graph of every stored key: binned keys in bin order, then the
  // stash in order.
  BipartiteGraph induced_graph() const;

 private:
  bool contains(std::uint64_t key, const std::vector<std::uint32_t>& choices) const;
  // Places the key through the shortest augmenting path; returns its bin.
  std::optional<std::uint32_t> augment(std::uint64_t key, const std::vector<std::uint32_t>& choices);
  void store(std::uint32_t bin, std::uint64_t key, const std::uint32_t* choices);

  TableConfig config_;
  std::vector<std::uint64_t> keys_;
  std::vector<std::uint8_t> occupied_;
  std::vector<std::uint32_t> alternatives_;  // d choices of the key in each bin
  std::vector<std::uint64_t> stash_;
  std::unordered_set<std::uint64_t> stash_keys_;
  TableCounters counters_;

  // BFS scratch, reused across inserts.
  std::vector<std::uint32_t> mark_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> queue_;
  std::uint32_t epoch_ = 0;
};

}  // namespace cuckoo_lab
