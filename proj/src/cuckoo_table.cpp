#include "cuckoo_lab/cuckoo_table.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "cuckoo_lab/hashing.hpp"

namespace cuckoo_lab {
namespace {

constexpr std::uint32_t kRoot = std::numeric_limits<std::uint32_t>::max();

}  // namespace

CuckooTable::CuckooTable(TableConfig config) : config_(std::move(config)) {
  if (config_.m < 1) throw std::invalid_argument("table needs at least one bin");
  if (config_.seeds.size() < 2) throw std::invalid_argument("table needs d >= 2 seeds");
  if (config_.partition_boundary) {
    if (config_.seeds.size() != 2) throw std::invalid_argument("partitioned table needs d = 2");
    if (*config_.partition_boundary == 0 || *config_.partition_boundary >= config_.m) {
      throw std::invalid_argument("partition boundary must lie in (0, m)");
    }
  }
  keys_.assign(config_.m, 0);
  occupied_.assign(config_.m, 0);
  alternatives_.assign(static_cast<std::size_t>(config_.m) * d(), 0);
  mark_.assign(config_.m, 0);
  parent_.assign(config_.m, kRoot);
  queue_.reserve(config_.m);
}

std::vector<std::uint32_t> CuckooTable::bin_choices(std::uint64_t key) const {
  return cuckoo_lab::bin_choices(key, config_.seeds, config_.m, config_.partition_boundary);
}

bool CuckooTable::contains(std::uint64_t key, const std::vector<std::uint32_t>& choices) const {
  for (std::uint32_t b : choices) {
    if (occupied_[b] && keys_[b] == key) return true;
  }
  return stash_keys_.count(key) != 0;
}

void CuckooTable::store(std::uint32_t bin, std::uint64_t key, const std::uint32_t* choices) {
  keys_[bin] = key;
  occupied_[bin] = 1;
  std::copy(choices, choices + d(), alternatives_.begin() + static_cast<std::ptrdiff_t>(bin) * d());
}

std::optional<std::uint32_t> CuckooTable::augment(std::uint64_t key,
                                                  const std::vector<std::uint32_t>& choices) {
  if (++epoch_ == 0) {
    std::fill(mark_.begin(), mark_.end(), 0);
    epoch_ = 1;
  }
  queue_.clear();
  std::optional<std::uint32_t> free_bin;
  for (std::uint32_t b : choices) {
    if (mark_[b] == epoch_) continue;
    mark_[b] = epoch_;
    parent_[b] = kRoot;
    if (!occupied_[b]) {
      free_bin = b;
      break;
    }
    queue_.push_back(b);
  }
  const unsigned dd = d();
  for (std::size_t head = 0; !free_bin && head < queue_.size(); ++head) {
    const std::uint32_t b = queue_[head];
    const std::uint32_t* alt = &alternatives_[static_cast<std::size_t>(b) * dd];
    for (unsigned i = 0; i < dd; ++i) {
      const std::uint32_t c = alt[i];
      if (mark_[c] == epoch_) continue;
      mark_[c] = epoch_;
      parent_[c] = b;
      if (!occupied_[c]) {
        free_bin = c;
        break;
      }
      queue_.push_back(c);
    }
  }
  if (!free_bin) return std::nullopt;

  // Shift every key on the path one step towards the free bin.
  std::uint32_t cur = *free_bin;
  while (parent_[cur] != kRoot) {
    const std::uint32_t prev = parent_[cur];
    store(cur, keys_[prev], &alternatives_[static_cast<std::size_t>(prev) * dd]);
    ++counters_.displacements;
    cur = prev;
  }
  store(cur, key, choices.data());
  return cur;
}

InsertOutcome CuckooTable::insert(std::uint64_t key) {
  const std::vector<std::uint32_t> choices = bin_choices(key);
  if (contains(key, choices)) return {InsertStatus::kDuplicate, std::nullopt};
  if (auto bin = augment(key, choices)) {
    ++counters_.placed;
    return {InsertStatus::kPlaced, bin};
  }
  if (config_.stash_limit && stash_.size() >= *config_.stash_limit) ++counters_.stash_limit_hits;
  stash_.push_back(key);
  stash_keys_.insert(key);
  ++counters_.stashed;
  return {InsertStatus::kStashed, std::nullopt};
}

LookupOutcome CuckooTable::lookup(std::uint64_t key) {
  ++counters_.lookups;
  LookupOutcome out;
  for (std::uint32_t b : bin_choices(key)) {
    ++out.probes;
    if (occupied_[b] && keys_[b] == key) {
      out.status = LookupStatus::kFound;
      out.bin = b;
      return out;
    }
  }
  for (std::uint64_t k : stash_) {
    ++out.probes;
    if (k == key) {
      out.status = LookupStatus::kFoundInStash;
      return out;
    }
  }
  return out;
}

bool CuckooTable::remove(std::uint64_t key) {
  if (stash_keys_.erase(key) != 0) {
    stash_.erase(std::find(stash_.begin(), stash_.end(), key));
    --counters_.stashed;
    return true;
  }
  for (std::uint32_t b : bin_choices(key)) {
    if (occupied_[b] && keys_[b] == key) {
      occupied_[b] = 0;
      --counters_.placed;
      // Freeing one bin lowers the matching by one; a single augmenting path
      // from a stashed key restores it, after which no other can succeed.
      for (auto it = stash_.begin(); it != stash_.end(); ++it) {
        const std::uint64_t k = *it;
        if (augment(k, bin_choices(k))) {
          stash_.erase(it);
          stash_keys_.erase(k);
          --counters_.stashed;
          ++counters_.placed;
          break;
        }
      }
      return true;
    }
  }
  return false;
}

LoadStats CuckooTable::load_stats() const {
  LoadStats s;
  s.placed = counters_.placed;
  s.stash_size = stash_.size();
  s.load_fraction = static_cast<double>(s.placed) / static_cast<double>(config_.m);
  const std::uint64_t total = s.placed + s.stash_size;
  s.overflow_fraction =
      total == 0 ? 0.0 : static_cast<double>(s.stash_size) / static_cast<double>(total);
  return s;
}

std::optional<std::uint64_t> CuckooTable::key_in_bin(std::uint32_t bin) const {
  if (bin >= config_.m || !occupied_[bin]) return std::nullopt;
  return keys_[bin];
}

BipartiteGraph CuckooTable::induced_graph() const {
  BipartiteGraph g;
  g.m = config_.m;
  g.partition_boundary = config_.partition_boundary;
  const unsigned dd = d();
  for (std::uint32_t b = 0; b < config_.m; ++b) {
    if (!occupied_[b]) continue;
    const auto first = alternatives_.begin() + static_cast<std::ptrdiff_t>(b) * dd;
    g.choices.emplace_back(first, first + dd);
  }
  for (std::uint64_t k : stash_) g.choices.push_back(bin_choices(k));
  return g;
}

}  // namespace cuckoo_lab
