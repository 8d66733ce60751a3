#include "cuckoo_lab/trace.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <unordered_map>
#include <unordered_set>

#include "cuckoo_lab/cuckoo_table.hpp"
#include "cuckoo_lab/parallel.hpp"
#include "cuckoo_lab/rng.hpp"
#include "cuckoo_lab/simulate.hpp"

namespace cuckoo_lab {
namespace {

std::optional<std::uint64_t> parse_hex(std::string_view token) {
  if (token.empty() || token.size() > 16) return std::nullopt;
  std::uint64_t value = 0;
  for (char c : token) {
    unsigned digit;
    if (c >= '0' && c <= '9') {
      digit = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      digit = static_cast<unsigned>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      digit = static_cast<unsigned>(c - 'A' + 10);
    } else {
      return std::nullopt;
    }
    value = (value << 4) | digit;
  }
  return value;
}

std::string_view trim(std::string_view s) {
  const auto space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && space(s.front())) s.remove_prefix(1);
  while (!s.empty() && space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

KeyFormat parse_key_format(const std::string& name) {
  if (name == "hex-lines") return KeyFormat::kHexLines;
  if (name == "binary-u64-le") return KeyFormat::kBinaryU64Le;
  throw std::invalid_argument("unknown key format '" + name + "'");
}

KeyStream apply_duplicate_policy(std::vector<std::uint64_t> keys, std::string source,
                                 DuplicatePolicy policy) {
  KeyStream out;
  out.source = std::move(source);
  if (policy == DuplicatePolicy::kDeduplicate) {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(keys.size());
    for (std::uint64_t k : keys) {
      if (seen.insert(k).second) out.keys.push_back(k);
    }
    out.dedup_applied = true;
    return out;
  }
  std::unordered_map<std::uint64_t, std::uint64_t> occurrences;
  out.keys.reserve(keys.size());
  for (std::uint64_t k : keys) {
    const std::uint64_t seen = occurrences[k]++;
    out.keys.push_back(seen == 0 ? k : k ^ splitmix64_mix(seen));
  }
  return out;
}

KeyStream read_keys(const std::filesystem::path& path, KeyFormat format, DuplicatePolicy policy) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceError("cannot open key file " + path.string());
  std::vector<std::uint64_t> keys;
  if (format == KeyFormat::kHexLines) {
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string_view token = trim(line);
      if (token.empty() || token.front() == '#') continue;
      const auto value = parse_hex(token);
      if (!value) {
        throw TraceError(path.string() + ":" + std::to_string(line_no) + ": malformed hex key '" +
                         std::string(token) + "'");
      }
      keys.push_back(*value);
    }
  } else {
    const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                           std::istreambuf_iterator<char>());
    if (bytes.size() % 8 != 0) {
      throw TraceError(path.string() + ": truncated record (" + std::to_string(bytes.size()) +
                       " bytes is not a multiple of 8)");
    }
    keys.reserve(bytes.size() / 8);
    for (std::size_t off = 0; off < bytes.size(); off += 8) {
      std::uint64_t v = 0;
      for (int b = 7; b >= 0; --b) v = (v << 8) | bytes[off + static_cast<std::size_t>(b)];
      keys.push_back(v);
    }
  }
  return apply_duplicate_policy(std::move(keys), path.string(), policy);
}

KeyStream synthetic_keys(std::uint64_t count, std::uint64_t seed) {
  KeyStream out;
  out.source = "synthetic:" + std::to_string(count) + ":" + std::to_string(seed);
  out.dedup_applied = true;
  out.keys.reserve(count);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(count);
  SplitMix64 rng(derive_state({seed, ~std::uint64_t{0}}));
  while (out.keys.size() < count) {
    const std::uint64_t k = rng.next();
    if (seen.insert(k).second) out.keys.push_back(k);
  }
  return out;
}

TraceReport run_trace_experiment(const KeyStream& stream, const TraceConfig& config) {
  if (config.repeats < 1) throw std::invalid_argument("trace experiment needs >= 1 repeat");
  if (config.d < 2) throw std::invalid_argument("trace experiment needs d >= 2");
  TraceReport report;
  report.m = config.m;
  report.n = stream.keys.size();
  report.d = config.d;
  report.repeats = config.repeats;
  report.per_repeat.resize(config.repeats);
  std::vector<std::uint64_t> duplicates(config.repeats, 0);

  parallel_for(config.repeats, config.threads, [&](std::size_t r) {
    RepeatOutcome& out = report.per_repeat[r];
    out.hash_seed = derive_state({config.base_seed, r});
    SplitMix64 rng(out.hash_seed);
    TableConfig tc;
    tc.m = config.m;
    tc.partition_boundary = config.partition_boundary;
    tc.seeds.resize(config.d);
    for (auto& s : tc.seeds) s = rng.next();
    CuckooTable table(std::move(tc));
    for (std::uint64_t k : stream.keys) {
      if (table.insert(k).status == InsertStatus::kDuplicate) ++duplicates[r];
    }
    const LoadStats stats = table.load_stats();
    out.placed = stats.placed;
    out.stashed = stats.stash_size;
    const std::uint64_t stored = stats.placed + stats.stash_size;
    out.overflow_fraction = stats.overflow_fraction;
    out.inserted_fraction =
        stored == 0 ? 1.0 : static_cast<double>(stats.placed) / static_cast<double>(stored);
  });

  std::vector<double> overflow;
  std::vector<double> inserted;
  std::vector<double> placed;
  for (std::size_t r = 0; r < config.repeats; ++r) {
    const RepeatOutcome& out = report.per_repeat[r];
    overflow.push_back(out.overflow_fraction);
    inserted.push_back(out.inserted_fraction);
    placed.push_back(static_cast<double>(out.placed));
    report.duplicates_rejected += duplicates[r];
    if (config.stash_limit && out.stashed > *config.stash_limit) ++report.stash_overflows;
  }
  const SimStats o = summarize(overflow);
  report.overflow_mean = o.mean;
  report.overflow_min = o.min;
  report.overflow_max = o.max;
  report.inserted_mean = summarize(inserted).mean;
  const SimStats p = summarize(placed);
  report.placed_mean = p.mean;
  report.placed_std_error = p.std_error;
  return report;
}

}  // namespace cuckoo_lab
