#include "cuckoo_lab/matching.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cuckoo_lab {
namespace {

constexpr std::uint32_t kNil = std::numeric_limits<std::uint32_t>::max();
constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t size) : parent_(size) {
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Keep the lower index as root so component order follows vertex order.
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

class HopcroftKarp {
 public:
  explicit HopcroftKarp(const BipartiteGraph& graph)
      : adj_(graph.n()),
        match_left_(graph.n(), kNil),
        match_right_(graph.m, kNil),
        dist_(graph.n()),
        next_(graph.n()) {
    for (std::uint32_t v = 0; v < graph.n(); ++v) {
      adj_[v] = graph.choices[v];
      std::sort(adj_[v].begin(), adj_[v].end());
      adj_[v].erase(std::unique(adj_[v].begin(), adj_[v].end()), adj_[v].end());
    }
  }

  Matching run() {
    std::uint32_t size = 0;
    while (layer()) {
      std::fill(next_.begin(), next_.end(), 0);
      for (std::uint32_t v = 0; v < adj_.size(); ++v) {
        if (match_left_[v] == kNil && augment(v)) ++size;
      }
    }
    Matching result;
    result.size = size;
    result.matched.resize(adj_.size());
    for (std::uint32_t v = 0; v < adj_.size(); ++v) {
      if (match_left_[v] != kNil) result.matched[v] = match_left_[v];
    }
    return result;
  }

 private:
  bool layer() {
    std::vector<std::uint32_t> queue;
    queue.reserve(adj_.size());
    for (std::uint32_t v = 0; v < adj_.size(); ++v) {
      if (match_left_[v] == kNil) {
        dist_[v] = 0;
        queue.push_back(v);
      } else {
        dist_[v] = kInf;
      }
    }
    bool found = false;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::uint32_t u = queue[head];
      for (std::uint32_t r : adj_[u]) {
        const std::uint32_t w = match_right_[r];
        if (w == kNil) {
          found = true;
        } else if (dist_[w] == kInf) {
          dist_[w] = dist_[u] + 1;
          queue.push_back(w);
        }
      }
    }
    return found;
  }

  // Iterative layered DFS from a free left vertex.
  bool augment(std::uint32_t root) {
    stack_.clear();
    stack_.push_back(root);
    while (!stack_.empty()) {
      const std::uint32_t u = stack_.back();
      if (next_[u] == adj_[u].size()) {
        dist_[u] = kInf;
        stack_.pop_back();
        continue;
      }
      const std::uint32_t r = adj_[u][next_[u]];
      const std::uint32_t w = match_right_[r];
      if (w == kNil) {
        for (std::uint32_t x : stack_) {
          const std::uint32_t rx = adj_[x][next_[x]];
          match_left_[x] = rx;
          match_right_[rx] = x;
        }
        return true;
      }
      if (dist_[w] != kInf && dist_[w] == dist_[u] + 1) {
        stack_.push_back(w);
      } else {
        ++next_[u];
      }
    }
    return false;
  }

  std::vector<std::vector<std::uint32_t>> adj_;
  std::vector<std::uint32_t> match_left_;
  std::vector<std::uint32_t> match_right_;
  std::vector<std::uint32_t> dist_;
  std::vector<std::uint32_t> next_;
  std::vector<std::uint32_t> stack_;
};

}  // namespace

void validate(const BipartiteGraph& graph) {
  for (const auto& list : graph.choices) {
    for (std::uint32_t r : list) {
      if (r >= graph.m) throw std::invalid_argument("choice index out of range");
    }
  }
  if (graph.partition_boundary && *graph.partition_boundary > graph.m) {
    throw std::invalid_argument("partition boundary beyond m");
  }
}

Matching max_matching(const BipartiteGraph& graph) {
  validate(graph);
  return HopcroftKarp(graph).run();
}

std::vector<ComponentSummary> components(const BipartiteGraph& graph) {
  validate(graph);
  const std::uint32_t n = graph.n();
  const std::uint32_t total = n + graph.m;
  DisjointSets sets(total);
  std::uint32_t d = 2;
  for (std::uint32_t v = 0; v < n; ++v) {
    d = std::max<std::uint32_t>(d, static_cast<std::uint32_t>(graph.choices[v].size()));
    for (std::uint32_t r : graph.choices[v]) sets.unite(v, n + r);
  }
  const Matching matching = max_matching(graph);

  std::vector<std::uint32_t> slot(total, kNil);
  std::vector<ComponentSummary> out;
  for (std::uint32_t x = 0; x < total; ++x) {
    const std::uint32_t root = sets.find(x);
    if (slot[root] == kNil) {
      slot[root] = static_cast<std::uint32_t>(out.size());
      out.emplace_back();
      out.back().min_left_degree = kNil;
    }
    ComponentSummary& c = out[slot[root]];
    if (x < n) {
      const auto degree = static_cast<std::uint32_t>(graph.choices[x].size());
      ++c.s;
      c.edge_count += degree;
      c.min_left_degree = std::min(c.min_left_degree, degree);
      c.max_left_degree = std::max(c.max_left_degree, degree);
      if (matching.matched[x]) ++c.local_matching;
    } else {
      ++c.q;
    }
  }
  for (ComponentSummary& c : out) {
    if (c.s == 0) c.min_left_degree = 0;
    c.is_tree = c.edge_count + 1 == static_cast<std::uint64_t>(c.s) + c.q;
    c.is_deficit = static_cast<std::uint64_t>(c.q) == static_cast<std::uint64_t>(d - 1) * c.s + 1;
  }
  return out;
}

std::uint32_t mu_via_deficit(const BipartiteGraph& graph) {
  for (const auto& list : graph.choices) {
    if (list.size() > 2) throw std::invalid_argument("mu_via_deficit needs left degrees <= 2");
  }
  std::uint32_t deficits = 0;
  for (const ComponentSummary& c : components(graph)) {
    if (c.q == c.s + 1) ++deficits;
  }
  return graph.m - deficits;
}

std::string_view to_string(StructureViolation violation) {
  switch (violation) {
    case StructureViolation::kTooManyBins:
      return "too-many-bins";
    case StructureViolation::kSaturatedMatching:
      return "saturated-matching";
    case StructureViolation::kDeficitMatching:
      return "deficit-matching";
    case StructureViolation::kDeficitNotTree:
      return "deficit-not-tree";
    case StructureViolation::kDeficitDegree:
      return "deficit-degree";
    case StructureViolation::kMatchingTooLarge:
      return "matching-too-large";
  }
  return "unknown";
}

std::optional<StructureViolation> assert_structure(const ComponentSummary& c, unsigned d) {
  if (d < 2) d = 2;
  const std::uint64_t s = c.s;
  const std::uint64_t q = c.q;
  const std::uint64_t limit = static_cast<std::uint64_t>(d - 1) * s + 1;
  if (q > limit) return StructureViolation::kTooManyBins;
  if (c.local_matching > std::min(s, q)) return StructureViolation::kMatchingTooLarge;
  if (q == limit) {
    if (!c.is_tree) return StructureViolation::kDeficitNotTree;
    if (c.local_matching != s) return StructureViolation::kDeficitMatching;
    if (d == 2 && s > 0 && c.min_left_degree != 2) return StructureViolation::kDeficitDegree;
  }
  if (d == 2 && q <= s && c.local_matching != q) return StructureViolation::kSaturatedMatching;
  return std::nullopt;
}

}  // namespace cuckoo_lab
