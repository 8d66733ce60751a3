#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace cuckoo_lab {

// Left vertices are elements, right vertices are bins. choices[v] lists the
// bins element v hashed to; repeated bins are parallel edges.
struct BipartiteGraph {
  std::uint32_t m = 0;
  std::vector<std::vector<std::uint32_t>> choices;
  // Bins [0, k) form the up bank and [k, m) the down bank.
  std::optional<std::uint32_t> partition_boundary;

  std::uint32_t n() const { return static_cast<std::uint32_t>(choices.size()); }
};

// Throws std::invalid_argument if a choice is out of range.
void validate(const BipartiteGraph& graph);

struct Matching {
  std::uint32_t size = 0;
  std::vector<std::optional<std::uint32_t>> matched;  // per left vertex
};

// Maximum-cardinality matching (Hopcroft-Karp over the deduplicated edges,
// neighbours scanned in ascending bin order). Deterministic.
Matching max_matching(const BipartiteGraph& graph);

struct ComponentSummary {
  std::uint32_t s = 0;  // left vertices
  std::uint32_t q = 0;  // right vertices
  std::uint64_t edge_count = 0;  // with multiplicity
  bool is_tree = false;
  std::uint32_t local_matching = 0;
  bool is_deficit = false;  // q == (d-1) s + 1
  std::uint32_t min_left_degree = 0;  // 0 when s == 0
  std::uint32_t max_left_degree = 0;
};

// Connected components, ordered by their lowest vertex (left vertices
// first, then bins). Isolated bins are components with s = 0, q = 1. The
// deficit flag uses d = max(2, largest left degree in the graph).
std::vector<ComponentSummary> components(const BipartiteGraph& graph);

// Maximum matching size of a graph whose left degrees are all <= 2, computed
// as m minus the number of deficit components (q = s + 1). Throws
// std::invalid_argument on a left vertex of degree > 2.
std::uint32_t mu_via_deficit(const BipartiteGraph& graph);

enum class StructureViolation {
  kTooManyBins,          // q exceeds (d-1) s + 1: such a component cannot be connected
  kSaturatedMatching,    // d = 2, q <= s, yet the matching does not cover every bin
  kDeficitMatching,      // q = (d-1) s + 1, yet some element is unmatched
  kDeficitNotTree,       // q = (d-1) s + 1, yet the component has a cycle
  kDeficitDegree,        // d = 2, q = s + 1, yet an element has a single choice
  kMatchingTooLarge,     // local matching exceeds min(s, q)
};

std::string_view to_string(StructureViolation violation);

// Checks the structural relations that every component of a graph with left
// degrees <= d must satisfy. Returns the first violation found.
std::optional<StructureViolation> assert_structure(const ComponentSummary& summary, unsigned d);

}  // namespace cuckoo_lab
