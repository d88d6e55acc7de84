#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bondscope/environment.hpp"

namespace bondscope {

/// Species-labelled graph with a distinguished root.
struct RootedGraph {
  std::vector<std::string> labels;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::uint32_t root = 0;
};

/// Byte string that is equal for two rooted graphs exactly when some
/// bijection maps root to root, preserves labels, and preserves adjacency.
struct CanonicalGraphKey {
  std::string bytes;
  friend bool operator==(const CanonicalGraphKey&, const CanonicalGraphKey&) = default;
  friend auto operator<=>(const CanonicalGraphKey&, const CanonicalGraphKey&) = default;
};

inline constexpr std::size_t kDefaultCanonicalCap = 512;

/// Canonical labelling by individualisation-refinement.
///
/// Vertices start coloured by (is-root, distance to root, label) and colour
/// refinement splits cells by neighbour-colour multisets until stable. While
/// the partition is not discrete, every vertex of the first non-singleton cell
/// is individualised in turn and the search recurses. Each leaf is a
/// labelling; the key is built from the lexicographically smallest sorted edge
/// list over all leaves. Leaves with equal edge lists give automorphisms, and
/// a branch is skipped when its vertex lies in the orbit of an explored
/// sibling under the automorphisms found so far that fix the current prefix.
///
/// Throws TooLargeError when the graph has more than `cap` vertices.
CanonicalGraphKey canonical_form(const RootedGraph& graph, std::size_t cap = kDefaultCanonicalCap);
CanonicalGraphKey canonical_form(const LocalEnvironment& env,
                                 std::size_t cap = kDefaultCanonicalCap);

/// Union of the primitive rings through the root (lengths up to 2r), rooted at
/// the root. A root on no ring gives the single-vertex graph.
RootedGraph primitive_cluster_graph(const LocalEnvironment& env);
CanonicalGraphKey primitive_cluster(const LocalEnvironment& env,
                                    std::size_t cap = kDefaultCanonicalCap);

/// Vertex and edge counts recorded in a key.
std::pair<std::size_t, std::size_t> canonical_key_size(const CanonicalGraphKey& key);

}  // namespace bondscope
