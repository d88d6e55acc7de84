#pragma once

#include <cstdint>
#include <vector>

#include "bondscope/environment.hpp"

namespace bondscope {

/// Ring lengths in total-atom convention (a Si6O6 ring has length 12).
struct PrimitiveRingProfile {
  /// Sorted ascending; one entry per ring.
  std::vector<int> lengths;
  friend bool operator==(const PrimitiveRingProfile&, const PrimitiveRingProfile&) = default;
};

/// A primitive ring through the root, as environment-local indices in cyclic
/// order starting at the root (index 0).
using Ring = std::vector<std::uint32_t>;

/// Every primitive ring containing the root with at most `max_len` atoms. A
/// ring is primitive when each pair of its atoms is joined by a shortest path
/// lying on the ring. For rings through the root, primitivity inside the
/// environment and in the whole network coincide as long as
/// max_len <= 2 * radius, which is why larger max_len is rejected.
///
/// Along such a ring the distance to the root rises by one per step up to the
/// far side and falls back, so each ring is a pair of internally disjoint
/// shortest paths meeting at a far atom (even length) or a far bond (odd
/// length). Candidates are enumerated that way and then checked pairwise with
/// bounded BFS.
std::vector<Ring> primitive_rings(const LocalEnvironment& env, int max_len);

PrimitiveRingProfile primitive_rings_through(const LocalEnvironment& env, int max_len);
inline PrimitiveRingProfile primitive_rings_through(const LocalEnvironment& env) {
  return primitive_rings_through(env, 2 * env.radius());
}

}  // namespace bondscope
