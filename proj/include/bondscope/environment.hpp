#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "bondscope/network.hpp"

namespace bondscope {

/// A plain undirected graph on vertices 0..vertex_count-1. Used for shell
/// annuli and anything else that only needs counting.
struct Subgraph {
  std::size_t vertex_count = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
};

std::size_t connected_components(const Subgraph& g);

/// Rank of the first homology group (cycle-space dimension):
/// #components - #atoms + #bonds.
std::size_t h1_rank(const Subgraph& g);

/// Graph distance from `root` to every reachable atom. Throws
/// std::invalid_argument for an unknown root.
std::map<AtomId, int> bfs_distances(const BondNetwork& network, AtomId root);

/// All atoms within graph distance `radius` of a root, with every parent bond
/// between them. Members are stored in BFS order, so local index 0 is the
/// root and members are grouped by shell.
class LocalEnvironment {
 public:
  AtomId root() const { return atoms_.front(); }
  int radius() const { return radius_; }
  std::size_t size() const { return atoms_.size(); }
  std::size_t bond_count() const { return adjacency_.size() / 2; }

  AtomId atom(std::uint32_t local) const { return atoms_[local]; }
  int shell(std::uint32_t local) const { return shell_[local]; }
  SpeciesId species(std::uint32_t local) const { return species_[local]; }
  const std::string& species_label(std::uint32_t local) const {
    return table_->label(species_[local]);
  }
  /// Degree in the parent network, not in the induced subgraph.
  int full_degree(std::uint32_t local) const { return full_degree_[local]; }

  std::span<const std::uint32_t> neighbors(std::uint32_t local) const {
    return {adjacency_.data() + offsets_[local], adjacency_.data() + offsets_[local + 1]};
  }

  /// Local indices [shell_begin(k), shell_begin(k+1)) form shell k.
  std::uint32_t shell_begin(int k) const { return shell_begin_[k]; }
  std::uint32_t shell_size(int k) const { return shell_begin_[k + 1] - shell_begin_[k]; }

  /// Induced bonds as (local, local) pairs with first < second, sorted.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> local_bonds() const;
  /// Induced bonds in parent atom ids, normalised and sorted.
  std::vector<Bond> induced_bonds() const;
  Subgraph as_subgraph() const;

  const std::shared_ptr<const SpeciesTable>& species_table() const { return table_; }

 private:
  friend class EnvironmentExtractor;

  int radius_ = 0;
  std::vector<AtomId> atoms_;
  std::vector<int> shell_;
  std::vector<std::uint32_t> shell_begin_;
  std::vector<SpeciesId> species_;
  std::vector<int> full_degree_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> adjacency_;
  std::shared_ptr<const SpeciesTable> table_;
};

/// Reusable extraction workspace. One per thread; holds O(N) scratch so that
/// repeated extractions cost O(environment size).
class EnvironmentExtractor {
 public:
  explicit EnvironmentExtractor(const BondNetwork& network);
  /// Throws std::invalid_argument for radius < 1 or an unknown root.
  LocalEnvironment extract(AtomId root, int radius);

 private:
  const BondNetwork& network_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint32_t> local_;
  std::uint32_t epoch_ = 0;
};

LocalEnvironment extract_environment(const BondNetwork& network, AtomId root, int radius);

/// Builds a standalone environment from a whole graph: every vertex must be
/// reachable from `root` within `radius`. Full-network degrees are taken to be
/// the graph degrees. Intended for fixtures and small tests.
LocalEnvironment make_environment(std::vector<std::string> species,
                                  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges,
                                  std::uint32_t root, int radius);

struct ShellAnnulus {
  int lo = 0;
  int hi = 0;
  /// Environment-local indices of the annulus atoms, ascending.
  std::vector<std::uint32_t> members;
  /// Vertex k of the subgraph is members[k].
  Subgraph subgraph;
};

/// Induced subgraph on shells lo..hi. Throws std::invalid_argument unless
/// 0 <= lo <= hi <= radius.
ShellAnnulus shell_annulus(const LocalEnvironment& env, int lo, int hi);

/// Perfect coordination: the environment is bipartite by
/// shell parity (no intra-shell bonds) and every member's full-network degree
/// is even_degree on even shells and odd_degree on odd shells.
bool perfect_coordination_check(const LocalEnvironment& env, int even_degree = 4,
                                int odd_degree = 2);

}  // namespace bondscope
