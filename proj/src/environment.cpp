#include "bondscope/environment.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bondscope {

namespace {

struct DisjointSets {
  std::vector<std::uint32_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0u);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

std::size_t connected_components(const Subgraph& g) {
  DisjointSets sets(g.vertex_count);
  std::size_t components = g.vertex_count;
  for (auto [a, b] : g.edges)
    if (sets.unite(a, b)) --components;
  return components;
}

std::size_t h1_rank(const Subgraph& g) {
  return connected_components(g) + g.edges.size() - g.vertex_count;
}

std::map<AtomId, int> bfs_distances(const BondNetwork& network, AtomId root) {
  if (!network.contains(root))
    throw std::invalid_argument("unknown root atom " + std::to_string(root));
  std::vector<int> dist(network.atom_count(), -1);
  std::deque<AtomId> queue{root};
  dist[root] = 0;
  while (!queue.empty()) {
    AtomId u = queue.front();
    queue.pop_front();
    for (AtomId w : network.neighbors(u)) {
      if (dist[w] >= 0) continue;
      dist[w] = dist[u] + 1;
      queue.push_back(w);
    }
  }
  std::map<AtomId, int> out;
  for (AtomId a = 0; a < dist.size(); ++a)
    if (dist[a] >= 0) out.emplace(a, dist[a]);
  return out;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> LocalEnvironment::local_bonds() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  out.reserve(bond_count());
  for (std::uint32_t u = 0; u < size(); ++u)
    for (std::uint32_t w : neighbors(u))
      if (u < w) out.emplace_back(u, w);
  return out;
}

std::vector<Bond> LocalEnvironment::induced_bonds() const {
  std::vector<Bond> out;
  out.reserve(bond_count());
  for (auto [u, w] : local_bonds()) {
    AtomId a = atoms_[u], b = atoms_[w];
    out.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

Subgraph LocalEnvironment::as_subgraph() const { return {size(), local_bonds()}; }

EnvironmentExtractor::EnvironmentExtractor(const BondNetwork& network)
    : network_(network), stamp_(network.atom_count(), 0), local_(network.atom_count(), 0) {}

LocalEnvironment EnvironmentExtractor::extract(AtomId root, int radius) {
  if (radius < 1) throw std::invalid_argument("environment radius must be >= 1");
  if (!network_.contains(root))
    throw std::invalid_argument("unknown root atom " + std::to_string(root));
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }

  LocalEnvironment env;
  env.radius_ = radius;
  env.table_ = network_.species_table();
  env.atoms_.push_back(root);
  env.shell_.push_back(0);
  env.shell_begin_.push_back(0);
  stamp_[root] = epoch_;
  local_[root] = 0;

  // Level-synchronous BFS so members come out grouped by shell.
  std::size_t level_begin = 0;
  for (int k = 1; k <= radius; ++k) {
    const std::size_t level_end = env.atoms_.size();
    env.shell_begin_.push_back(static_cast<std::uint32_t>(level_end));
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (AtomId w : network_.neighbors(env.atoms_[i])) {
        if (stamp_[w] == epoch_) continue;
        stamp_[w] = epoch_;
        local_[w] = static_cast<std::uint32_t>(env.atoms_.size());
        env.atoms_.push_back(w);
        env.shell_.push_back(k);
      }
    }
    level_begin = level_end;
  }
  const auto n = env.atoms_.size();
  env.shell_begin_.push_back(static_cast<std::uint32_t>(n));

  env.species_.resize(n);
  env.full_degree_.resize(n);
  env.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const AtomId a = env.atoms_[i];
    env.species_[i] = network_.species(a);
    env.full_degree_[i] = static_cast<int>(network_.degree(a));
    for (AtomId w : network_.neighbors(a))
      if (stamp_[w] == epoch_) env.adjacency_.push_back(local_[w]);
    env.offsets_[i + 1] = static_cast<std::uint32_t>(env.adjacency_.size());
    std::sort(env.adjacency_.begin() + env.offsets_[i], env.adjacency_.end());
  }
  return env;
}

LocalEnvironment extract_environment(const BondNetwork& network, AtomId root, int radius) {
  EnvironmentExtractor extractor(network);
  return extractor.extract(root, radius);
}

LocalEnvironment make_environment(std::vector<std::string> species,
                                  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges,
                                  std::uint32_t root, int radius) {
  std::vector<Bond> bonds;
  bonds.reserve(edges.size());
  for (auto [a, b] : edges) bonds.push_back({a, b});
  BondNetwork network(species, std::move(bonds));
  auto env = extract_environment(network, root, radius);
  if (env.size() != network.atom_count())
    throw std::invalid_argument("graph has vertices farther than the radius from the root");
  return env;
}

ShellAnnulus shell_annulus(const LocalEnvironment& env, int lo, int hi) {
  if (lo < 0 || lo > hi || hi > env.radius())
    throw std::invalid_argument("shell annulus (" + std::to_string(lo) + "," +
                                std::to_string(hi) + ") outside 0.." +
                                std::to_string(env.radius()));
  ShellAnnulus out;
  out.lo = lo;
  out.hi = hi;
  const std::uint32_t first = env.shell_begin(lo);
  const std::uint32_t last = env.shell_begin(hi + 1);
  out.members.resize(last - first);
  std::iota(out.members.begin(), out.members.end(), first);
  out.subgraph.vertex_count = last - first;
  for (std::uint32_t u = first; u < last; ++u)
    for (std::uint32_t w : env.neighbors(u))
      if (u < w && w < last) out.subgraph.edges.emplace_back(u - first, w - first);
  return out;
}

bool perfect_coordination_check(const LocalEnvironment& env, int even_degree, int odd_degree) {
  for (std::uint32_t u = 0; u < env.size(); ++u) {
    const int expected = env.shell(u) % 2 == 0 ? even_degree : odd_degree;
    if (env.full_degree(u) != expected) return false;
    for (std::uint32_t w : env.neighbors(u))
      if (env.shell(w) == env.shell(u)) return false;
  }
  return true;
}

}  // namespace bondscope
