#include "bondscope/canonical.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "bondscope/errors.hpp"
#include "bondscope/rings.hpp"

namespace bondscope {

namespace {

using Colors = std::vector<std::uint32_t>;
using EdgeCode = std::vector<std::uint32_t>;

void put16(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

std::uint32_t get16(const std::string& in, std::size_t at) {
  return static_cast<unsigned char>(in[at]) | (static_cast<unsigned char>(in[at + 1]) << 8);
}

class Canonicalizer {
 public:
  Canonicalizer(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges)
      : n_(n), adjacency_(n) {
    for (auto [a, b] : edges) {
      adjacency_[a].push_back(b);
      adjacency_[b].push_back(a);
    }
  }

  /// Returns the position of every vertex in the canonical labelling.
  std::vector<std::uint32_t> run(Colors initial) {
    refine(initial);
    std::vector<std::uint32_t> prefix;
    search(initial, prefix);
    return best_perm_;
  }

 private:
  static std::size_t rerank(Colors& colors, const std::vector<std::uint32_t>& order,
                            const auto& same) {
    std::size_t cells = 0;
    Colors next(colors.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (k > 0 && !same(order[k - 1], order[k])) ++cells;
      next[order[k]] = static_cast<std::uint32_t>(cells);
    }
    colors.swap(next);
    return order.empty() ? 0 : cells + 1;
  }

  std::size_t cell_count(const Colors& colors) const {
    return colors.empty() ? 0 : *std::max_element(colors.begin(), colors.end()) + 1;
  }

  // Colour refinement to the coarsest equitable partition finer than `colors`.
  // New colours sort by (old colour, sorted neighbour colours), so the result
  // depends only on the coloured graph, never on vertex numbering.
  void refine(Colors& colors) const {
    std::size_t cells = cell_count(colors);
    std::vector<std::vector<std::uint32_t>> signature(n_);
    std::vector<std::uint32_t> order(n_);
    while (cells < n_) {
      for (std::size_t v = 0; v < n_; ++v) {
        auto& s = signature[v];
        s.clear();
        s.push_back(colors[v]);
        for (auto w : adjacency_[v]) s.push_back(colors[w]);
        std::sort(s.begin() + 1, s.end());
      }
      std::iota(order.begin(), order.end(), 0u);
      std::sort(order.begin(), order.end(),
                [&](std::uint32_t a, std::uint32_t b) { return signature[a] < signature[b]; });
      const std::size_t next = rerank(colors, order, [&](std::uint32_t a, std::uint32_t b) {
        return signature[a] == signature[b];
      });
      if (next == cells) break;
      cells = next;
    }
  }

  Colors individualize(const Colors& colors, std::uint32_t vertex) const {
    Colors out = colors;
    std::vector<std::uint32_t> order(n_);
    std::iota(order.begin(), order.end(), 0u);
    auto key = [&](std::uint32_t v) { return std::pair{colors[v], v == vertex ? 0 : 1}; };
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return key(a) < key(b); });
    rerank(out, order, [&](std::uint32_t a, std::uint32_t b) { return key(a) == key(b); });
    refine(out);
    return out;
  }

  EdgeCode encode(const Colors& position) const {
    EdgeCode code;
    for (std::uint32_t v = 0; v < n_; ++v)
      for (auto w : adjacency_[v])
        if (v < w) {
          auto a = position[v], b = position[w];
          if (a > b) std::swap(a, b);
          code.push_back((a << 16) | b);
        }
    std::sort(code.begin(), code.end());
    return code;
  }

  void record_automorphism(const Colors& reference, const Colors& leaf) {
    // reference^-1 o leaf maps each vertex to the vertex holding the same
    // canonical position under the reference labelling.
    std::vector<std::uint32_t> inverse(n_);
    for (std::uint32_t v = 0; v < n_; ++v) inverse[reference[v]] = v;
    std::vector<std::uint32_t> gamma(n_);
    bool identity = true;
    for (std::uint32_t v = 0; v < n_; ++v) {
      gamma[v] = inverse[leaf[v]];
      identity = identity && gamma[v] == v;
    }
    if (!identity) generators_.push_back(std::move(gamma));
  }

  void leaf(const Colors& position) {
    EdgeCode code = encode(position);
    if (!have_leaf_) {
      have_leaf_ = true;
      first_code_ = code;
      first_perm_ = position;
      best_code_ = std::move(code);
      best_perm_ = position;
      return;
    }
    if (code == first_code_) {
      record_automorphism(first_perm_, position);
    } else if (code == best_code_) {
      record_automorphism(best_perm_, position);
    } else if (code < best_code_) {
      best_code_ = std::move(code);
      best_perm_ = position;
    }
  }

  bool same_orbit(std::uint32_t a, std::uint32_t b, const std::vector<std::uint32_t>& prefix) {
    std::vector<std::uint32_t> parent(n_);
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& gamma : generators_) {
      bool fixes = std::all_of(prefix.begin(), prefix.end(),
                               [&](std::uint32_t p) { return gamma[p] == p; });
      if (!fixes) continue;
      for (std::uint32_t v = 0; v < n_; ++v) {
        auto x = find(v), y = find(gamma[v]);
        if (x != y) parent[std::max(x, y)] = std::min(x, y);
      }
    }
    return find(a) == find(b);
  }

  void search(const Colors& colors, std::vector<std::uint32_t>& prefix) {
    if (cell_count(colors) == n_) {
      leaf(colors);
      return;
    }
    // Target: the first (lowest-colour) cell with more than one vertex.
    std::vector<std::uint32_t> size(n_, 0);
    for (auto c : colors) ++size[c];
    std::uint32_t target = 0;
    while (size[target] < 2) ++target;
    std::vector<std::uint32_t> candidates;
    for (std::uint32_t v = 0; v < n_; ++v)
      if (colors[v] == target) candidates.push_back(v);

    std::vector<std::uint32_t> explored;
    for (auto v : candidates) {
      bool pruned = false;
      for (auto u : explored)
        if (same_orbit(u, v, prefix)) {
          pruned = true;
          break;
        }
      if (pruned) continue;
      prefix.push_back(v);
      search(individualize(colors, v), prefix);
      prefix.pop_back();
      explored.push_back(v);
    }
  }

  std::size_t n_;
  std::vector<std::vector<std::uint32_t>> adjacency_;
  std::vector<std::vector<std::uint32_t>> generators_;
  bool have_leaf_ = false;
  EdgeCode first_code_, best_code_;
  Colors first_perm_, best_perm_;
};

}  // namespace

CanonicalGraphKey canonical_form(const RootedGraph& graph, std::size_t cap) {
  const std::size_t n = graph.labels.size();
  if (n > cap)
    throw TooLargeError("graph with " + std::to_string(n) + " vertices exceeds the cap of " +
                        std::to_string(cap));
  if (n == 0 || graph.root >= n) throw std::invalid_argument("rooted graph has no valid root");
  if (n > 0xffff) throw TooLargeError("canonical keys support at most 65535 vertices");

  std::vector<std::vector<std::uint32_t>> adjacency(n);
  for (auto [a, b] : graph.edges) {
    if (a >= n || b >= n || a == b) throw std::invalid_argument("malformed rooted graph edge");
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }
  constexpr std::uint32_t kUnreachable = 0xffff;
  std::vector<std::uint32_t> dist(n, kUnreachable);
  std::deque<std::uint32_t> queue{graph.root};
  dist[graph.root] = 0;
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop_front();
    for (auto w : adjacency[u])
      if (dist[w] == kUnreachable) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
  }

  std::vector<std::string> names(graph.labels.begin(), graph.labels.end());
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  auto label_index = [&](std::uint32_t v) {
    return static_cast<std::uint32_t>(
        std::lower_bound(names.begin(), names.end(), graph.labels[v]) - names.begin());
  };
  using Seed = std::tuple<int, std::uint32_t, std::uint32_t>;
  auto seed = [&](std::uint32_t v) {
    return Seed{v == graph.root ? 0 : 1, dist[v], label_index(v)};
  };
  std::vector<Seed> seeds(n);
  for (std::uint32_t v = 0; v < n; ++v) seeds[v] = seed(v);
  std::vector<Seed> distinct = seeds;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  Colors initial(n);
  for (std::uint32_t v = 0; v < n; ++v)
    initial[v] = static_cast<std::uint32_t>(
        std::lower_bound(distinct.begin(), distinct.end(), seeds[v]) - distinct.begin());

  Canonicalizer canon(n, graph.edges);
  const auto position = canon.run(initial);

  std::vector<std::uint32_t> at(n);
  for (std::uint32_t v = 0; v < n; ++v) at[position[v]] = v;

  CanonicalGraphKey key;
  auto& out = key.bytes;
  put16(out, static_cast<std::uint32_t>(names.size()));
  for (const auto& name : names) {
    put16(out, static_cast<std::uint32_t>(name.size()));
    out += name;
  }
  put16(out, static_cast<std::uint32_t>(n));
  for (std::uint32_t p = 0; p < n; ++p) {
    put16(out, label_index(at[p]));
    put16(out, dist[at[p]]);
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(graph.edges.size());
  for (auto [a, b] : graph.edges) edges.emplace_back(std::minmax(position[a], position[b]));
  std::sort(edges.begin(), edges.end());
  put16(out, static_cast<std::uint32_t>(edges.size() & 0xffff));
  put16(out, static_cast<std::uint32_t>(edges.size() >> 16));
  for (auto [a, b] : edges) {
    put16(out, a);
    put16(out, b);
  }
  return key;
}

CanonicalGraphKey canonical_form(const LocalEnvironment& env, std::size_t cap) {
  if (env.size() > cap)
    throw TooLargeError("environment with " + std::to_string(env.size()) +
                        " atoms exceeds the cap of " + std::to_string(cap));
  RootedGraph graph;
  graph.labels.reserve(env.size());
  for (std::uint32_t u = 0; u < env.size(); ++u) graph.labels.push_back(env.species_label(u));
  graph.edges = env.local_bonds();
  graph.root = 0;
  return canonical_form(graph, cap);
}

RootedGraph primitive_cluster_graph(const LocalEnvironment& env) {
  const auto rings = primitive_rings(env, 2 * env.radius());
  std::set<std::uint32_t> vertices{0};
  std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (const auto& ring : rings) {
    for (std::size_t k = 0; k < ring.size(); ++k) {
      const auto a = ring[k], b = ring[(k + 1) % ring.size()];
      vertices.insert(a);
      edges.insert(std::minmax(a, b));
    }
  }
  std::map<std::uint32_t, std::uint32_t> index;
  RootedGraph graph;
  for (auto v : vertices) {
    index[v] = static_cast<std::uint32_t>(graph.labels.size());
    graph.labels.push_back(env.species_label(v));
  }
  for (auto [a, b] : edges) graph.edges.emplace_back(index[a], index[b]);
  graph.root = index[0];
  return graph;
}

CanonicalGraphKey primitive_cluster(const LocalEnvironment& env, std::size_t cap) {
  if (env.size() > cap)
    throw TooLargeError("environment with " + std::to_string(env.size()) +
                        " atoms exceeds the cap of " + std::to_string(cap));
  return canonical_form(primitive_cluster_graph(env), cap);
}

std::pair<std::size_t, std::size_t> canonical_key_size(const CanonicalGraphKey& key) {
  const auto& b = key.bytes;
  std::size_t at = 0;
  const auto names = get16(b, at);
  at += 2;
  for (std::uint32_t i = 0; i < names; ++i) at += 2 + get16(b, at);
  const auto n = get16(b, at);
  at += 2 + 4 * n;
  const std::size_t m = get16(b, at) | (static_cast<std::size_t>(get16(b, at + 2)) << 16);
  return {n, m};
}

}  // namespace bondscope
