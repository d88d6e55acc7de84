#include "bondscope/rings.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace bondscope {

namespace {

class RingSearch {
 public:
  RingSearch(const LocalEnvironment& env, int max_len)
      : env_(env), max_len_(max_len), path_count_(env.size(), 0), position_(env.size(), -1),
        dist_(env.size(), -1) {}

  std::vector<Ring> run() {
    count_shortest_paths();
    const int max_half = max_len_ / 2;
    std::vector<std::vector<std::uint32_t>> paths_a, paths_b;

    for (int m = 1; m <= std::min(max_half, env_.radius()); ++m) {
      // Even rings, length 2m: two shortest paths meeting at a far atom.
      if (m >= 2) {
        for (auto v = env_.shell_begin(m); v < env_.shell_begin(m + 1); ++v) {
          if (path_count_[v] < 2) continue;
          paths_a.clear();
          collect_paths(v, paths_a);
          for (std::size_t i = 0; i < paths_a.size(); ++i)
            for (std::size_t j = i + 1; j < paths_a.size(); ++j)
              if (disjoint(paths_a[i], paths_a[j], m - 1))
                consider(join(paths_a[i], paths_a[j], /*shared_far=*/true));
        }
      }
      // Odd rings, length 2m+1: paths to the two ends of an intra-shell bond.
      if (2 * m + 1 <= max_len_) {
        for (auto u = env_.shell_begin(m); u < env_.shell_begin(m + 1); ++u) {
          for (auto w : env_.neighbors(u)) {
            if (w <= u || env_.shell(w) != m) continue;
            paths_a.clear();
            paths_b.clear();
            collect_paths(u, paths_a);
            collect_paths(w, paths_b);
            for (const auto& p : paths_a)
              for (const auto& q : paths_b)
                if (disjoint(p, q, m)) consider(join(p, q, /*shared_far=*/false));
          }
        }
      }
    }
    return std::move(rings_);
  }

 private:
  void count_shortest_paths() {
    path_count_[0] = 1;
    for (std::uint32_t v = 1; v < env_.size(); ++v) {
      std::uint64_t total = 0;
      for (auto p : env_.neighbors(v))
        if (env_.shell(p) + 1 == env_.shell(v)) total += path_count_[p];
      path_count_[v] = total;
    }
  }

  // All shortest root paths ending at v, each stored root-first.
  void collect_paths(std::uint32_t v, std::vector<std::vector<std::uint32_t>>& out) {
    const int m = env_.shell(v);
    std::vector<std::uint32_t> path(m + 1);
    path[m] = v;
    extend_down(m, path, out);
  }

  void extend_down(int level, std::vector<std::uint32_t>& path,
                   std::vector<std::vector<std::uint32_t>>& out) {
    if (level == 0) {
      out.push_back(path);
      return;
    }
    for (auto p : env_.neighbors(path[level])) {
      if (env_.shell(p) + 1 != level) continue;
      path[level - 1] = p;
      extend_down(level - 1, path, out);
    }
  }

  // Paths hold one atom per shell, so checking same-level entries suffices.
  static bool disjoint(const std::vector<std::uint32_t>& p, const std::vector<std::uint32_t>& q,
                       int up_to) {
    for (int k = 1; k <= up_to; ++k)
      if (p[k] == q[k]) return false;
    return true;
  }

  static Ring join(const std::vector<std::uint32_t>& p, const std::vector<std::uint32_t>& q,
                   bool shared_far) {
    Ring ring(p.begin(), p.end());
    const std::size_t m = q.size() - 1;
    for (std::size_t k = shared_far ? m - 1 : m; k >= 1; --k) ring.push_back(q[k]);
    return ring;
  }

  void consider(Ring ring) {
    if (is_primitive(ring)) rings_.push_back(std::move(ring));
  }

  bool is_primitive(const Ring& ring) {
    const int len = static_cast<int>(ring.size());
    for (int i = 0; i < len; ++i) position_[ring[i]] = i;
    bool ok = true;
    // A shortcut between ring atoms is shorter than their ring distance,
    // which is at most len/2, so BFS depth len/2 - 1 finds every shortcut.
    const int depth = len / 2 - 1;
    std::vector<std::uint32_t> frontier, next, touched;
    for (int i = 1; i < len && ok; ++i) {
      frontier.assign(1, ring[i]);
      dist_[ring[i]] = 0;
      touched.assign(1, ring[i]);
      for (int d = 1; d <= depth && ok && !frontier.empty(); ++d) {
        next.clear();
        for (auto u : frontier) {
          for (auto w : env_.neighbors(u)) {
            if (dist_[w] >= 0) continue;
            dist_[w] = d;
            touched.push_back(w);
            next.push_back(w);
            if (int j = position_[w]; j >= 0) {
              const int along = std::abs(j - i);
              if (d < std::min(along, len - along)) {
                ok = false;
                break;
              }
            }
          }
          if (!ok) break;
        }
        frontier.swap(next);
      }
      for (auto t : touched) dist_[t] = -1;
    }
    for (auto v : ring) position_[v] = -1;
    return ok;
  }

  const LocalEnvironment& env_;
  int max_len_;
  std::vector<std::uint64_t> path_count_;
  std::vector<int> position_;
  std::vector<int> dist_;
  std::vector<Ring> rings_;
};

}  // namespace

std::vector<Ring> primitive_rings(const LocalEnvironment& env, int max_len) {
  if (max_len > 2 * env.radius())
    throw std::invalid_argument("ring length bound " + std::to_string(max_len) +
                                " exceeds twice the environment radius " +
                                std::to_string(env.radius()));
  if (max_len < 3) return {};
  return RingSearch(env, max_len).run();
}

PrimitiveRingProfile primitive_rings_through(const LocalEnvironment& env, int max_len) {
  PrimitiveRingProfile profile;
  for (const auto& ring : primitive_rings(env, max_len))
    profile.lengths.push_back(static_cast<int>(ring.size()));
  std::sort(profile.lengths.begin(), profile.lengths.end());
  return profile;
}

}  // namespace bondscope
