#include "bondscope/barcode.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

#include "bondscope/errors.hpp"

namespace bondscope {

int Barcode::count_within(int i, int j) const {
  return static_cast<int>(std::count_if(intervals.begin(), intervals.end(),
                                        [&](const Interval& iv) { return iv.contained_in(i, j); }));
}

FMatrix f_matrix(const LocalEnvironment& env) {
  const int r = env.radius();
  FMatrix f(r);
  std::vector<std::uint32_t> parent(env.size());
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (int i = 0; i <= r; ++i) {
    std::iota(parent.begin(), parent.end(), 0u);
    long components = 0, atoms = 0, bonds = 0;
    for (int j = i; j <= r; ++j) {
      for (auto u = env.shell_begin(j); u < env.shell_begin(j + 1); ++u) {
        ++atoms;
        ++components;
        for (auto w : env.neighbors(u)) {
          const int sw = env.shell(w);
          if (sw < i || sw > j || (sw == j && w > u)) continue;
          ++bonds;
          auto a = find(u), b = find(w);
          if (a != b) {
            parent[a] = b;
            --components;
          }
        }
      }
      f(i, j) = static_cast<int>(components - atoms + bonds);
    }
  }
  return f;
}

MobiusTable::MobiusTable(int radius)
    : radius_(radius), slots_((radius + 1) * (radius + 1)), mu_(slots_ * slots_, 0) {
  std::vector<Interval> all;
  for (int lo = 0; lo <= radius; ++lo)
    for (int hi = lo; hi <= radius; ++hi) all.push_back({lo, hi});
  // Process larger intervals after everything they contain.
  std::stable_sort(all.begin(), all.end(), [](const Interval& x, const Interval& y) {
    return x.hi - x.lo < y.hi - y.lo;
  });
  auto leq = [](const Interval& x, const Interval& y) { return x.contained_in(y.lo, y.hi); };
  for (const auto& x : all) {
    mu_[index(x) * slots_ + index(x)] = 1;
    for (const auto& y : all) {
      if (y == x || !leq(x, y)) continue;
      int sum = 0;
      for (const auto& z : all)
        if (leq(x, z) && leq(z, y) && !(z == y)) sum += mu_[index(x) * slots_ + index(z)];
      mu_[index(x) * slots_ + index(y)] = -sum;
    }
  }
}

const MobiusTable& MobiusTable::for_radius(int radius) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<MobiusTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[radius];
  if (!slot) slot = std::make_unique<MobiusTable>(radius);
  return *slot;
}

int MobiusTable::mu(Interval below, Interval above) const {
  if (!below.contained_in(above.lo, above.hi)) return 0;
  return mu_[index(below) * slots_ + index(above)];
}

Barcode mobius_invert(const FMatrix& f) {
  const int r = f.radius();
  const auto& table = MobiusTable::for_radius(r);
  Barcode bc;
  for (int a = 0; a <= r; ++a) {
    for (int b = a; b <= r; ++b) {
      long g = 0;
      for (int c = a; c <= b; ++c)
        for (int d = c; d <= b; ++d)
          if (int m = table.mu({c, d}, {a, b}); m != 0) g += static_cast<long>(f(c, d)) * m;
      if (g < 0)
        throw InconsistentBarcodeError("negative multiplicity " + std::to_string(g) +
                                       " for interval (" + std::to_string(a) + "," +
                                       std::to_string(b) + ")");
      bc.intervals.insert(bc.intervals.end(), static_cast<std::size_t>(g), Interval{a, b});
    }
  }
  std::sort(bc.intervals.begin(), bc.intervals.end());
  return bc;
}

Barcode h1_barcode(const LocalEnvironment& env) { return mobius_invert(f_matrix(env)); }

std::vector<int> endpoints_from_shell_count(const ShellCount& sc, int even_degree,
                                            int odd_degree) {
  if (sc.counts.empty() || sc.counts[0] != 1)
    throw NotPerfectlyCoordinatedError("shell count must start with a single root");
  std::vector<int> f0(sc.counts.size(), 0);
  long atoms = 1, bonds = 0, previous_bonds = 0;
  for (std::size_t k = 1; k < sc.counts.size(); ++k) {
    const int d = (k - 1) % 2 == 0 ? even_degree : odd_degree;
    const long layer_bonds = static_cast<long>(d) * sc.counts[k - 1] - previous_bonds;
    if (layer_bonds < 0)
      throw NotPerfectlyCoordinatedError("negative bond count between shells " +
                                         std::to_string(k - 1) + " and " + std::to_string(k));
    bonds += layer_bonds;
    atoms += sc.counts[k];
    previous_bonds = layer_bonds;
    const long rank = 1 - atoms + bonds;
    if (rank < 0)
      throw NotPerfectlyCoordinatedError("negative ring count at radius " + std::to_string(k));
    f0[k] = static_cast<int>(rank);
  }
  return f0;
}

ShellCount shell_count_from_endpoints(const std::vector<int>& f0, int even_degree,
                                      int odd_degree) {
  if (f0.empty() || f0[0] != 0)
    throw NotPerfectlyCoordinatedError("F(0,0) of a single root must be 0");
  ShellCount sc;
  sc.counts.push_back(1);
  long atoms = 1, bonds = 0, previous_bonds = 0;
  for (std::size_t k = 1; k < f0.size(); ++k) {
    const int d = (k - 1) % 2 == 0 ? even_degree : odd_degree;
    const long layer_bonds = static_cast<long>(d) * sc.counts[k - 1] - previous_bonds;
    if (layer_bonds < 0)
      throw NotPerfectlyCoordinatedError("negative bond count between shells " +
                                         std::to_string(k - 1) + " and " + std::to_string(k));
    bonds += layer_bonds;
    previous_bonds = layer_bonds;
    const long total_atoms = 1 + bonds - f0[k];
    const long shell = total_atoms - atoms;
    if (shell < 0)
      throw NotPerfectlyCoordinatedError("negative shell size at radius " + std::to_string(k));
    sc.counts.push_back(static_cast<int>(shell));
    atoms = total_atoms;
  }
  return sc;
}

}  // namespace bondscope
