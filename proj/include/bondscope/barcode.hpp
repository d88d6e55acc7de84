#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "bondscope/environment.hpp"
#include "bondscope/profiles.hpp"

namespace bondscope {

/// Shell interval (lo, hi) with 0 <= lo <= hi <= r. In a bipartite network
/// every interval has lo < hi; a ring lying inside one shell (possible only
/// with intra-shell bonds) gives lo == hi.
struct Interval {
  int lo = 0;
  int hi = 0;
  bool contained_in(int i, int j) const { return i <= lo && hi <= j; }
  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// Multiset of intervals, kept sorted.
struct Barcode {
  std::vector<Interval> intervals;
  /// #{I in BC : I within (i, j)}.
  int count_within(int i, int j) const;
  friend bool operator==(const Barcode&, const Barcode&) = default;
};

/// F(i,j) = rank H1 of the shell annulus S(i,j), for 0 <= i <= j <= r.
class FMatrix {
 public:
  explicit FMatrix(int radius) : radius_(radius), values_((radius + 1) * (radius + 1), 0) {}
  int radius() const { return radius_; }
  int operator()(int i, int j) const { return values_[i * (radius_ + 1) + j]; }
  int& operator()(int i, int j) { return values_[i * (radius_ + 1) + j]; }
  friend bool operator==(const FMatrix&, const FMatrix&) = default;

 private:
  int radius_;
  std::vector<int> values_;
};

/// One union-find sweep per lower shell, adding outer shells incrementally.
FMatrix f_matrix(const LocalEnvironment& env);

/// Möbius function of the interval poset of (0, r) under inclusion, built from
/// its defining recursion. Tables are memoised per radius and shared.
class MobiusTable {
 public:
  static const MobiusTable& for_radius(int radius);

  int radius() const { return radius_; }
  /// mu[(a,b), (c,d)] for (a,b) within (c,d); zero otherwise.
  int mu(Interval below, Interval above) const;

  explicit MobiusTable(int radius);

 private:
  int index(Interval iv) const { return iv.lo * (radius_ + 1) + iv.hi; }
  int radius_;
  int slots_;
  std::vector<int> mu_;
};

/// Recovers interval multiplicities G from F by Möbius inversion:
/// G(a,b) = sum over (c,d) within (a,b) of F(c,d) * mu[(c,d),(a,b)].
/// Throws InconsistentBarcodeError on a negative multiplicity.
Barcode mobius_invert(const FMatrix& f);

Barcode h1_barcode(const LocalEnvironment& env);

/// F(0,k) for k = 0..r of a perfectly coordinated environment, computed from
/// its shell count with the bipartite bond recursion
///   bonds(k, k-1) = d * atoms(k-1) - bonds(k-1, k-2)
/// and rank = 1 - atoms + bonds. Throws NotPerfectlyCoordinatedError when an
/// intermediate bond count or rank goes negative.
std::vector<int> endpoints_from_shell_count(const ShellCount& sc, int even_degree = 4,
                                            int odd_degree = 2);

/// Inverse of endpoints_from_shell_count.
ShellCount shell_count_from_endpoints(const std::vector<int>& f0, int even_degree = 4,
                                      int odd_degree = 2);

}  // namespace bondscope
