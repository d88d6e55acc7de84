#include "bondscope/crystals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

#include "bondscope/ingest.hpp"

namespace bondscope {

namespace {

// Si-Si distance of the ideal decorated nets (A).
constexpr double kSiSi = 3.1;

void require_size(int n) {
  if (n < 3) throw std::invalid_argument("crystal supercell size must be at least 3");
}

Vec3 to_cart(const Cell& m, const Vec3& f) {
  Vec3 r{};
  for (int j = 0; j < 3; ++j) r[j] = f[0] * m[0][j] + f[1] * m[1][j] + f[2] * m[2][j];
  return r;
}

Cell scaled(const Cell& m, int n) {
  Cell out = m;
  for (auto& row : out)
    for (auto& x : row) x *= n;
  return out;
}

/// Replicates fractional basis sites over an n^3 supercell in (cell, basis) order.
std::vector<Vec3> replicate(const Cell& unit, const std::vector<Vec3>& basis, int n) {
  std::vector<Vec3> out;
  out.reserve(basis.size() * n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (const auto& b : basis) out.push_back(to_cart(unit, {b[0] + i, b[1] + j, b[2] + k}));
  return out;
}

/// Si net from `si` positions with one O on the midpoint of every Si-Si
/// contact shorter than 1.2 * kSiSi.
BondNetwork decorate(const std::vector<Vec3>& si, const Cell& cell) {
  AtomicConfiguration net;
  net.species.assign(si.size(), "Si");
  net.positions = si;
  net.cell = cell;
  net.periodic = {true, true, true};
  BondRule contact;
  contact.set("Si", "Si", 1.2 * kSiSi);
  const auto skeleton = build_bond_network(net, contact);

  AtomicConfiguration cfg = net;
  // Fractional helpers for the midpoint image.
  const double vol = [&] {
    const auto& [a, b, c] = cell;
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
           a[2] * (b[0] * c[1] - b[1] * c[0]);
  }();
  auto frac = [&](const Vec3& p) {
    const auto& [a, b, c] = cell;
    auto det = [](const Vec3& x, const Vec3& y, const Vec3& z) {
      return x[0] * (y[1] * z[2] - y[2] * z[1]) - x[1] * (y[0] * z[2] - y[2] * z[0]) +
             x[2] * (y[0] * z[1] - y[1] * z[0]);
    };
    return Vec3{det(p, b, c) / vol, det(a, p, c) / vol, det(a, b, p) / vol};
  };

  std::vector<Bond> bonds;
  for (const auto& e : skeleton.bonds()) {
    const Vec3 fa = frac(si[e.a]);
    Vec3 d = frac(si[e.b]);
    for (int k = 0; k < 3; ++k) {
      d[k] -= fa[k];
      d[k] -= std::round(d[k]);
    }
    Vec3 mid{};
    for (int k = 0; k < 3; ++k) {
      mid[k] = fa[k] + 0.5 * d[k];
      mid[k] -= std::floor(mid[k]);
    }
    const auto o = static_cast<AtomId>(cfg.species.size());
    cfg.species.push_back("O");
    cfg.positions.push_back(to_cart(cell, mid));
    bonds.push_back({e.a, o});
    bonds.push_back({e.b, o});
  }
  return BondNetwork(cfg.species, std::move(bonds), cfg.positions, cfg.cell);
}

}  // namespace

std::string_view to_string(CrystalForm form) {
  switch (form) {
    case CrystalForm::kQuartz: return "quartz";
    case CrystalForm::kCristobalite: return "cristobalite";
    case CrystalForm::kTridymite: return "tridymite";
  }
  return {};
}

std::optional<CrystalForm> parse_crystal_form(std::string_view name) {
  for (auto f : {CrystalForm::kQuartz, CrystalForm::kCristobalite, CrystalForm::kTridymite})
    if (to_string(f) == name) return f;
  return std::nullopt;
}

BondNetwork generate_cristobalite(int n) {
  require_size(n);
  const double a = kSiSi * 4.0 / std::sqrt(3.0);
  const Cell unit{{{a, 0, 0}, {0, a, 0}, {0, 0, a}}};
  std::vector<Vec3> basis;
  for (const Vec3& f : {Vec3{0, 0, 0}, Vec3{0, 0.5, 0.5}, Vec3{0.5, 0, 0.5}, Vec3{0.5, 0.5, 0}}) {
    basis.push_back(f);
    basis.push_back({f[0] + 0.25, f[1] + 0.25, f[2] + 0.25});
  }
  return decorate(replicate(unit, basis, n), scaled(unit, n));
}

BondNetwork generate_tridymite(int n) {
  require_size(n);
  // Ideal lonsdaleite: c/a = sqrt(8/3), bond along c = 3c/8.
  const double c = 8.0 * kSiSi / 3.0;
  const double a = c / std::sqrt(8.0 / 3.0);
  const Cell unit{{{a, 0, 0}, {-0.5 * a, 0.5 * std::sqrt(3.0) * a, 0}, {0, 0, c}}};
  const std::vector<Vec3> basis{{1.0 / 3, 2.0 / 3, 1.0 / 16},
                                {1.0 / 3, 2.0 / 3, 7.0 / 16},
                                {2.0 / 3, 1.0 / 3, 9.0 / 16},
                                {2.0 / 3, 1.0 / 3, 15.0 / 16}};
  return decorate(replicate(unit, basis, n), scaled(unit, n));
}

BondNetwork generate_quartz(int n) {
  require_size(n);
  // Alpha-quartz, P3_2 21.
  const double a = 4.9134, c = 5.4052;
  const Cell unit{{{a, 0, 0}, {-0.5 * a, 0.5 * std::sqrt(3.0) * a, 0}, {0, 0, c}}};
  auto orbit = [](const Vec3& p) {
    const double x = p[0], y = p[1], z = p[2];
    const std::array<Vec3, 6> images{{{x, y, z},
                                      {-y, x - y, z + 2.0 / 3},
                                      {-x + y, -x, z + 1.0 / 3},
                                      {y, x, -z},
                                      {x - y, -y, -z + 1.0 / 3},
                                      {-x, -x + y, -z + 2.0 / 3}}};
    std::vector<Vec3> out;
    for (auto q : images) {
      for (auto& v : q) v -= std::floor(v + 1e-9);
      const bool seen = std::any_of(out.begin(), out.end(), [&](const Vec3& r) {
        return std::abs(r[0] - q[0]) < 1e-6 && std::abs(r[1] - q[1]) < 1e-6 &&
               std::abs(r[2] - q[2]) < 1e-6;
      });
      if (!seen) out.push_back(q);
    }
    return out;
  };
  auto si = orbit({0.4697, 0.0, 2.0 / 3});
  auto o = orbit({0.4135, 0.2669, 0.7857});

  AtomicConfiguration cfg;
  std::vector<Vec3> basis = si;
  basis.insert(basis.end(), o.begin(), o.end());
  cfg.positions = replicate(unit, basis, n);
  for (std::size_t i = 0; i < cfg.positions.size(); ++i)
    cfg.species.push_back(i % basis.size() < si.size() ? "Si" : "O");
  cfg.cell = scaled(unit, n);
  cfg.periodic = {true, true, true};
  return build_bond_network(cfg, BondRule::silica());
}

BondNetwork generate_crystal(CrystalForm form, int n) {
  switch (form) {
    case CrystalForm::kQuartz: return generate_quartz(n);
    case CrystalForm::kCristobalite: return generate_cristobalite(n);
    case CrystalForm::kTridymite: return generate_tridymite(n);
  }
  throw std::invalid_argument("unknown crystal form");
}

std::vector<BondNetwork> bond_switch_series(const BondNetwork& network,
                                            std::span<const std::size_t> checkpoints,
                                            std::uint64_t seed, std::string_view bridge) {
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
    throw std::invalid_argument("bond-switch checkpoints must be non-decreasing");

  std::vector<AtomId> bridges;
  std::vector<std::array<AtomId, 2>> ends(network.atom_count());
  std::set<std::pair<AtomId, AtomId>> bridged;
  std::vector<Bond> fixed;
  std::vector<bool> is_bridge(network.atom_count(), false);
  for (AtomId x = 0; x < network.atom_count(); ++x)
    if (network.species_label(x) == bridge && network.degree(x) == 2) {
      const auto nb = network.neighbors(x);
      ends[x] = {nb[0], nb[1]};
      is_bridge[x] = true;
      bridges.push_back(x);
      bridged.insert(std::minmax(nb[0], nb[1]));
    }
  for (const auto& b : network.bonds())
    if (!is_bridge[b.a] && !is_bridge[b.b]) fixed.push_back(b);
  if (bridges.size() < 2 && !checkpoints.empty() && checkpoints.back() > 0)
    throw std::runtime_error("fewer than two bridging atoms to switch");

  std::vector<std::string> labels;
  for (AtomId x = 0; x < network.atom_count(); ++x) labels.push_back(network.species_label(x));
  auto snapshot = [&] {
    std::vector<Bond> bonds = fixed;
    for (AtomId o : bridges) {
      bonds.push_back({ends[o][0], o});
      bonds.push_back({ends[o][1], o});
    }
    return BondNetwork(labels, std::move(bonds));
  };

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, bridges.empty() ? 0 : bridges.size() - 1);
  std::vector<BondNetwork> out;
  std::size_t done = 0;
  for (std::size_t target : checkpoints) {
    std::size_t misses = 0;
    while (done < target) {
      const AtomId o1 = bridges[pick(rng)], o2 = bridges[pick(rng)];
      const bool flip = rng() & 1;
      const AtomId a = ends[o1][0], b = ends[o1][1];
      const AtomId c = ends[o2][flip ? 1 : 0], d = ends[o2][flip ? 0 : 1];
      const std::pair<AtomId, AtomId> p1 = std::minmax(a, d), p2 = std::minmax(c, b);
      if (o1 == o2 || a == d || c == b || p1 == p2 || bridged.count(p1) || bridged.count(p2)) {
        if (++misses > 100000) throw std::runtime_error("no valid bond switch found");
        continue;
      }
      bridged.erase(std::minmax(a, b));
      bridged.erase(std::minmax(c, d));
      bridged.insert(p1);
      bridged.insert(p2);
      ends[o1] = {a, d};
      ends[o2] = {c, b};
      ++done;
      misses = 0;
    }
    out.push_back(snapshot());
  }
  return out;
}

BondNetwork bond_switch(const BondNetwork& network, std::size_t switches, std::uint64_t seed,
                        std::string_view bridge) {
  const std::array<std::size_t, 1> one{switches};
  return std::move(bond_switch_series(network, one, seed, bridge).front());
}

}  // namespace bondscope
