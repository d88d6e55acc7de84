#include <doctest.h>

#include <random>

#include "bondscope/environment.hpp"
#include "bondscope/network.hpp"
#include "oracles.hpp"

using namespace bondscope;

namespace {

BondNetwork path_network(std::size_t n) {
  std::vector<std::string> species(n, "C");
  std::vector<Bond> bonds;
  for (AtomId a = 0; a + 1 < n; ++a) bonds.push_back({a, a + 1});
  return BondNetwork(species, bonds);
}

BondNetwork from_edges(std::size_t n, const std::vector<oracle::Edge>& edges) {
  std::vector<std::string> species(n, "X");
  std::vector<Bond> bonds;
  for (auto [a, b] : edges) bonds.push_back({a, b});
  return BondNetwork(species, bonds);
}

}  // namespace

TEST_SUITE("network") {
  TEST_CASE("bonds are normalised, sorted and mirrored in the adjacency") {
    std::vector<std::string> species{"Si", "O", "O", "Si"};
    BondNetwork net(species, {{3, 2}, {1, 0}, {2, 0}});
    CHECK(net.atom_count() == 4);
    CHECK(net.bond_count() == 3);
    CHECK(net.bonds() == std::vector<Bond>{{0, 1}, {0, 2}, {2, 3}});
    CHECK(net.degree(0) == 2);
    CHECK(net.degree(2) == 2);
    CHECK(net.has_bond(3, 2));
    CHECK(net.has_bond(2, 3));
    CHECK_FALSE(net.has_bond(1, 3));
    auto nb = net.neighbors(2);
    CHECK(std::vector<AtomId>(nb.begin(), nb.end()) == std::vector<AtomId>{0, 3});
    CHECK(net.species_label(3) == "Si");
    CHECK(net.species(0) == net.species(3));
    CHECK(net.species(0) != net.species(1));
    CHECK(net.atoms_of_species("O") == std::vector<AtomId>{1, 2});
    CHECK(net.atoms_of_species("").size() == 4);
    CHECK(net.atoms_of_species("Ge").empty());
  }

  TEST_CASE("malformed bond lists are rejected") {
    std::vector<std::string> species{"A", "B"};
    CHECK_THROWS_AS(BondNetwork(species, {{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(BondNetwork(species, {{0, 1}, {1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(BondNetwork(species, {{0, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(BondNetwork(species, {}, std::vector<Vec3>{{0, 0, 0}}), std::invalid_argument);
  }

  TEST_CASE("empty network") {
    BondNetwork net;
    CHECK(net.atom_count() == 0);
    CHECK(net.bond_count() == 0);
    CHECK_FALSE(net.contains(0));
  }
}

TEST_SUITE("environment") {
  TEST_CASE("path environment holds exactly the atoms within the radius") {
    const auto net = path_network(10);
    const auto env = extract_environment(net, 5, 2);
    CHECK(env.root() == 5);
    CHECK(env.size() == 5);
    CHECK(env.bond_count() == 4);
    CHECK(env.shell_size(0) == 1);
    CHECK(env.shell_size(1) == 2);
    CHECK(env.shell_size(2) == 2);
    for (std::uint32_t u = 0; u < env.size(); ++u)
      CHECK(std::abs(static_cast<int>(env.atom(u)) - 5) == env.shell(u));
    // End atoms of the window keep their full-network degree.
    CHECK(env.full_degree(env.shell_begin(2)) == 2);
  }

  TEST_CASE("invalid radius or root") {
    const auto net = path_network(3);
    CHECK_THROWS_AS(extract_environment(net, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(extract_environment(net, 7, 1), std::invalid_argument);
    CHECK_THROWS_AS(bfs_distances(net, 3), std::invalid_argument);
  }

  TEST_CASE("isolated root has a one-atom environment") {
    std::vector<std::string> species{"A", "B"};
    BondNetwork net(species, {});
    const auto env = extract_environment(net, 0, 3);
    CHECK(env.size() == 1);
    CHECK(env.bond_count() == 0);
    CHECK(env.shell_size(1) == 0);
  }

  TEST_CASE("environments agree with BFS on random graphs") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 2 + rng() % 40;
      const auto edges = oracle::random_connected(n, rng() % n, rng);
      const auto net = from_edges(n, edges);
      const auto root = static_cast<AtomId>(rng() % n);
      const int radius = 1 + static_cast<int>(rng() % 6);
      const auto env = extract_environment(net, root, radius);
      const auto dist = oracle::distances(oracle::adjacency(n, edges), root);

      std::size_t inside = 0;
      for (int d : dist) inside += d >= 0 && d <= radius;
      REQUIRE(env.size() == inside);
      for (std::uint32_t u = 0; u < env.size(); ++u) {
        CHECK(env.shell(u) == dist[env.atom(u)]);
        if (u > 0) CHECK(env.shell(u) >= env.shell(u - 1));
        CHECK(env.full_degree(u) == static_cast<int>(net.degree(env.atom(u))));
      }
      std::size_t induced = 0;
      for (auto [a, b] : edges)
        induced += dist[a] <= radius && dist[b] <= radius && dist[a] >= 0 && dist[b] >= 0;
      CHECK(env.bond_count() == induced);
      CHECK(env.induced_bonds().size() == induced);
      const auto map = bfs_distances(net, root);
      CHECK(map.size() == static_cast<std::size_t>(std::count_if(dist.begin(), dist.end(),
                                                                 [](int d) { return d >= 0; })));
    }
  }

  TEST_CASE("h1 rank matches a spanning-forest count") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 1 + rng() % 30;
      // Several components: concatenate random connected pieces.
      Subgraph g;
      std::vector<oracle::Edge> all;
      std::size_t offset = 0;
      while (offset < n) {
        const std::size_t piece = std::min<std::size_t>(n - offset, 1 + rng() % 10);
        for (auto [a, b] : oracle::random_connected(piece, rng() % 6, rng))
          all.push_back({static_cast<std::uint32_t>(a + offset), static_cast<std::uint32_t>(b + offset)});
        offset += piece;
      }
      g.vertex_count = n;
      g.edges = all;
      CHECK(h1_rank(g) == oracle::cycle_rank(n, all));
    }
  }

  TEST_CASE("shell annulus bounds") {
    const auto env = make_environment({"A", "A", "A", "A"}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, 0, 2);
    CHECK_THROWS_AS(shell_annulus(env, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(shell_annulus(env, -1, 1), std::invalid_argument);
    CHECK_THROWS_AS(shell_annulus(env, 0, 3), std::invalid_argument);
    CHECK(shell_annulus(env, 0, 2).subgraph.edges.size() == 4);
    CHECK(shell_annulus(env, 1, 2).members.size() == 3);
    CHECK(h1_rank(shell_annulus(env, 1, 2).subgraph) == 0);
    CHECK(h1_rank(shell_annulus(env, 0, 2).subgraph) == 1);
  }

  TEST_CASE("make_environment rejects graphs wider than the radius") {
    CHECK_THROWS_AS(make_environment({"A", "A", "A"}, {{0, 1}, {1, 2}}, 0, 1), std::invalid_argument);
  }

  TEST_CASE("perfect coordination needs parity degrees and no intra-shell bonds") {
    // Si4O4 square: Si on even shells with 2 more bonds each would be needed
    // for valence 4, so use degrees 2/2.
    const auto ring = make_environment({"Si", "O", "Si", "O"}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, 0, 2);
    CHECK(perfect_coordination_check(ring, 2, 2));
    CHECK_FALSE(perfect_coordination_check(ring, 4, 2));
    // Triangle: shell-1 atoms bonded to each other.
    const auto tri = make_environment({"A", "A", "A"}, {{0, 1}, {1, 2}, {2, 0}}, 0, 1);
    CHECK_FALSE(perfect_coordination_check(tri, 2, 2));
  }
}
