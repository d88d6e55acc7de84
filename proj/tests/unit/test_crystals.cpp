#include <doctest.h>

#include <set>

#include "bondscope/crystals.hpp"
#include "bondscope/stats.hpp"

using namespace bondscope;

namespace {

std::set<std::string> keys_over_si(const BondNetwork& net, DescriptorTag tag, int r) {
  std::set<std::string> out;
  const auto dist = classify_all(net, tag, r, species_filter("Si"));
  for (const auto& [k, c] : dist.counts()) out.insert(k);
  return out;
}

std::string only_key(const BondNetwork& net, DescriptorTag tag, int r) {
  const auto keys = keys_over_si(net, tag, r);
  REQUIRE(keys.size() == 1);
  return *keys.begin();
}

void check_perfect(const BondNetwork& net) {
  for (AtomId a = 0; a < net.atom_count(); ++a) {
    if (net.species_label(a) == "Si") {
      CHECK(net.degree(a) == 4);
      for (auto b : net.neighbors(a)) CHECK(net.species_label(b) == "O");
    } else {
      CHECK(net.species_label(a) == "O");
      CHECK(net.degree(a) == 2);
    }
  }
}

}  // namespace

TEST_SUITE("crystals") {
  TEST_CASE("form names") {
    for (auto f : {CrystalForm::kQuartz, CrystalForm::kCristobalite, CrystalForm::kTridymite})
      CHECK(parse_crystal_form(to_string(f)) == f);
    CHECK_FALSE(parse_crystal_form("coesite").has_value());
  }

  TEST_CASE("atom counts and perfect coordination") {
    const auto q = generate_quartz(3), c = generate_cristobalite(3), t = generate_tridymite(3);
    CHECK(q.atom_count() == 27 * 9);
    CHECK(c.atom_count() == 27 * 24);
    CHECK(t.atom_count() == 27 * 12);
    for (const auto* net : {&q, &c, &t}) {
      check_perfect(*net);
      CHECK(net->positions().has_value());
      CHECK(net->cell().has_value());
    }
    CHECK(q.species_label(0) == "Si");
    CHECK_THROWS_AS(generate_cristobalite(2), std::invalid_argument);
    CHECK_THROWS_AS(generate_quartz(0), std::invalid_argument);
    CHECK_THROWS_AS(generate_tridymite(-1), std::invalid_argument);
  }

  TEST_CASE("table rows at radius 6") {
    const auto q = generate_quartz(4), t = generate_tridymite(4), c = generate_cristobalite(4);
    using T = DescriptorTag;
    CHECK(render_payload(T::kShellCount, only_key(q, T::kShellCount, 6)) == "(1,4,4,12,12,36,30)");
    CHECK(render_payload(T::kH1Barcode, only_key(q, T::kH1Barcode, 6)) == "3×(0,6),3×(2,6)");
    CHECK(render_payload(T::kPrimitiveRings, only_key(q, T::kPrimitiveRings, 6)) == "6 12-rings");
    CHECK(render_payload(T::kShellCount, only_key(t, T::kShellCount, 6)) == "(1,4,4,12,12,36,25)");
    CHECK(render_payload(T::kH1Barcode, only_key(t, T::kH1Barcode, 6)) == "3×(0,6),7×(2,6),(4,6)");
    CHECK(render_payload(T::kPrimitiveRings, only_key(t, T::kPrimitiveRings, 6)) == "12 12-rings");
    CHECK(render_payload(T::kShellCount, only_key(c, T::kShellCount, 6)) == "(1,4,4,12,12,36,24)");
    CHECK(render_payload(T::kPrimitiveRings, only_key(c, T::kPrimitiveRings, 6)) == "12 12-rings");
    // The Euler-characteristic rank of the radius-6 cristobalite environment:
    // 93 atoms, 104 bonds, one component.
    const auto env = extract_environment(c, 0, 6);
    CHECK(env.size() == 93);
    CHECK(env.bond_count() == 104);
    CHECK(h1_barcode(env).intervals.size() == 12);
    CHECK(render_payload(T::kH1Barcode, only_key(c, T::kH1Barcode, 6)) == "3×(0,6),5×(2,6),4×(4,6)");
  }

  TEST_CASE("crystals agree below radius 6") {
    const auto q = generate_quartz(4), t = generate_tridymite(4), c = generate_cristobalite(4);
    for (int r = 1; r <= 5; ++r)
      for (auto tag : {DescriptorTag::kCoordination, DescriptorTag::kShellCount,
                       DescriptorTag::kPrimitiveRings, DescriptorTag::kH1Barcode}) {
        INFO("r = " << r << " " << to_string(tag));
        const auto k = only_key(c, tag, r);
        CHECK(only_key(t, tag, r) == k);
        CHECK(only_key(q, tag, r) == k);
      }
  }

  TEST_CASE("bond switching preserves valence and is deterministic") {
    const auto base = generate_cristobalite(3);
    const auto a = bond_switch(base, 100, 42);
    const auto b = bond_switch(base, 100, 42);
    CHECK(a.bonds() == b.bonds());
    CHECK(a.bonds() != base.bonds());
    CHECK(bond_switch(base, 100, 43).bonds() != a.bonds());
    CHECK_FALSE(a.positions().has_value());
    check_perfect(a);
    CHECK(a.bond_count() == base.bond_count());
    CHECK(bond_switch(base, 0, 1).bonds() == base.bonds());

    const std::size_t checkpoints[] = {10, 50, 100};
    const auto series = bond_switch_series(base, checkpoints, 42);
    REQUIRE(series.size() == 3);
    CHECK(series[2].bonds() == a.bonds());
    const std::size_t bad[] = {50, 10};
    CHECK_THROWS_AS(bond_switch_series(base, bad, 1), std::invalid_argument);
    CHECK_THROWS(bond_switch(base, 10, 1, "N"));
  }
}
