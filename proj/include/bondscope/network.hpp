#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bondscope {

using AtomId = std::uint32_t;
using SpeciesId = std::uint16_t;

using Vec3 = std::array<double, 3>;
/// Rows are the cell vectors a, b, c (Å).
using Cell = std::array<Vec3, 3>;

struct Bond {
  AtomId a;
  AtomId b;
  friend bool operator==(const Bond&, const Bond&) = default;
  friend auto operator<=>(const Bond&, const Bond&) = default;
};

/// Interned species labels. Shared between a network and every environment cut
/// from it, so environments can render species without copying strings.
class SpeciesTable {
 public:
  SpeciesId intern(std::string_view label);
  std::optional<SpeciesId> find(std::string_view label) const;
  const std::string& label(SpeciesId id) const { return labels_.at(id); }
  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::string> labels_;
};

/// Species-labelled undirected graph. Atom ids are dense, 0..N-1. Immutable
/// after construction.
class BondNetwork {
 public:
  BondNetwork() = default;

  /// Builds from per-atom labels and an arbitrary bond list. Bonds are
  /// normalised to (min,max) and sorted. Throws std::invalid_argument on
  /// self-bonds, duplicate bonds, out-of-range endpoints, or a position count
  /// different from the atom count.
  BondNetwork(std::span<const std::string> species, std::vector<Bond> bonds,
              std::optional<std::vector<Vec3>> positions = std::nullopt,
              std::optional<Cell> cell = std::nullopt);

  std::size_t atom_count() const { return species_.size(); }
  std::size_t bond_count() const { return bonds_.size(); }

  SpeciesId species(AtomId a) const { return species_[a]; }
  const std::string& species_label(AtomId a) const { return table_->label(species_[a]); }
  const std::shared_ptr<const SpeciesTable>& species_table() const { return table_; }

  std::span<const AtomId> neighbors(AtomId a) const {
    return {adjacency_.data() + offsets_[a], adjacency_.data() + offsets_[a + 1]};
  }
  std::size_t degree(AtomId a) const { return offsets_[a + 1] - offsets_[a]; }
  bool has_bond(AtomId a, AtomId b) const;
  bool contains(AtomId a) const { return a < atom_count(); }

  /// Sorted, each bond once with a < b.
  const std::vector<Bond>& bonds() const { return bonds_; }

  const std::optional<std::vector<Vec3>>& positions() const { return positions_; }
  const std::optional<Cell>& cell() const { return cell_; }

  /// Atoms whose species label equals `label`; every atom when label is empty.
  std::vector<AtomId> atoms_of_species(std::string_view label) const;

 private:
  std::shared_ptr<const SpeciesTable> table_ = std::make_shared<SpeciesTable>();
  std::vector<SpeciesId> species_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<AtomId> adjacency_;
  std::vector<Bond> bonds_;
  std::optional<std::vector<Vec3>> positions_;
  std::optional<Cell> cell_;
};

}  // namespace bondscope
