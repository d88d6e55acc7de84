#include "bondscope/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace bondscope {

SpeciesId SpeciesTable::intern(std::string_view label) {
  if (auto id = find(label)) return *id;
  labels_.emplace_back(label);
  return static_cast<SpeciesId>(labels_.size() - 1);
}

std::optional<SpeciesId> SpeciesTable::find(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return static_cast<SpeciesId>(i);
  return std::nullopt;
}

BondNetwork::BondNetwork(std::span<const std::string> species, std::vector<Bond> bonds,
                         std::optional<std::vector<Vec3>> positions, std::optional<Cell> cell)
    : positions_(std::move(positions)), cell_(cell) {
  auto table = std::make_shared<SpeciesTable>();
  species_.reserve(species.size());
  for (const auto& s : species) species_.push_back(table->intern(s));
  table_ = std::move(table);

  const auto n = species.size();
  if (positions_ && positions_->size() != n)
    throw std::invalid_argument("position count " + std::to_string(positions_->size()) +
                                " does not match atom count " + std::to_string(n));

  for (auto& b : bonds) {
    if (b.a >= n || b.b >= n)
      throw std::invalid_argument("bond (" + std::to_string(b.a) + "," + std::to_string(b.b) +
                                  ") references a missing atom");
    if (b.a == b.b) throw std::invalid_argument("self-bond on atom " + std::to_string(b.a));
    if (b.a > b.b) std::swap(b.a, b.b);
  }
  std::sort(bonds.begin(), bonds.end());
  if (auto dup = std::adjacent_find(bonds.begin(), bonds.end()); dup != bonds.end())
    throw std::invalid_argument("duplicate bond (" + std::to_string(dup->a) + "," +
                                std::to_string(dup->b) + ")");
  bonds_ = std::move(bonds);

  offsets_.assign(n + 1, 0);
  for (const auto& b : bonds_) {
    ++offsets_[b.a + 1];
    ++offsets_[b.b + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  adjacency_.resize(offsets_[n]);
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& b : bonds_) {
    adjacency_[fill[b.a]++] = b.b;
    adjacency_[fill[b.b]++] = b.a;
  }
  // Bonds are sorted by (a,b), so each list is already ascending for the
  // larger-id side but not for the smaller-id side.
  for (std::size_t i = 0; i < n; ++i)
    std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1]);
}

bool BondNetwork::has_bond(AtomId a, AtomId b) const {
  if (!contains(a) || !contains(b)) return false;
  auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<AtomId> BondNetwork::atoms_of_species(std::string_view label) const {
  std::vector<AtomId> out;
  if (label.empty()) {
    out.resize(atom_count());
    for (AtomId i = 0; i < out.size(); ++i) out[i] = i;
    return out;
  }
  auto id = table_->find(label);
  if (!id) return out;
  for (AtomId i = 0; i < atom_count(); ++i)
    if (species_[i] == *id) out.push_back(i);
  return out;
}

}  // namespace bondscope
