#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bondscope/network.hpp"

namespace bondscope {

enum class CrystalForm { kQuartz, kCristobalite, kTridymite };

std::string_view to_string(CrystalForm form);
std::optional<CrystalForm> parse_crystal_form(std::string_view name);

// The generators build an n x n x n periodic supercell and throw
// std::invalid_argument for n < 3. Si ids come first in (cell, basis) order for
// cristobalite and tridymite, followed by one O per Si-Si edge in sorted
// edge order. Quartz keeps the crystallographic (cell, Si sites, O sites)
// order. All networks carry positions and the supercell.

/// Diamond Si net (conventional cubic cell, 8 Si) with O on every Si-Si edge.
BondNetwork generate_cristobalite(int n);
/// Lonsdaleite Si net (hexagonal cell, 4 Si) with O on every Si-Si edge.
BondNetwork generate_tridymite(int n);
/// Alpha-quartz from tabulated fractional coordinates, bonded with the 2.2 A
/// Si-O rule.
BondNetwork generate_quartz(int n);
BondNetwork generate_crystal(CrystalForm form, int n);

/// Random valence-preserving rewiring. Each switch takes two bridging atoms
/// o1 between (a,b) and o2 between (c,d) and reconnects them as (a,d) and
/// (c,b); moves that would self-bond or double-bridge a pair are redrawn.
/// Bridging atoms are the degree-2 atoms labelled `bridge`. Positions are
/// dropped. Throws std::runtime_error if no valid move can be found.
BondNetwork bond_switch(const BondNetwork& network, std::size_t switches, std::uint64_t seed,
                        std::string_view bridge = "O");

/// Snapshots of one cumulative bond-switch run after each count in
/// `checkpoints` (which must be non-decreasing).
std::vector<BondNetwork> bond_switch_series(const BondNetwork& network,
                                            std::span<const std::size_t> checkpoints,
                                            std::uint64_t seed, std::string_view bridge = "O");

}  // namespace bondscope
