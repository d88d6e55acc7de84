#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bondscope/descriptor.hpp"
#include "bondscope/network.hpp"
#include "bondscope/stats.hpp"

namespace bondscope {

/// One snapshot: labels and Cartesian positions (Å), with an optional cell.
struct AtomicConfiguration {
  std::vector<std::string> species;
  std::vector<Vec3> positions;
  std::optional<Cell> cell;
  std::array<bool, 3> periodic{false, false, false};

  std::size_t size() const { return species.size(); }
  bool any_periodic() const { return periodic[0] || periodic[1] || periodic[2]; }
  friend bool operator==(const AtomicConfiguration&, const AtomicConfiguration&) = default;
};

/// Per species-pair bonding cutoffs. Pairs without an entry never bond.
class BondRule {
 public:
  /// Si-O below `cutoff`, nothing else.
  static BondRule silica(double cutoff = 2.2);
  /// "Si-O:2.2,Si-Si:2.6". Throws std::invalid_argument on bad syntax.
  static BondRule parse(std::string_view text);

  /// Throws std::invalid_argument unless cutoff > 0 and finite.
  void set(const std::string& a, const std::string& b, double cutoff);
  std::optional<double> cutoff(const std::string& a, const std::string& b) const;
  double max_cutoff() const;
  bool empty() const { return cutoffs_.empty(); }
  /// Every cutoff moved by `delta`; throws std::invalid_argument if one drops to 0.
  BondRule shifted(double delta) const;
  const std::map<std::pair<std::string, std::string>, double>& entries() const { return cutoffs_; }

 private:
  std::map<std::pair<std::string, std::string>, double> cutoffs_;
};

/// Dump atom type -> species label.
using SpeciesMap = std::map<int, std::string>;
/// "1=Si,2=O". Throws std::invalid_argument on bad syntax.
SpeciesMap parse_species_map(std::string_view text);

/// Every frame of a plain or extended XYZ file. Extended comment lines may
/// carry Lattice="ax ay az bx by bz cx cy cz", pbc="T T T" and
/// Properties=species:S:1:pos:R:3. A lattice without pbc means fully periodic.
std::vector<AtomicConfiguration> parse_xyz_frames(std::string_view text);
AtomicConfiguration parse_xyz(std::string_view text);

/// Every frame of a LAMMPS text dump. Coordinates may be x/y/z, xu/yu/zu,
/// xs/ys/zs or xsu/ysu/zsu; atoms are ordered by id. An "element" column is
/// used when present, otherwise types go through `types` and an unmapped
/// type raises MappingError.
std::vector<AtomicConfiguration> parse_lammps_dump_frames(std::string_view text,
                                                          const SpeciesMap& types = {});
AtomicConfiguration parse_lammps_dump(std::string_view text, const SpeciesMap& types = {});

/// Extended XYZ when a cell is present, plain XYZ otherwise. Positions are
/// printed with round-trip precision.
std::string write_xyz(const AtomicConfiguration& cfg);

AtomicConfiguration configuration_of(const BondNetwork& network);

enum class InputFormat { kXyz, kLammpsDump, kNetworkJson };
/// ".json" is a network edge list, a leading "ITEM:" is a dump, anything else XYZ.
InputFormat detect_format(const std::filesystem::path& path, std::string_view head);

/// Cell-list bonding: a bond wherever the minimum-image distance is strictly
/// below the pair cutoff. Throws MinimumImageError when a cutoff reaches half
/// the perpendicular width of a periodic axis. Bonds within each bin are
/// found independently, so `threads` never changes the result.
BondNetwork build_bond_network(const AtomicConfiguration& cfg, const BondRule& rule,
                               unsigned threads = 1);
/// O(N^2) version of build_bond_network, kept as an oracle.
BondNetwork build_bond_network_brute_force(const AtomicConfiguration& cfg, const BondRule& rule);

/// Minimum-image distance between two points under the configuration's cell.
double minimum_image_distance(const AtomicConfiguration& cfg, const Vec3& p, const Vec3& q);

/// Fraction of selected roots whose radius-r key is the same with every cutoff
/// shifted by -delta, 0 and +delta.
double cutoff_stability(const AtomicConfiguration& cfg, const BondRule& rule, int radius,
                        double delta, DescriptorTag tag = DescriptorTag::kGraphIso,
                        const RootFilter& filter = {}, const ClassifyOptions& options = {});

struct LoadOptions {
  BondRule rule = BondRule::silica();
  SpeciesMap species_map;
  unsigned threads = 1;
};

/// One bond network per frame of a file, whatever its format.
std::vector<BondNetwork> load_networks(const std::filesystem::path& path,
                                       const LoadOptions& options = {});

/// {"species": [...], "bonds": [[a,b],...], "positions"?: [...], "cell"?: [...]}
std::string network_to_json(const BondNetwork& network);
BondNetwork network_from_json(std::string_view text);

}  // namespace bondscope
