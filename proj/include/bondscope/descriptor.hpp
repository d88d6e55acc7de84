#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "bondscope/barcode.hpp"
#include "bondscope/canonical.hpp"
#include "bondscope/environment.hpp"
#include "bondscope/profiles.hpp"
#include "bondscope/rings.hpp"

namespace bondscope {

enum class DescriptorTag {
  kCoordination,
  kShellCount,
  kPrimitiveRings,
  kH1Barcode,
  kGraphIso,
  kPrimitiveCluster,
};

inline constexpr std::array kAllDescriptorTags{
    DescriptorTag::kCoordination, DescriptorTag::kShellCount, DescriptorTag::kPrimitiveRings,
    DescriptorTag::kH1Barcode,    DescriptorTag::kGraphIso,   DescriptorTag::kPrimitiveCluster,
};

/// "coordination", "shell-count", "primitive-rings", "h1-barcode", "graph-iso",
/// "primitive-cluster".
std::string_view to_string(DescriptorTag tag);
std::optional<DescriptorTag> parse_descriptor_tag(std::string_view name);

struct DescribeOptions {
  /// Append species labels to coordination-profile entries, for chemistries
  /// where valence alone does not identify the atom.
  bool coordination_species = false;
  std::size_t canonical_cap = kDefaultCanonicalCap;
};

/// One descriptor value, serialised so that byte equality is value equality.
/// Payloads are text for the profile descriptors and binary canonical bytes
/// for the graph descriptors.
struct DescriptorKey {
  DescriptorTag tag{};
  int radius = 0;
  std::string payload;
  friend bool operator==(const DescriptorKey&, const DescriptorKey&) = default;
};

std::string encode_payload(const CoordinationProfile& profile);
std::string encode_payload(const ShellCount& sc);
std::string encode_payload(const PrimitiveRingProfile& rings);
std::string encode_payload(const Barcode& bc);

DescriptorKey describe(const LocalEnvironment& env, DescriptorTag tag,
                       const DescribeOptions& options = {});

/// Human-readable rendering of a payload, in the usual table notation:
/// "2×(0,5),(0,6),3×(2,6)", "2 10-rings, 3 12-rings", "(1,4,4,12,12,33)".
std::string render_payload(DescriptorTag tag, std::string_view payload);

}  // namespace bondscope
