#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bondscope/barcode.hpp"
#include "bondscope/stats.hpp"

namespace bondscope {

std::string base64_encode(std::string_view bytes);
/// Throws std::invalid_argument on malformed input.
std::string base64_decode(std::string_view text);

/// Distribution file:
///   {"descriptor": tag, "radius": r, "source": label, "total": n,
///    "classes": [{"key": base64 payload, "label": rendering, "count": c}, ...]}
/// Classes are written in payload-byte order, so equal distributions give
/// byte-identical files.
std::string distribution_to_json(const EmpiricalDistribution& dist);
/// Throws std::invalid_argument when the document is malformed or its total
/// disagrees with the class counts.
EmpiricalDistribution distribution_from_json(std::string_view text);

/// CSV with header key,f1,f2,r1,r2; the key column holds the rendering.
std::string report_to_csv(const ComparisonReport& report);
/// CSV with header rank,key,f1,se1,f2,se2,...
std::string curve_to_csv(DescriptorTag tag, const std::vector<CurvePoint>& curve);

/// Barcode drawn as horizontal bars over shells 0..radius.
std::string barcode_to_svg(const Barcode& bc, int radius, std::string_view title = {});
/// Log-scale rank-frequency plot, one polyline per distribution with dashed
/// standard-error bands.
std::string curve_to_svg(const std::vector<CurvePoint>& curve,
                         const std::vector<std::string>& series_names);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it over `path`, so a failed
/// write never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace bondscope
