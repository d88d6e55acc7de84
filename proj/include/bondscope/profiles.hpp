#pragma once

#include <vector>

#include "bondscope/environment.hpp"

namespace bondscope {

/// Per-shell sorted multisets of full-network valences; shells[0] holds the
/// root's valence alone.
struct CoordinationProfile {
  std::vector<std::vector<int>> shells;
  friend bool operator==(const CoordinationProfile&, const CoordinationProfile&) = default;
};

/// Atoms per shell. counts[0] == 1.
struct ShellCount {
  std::vector<int> counts;
  friend bool operator==(const ShellCount&, const ShellCount&) = default;
};

CoordinationProfile coordination_profile(const LocalEnvironment& env);
ShellCount shell_count(const CoordinationProfile& profile);
ShellCount shell_count(const LocalEnvironment& env);

}  // namespace bondscope
