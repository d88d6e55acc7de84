#include "bondscope/profiles.hpp"

#include <algorithm>

namespace bondscope {

CoordinationProfile coordination_profile(const LocalEnvironment& env) {
  CoordinationProfile profile;
  profile.shells.resize(env.radius() + 1);
  for (int k = 0; k <= env.radius(); ++k) {
    auto& shell = profile.shells[k];
    shell.reserve(env.shell_size(k));
    for (auto u = env.shell_begin(k); u < env.shell_begin(k + 1); ++u)
      shell.push_back(env.full_degree(u));
    std::sort(shell.begin(), shell.end());
  }
  return profile;
}

ShellCount shell_count(const CoordinationProfile& profile) {
  ShellCount sc;
  sc.counts.reserve(profile.shells.size());
  for (const auto& shell : profile.shells) sc.counts.push_back(static_cast<int>(shell.size()));
  return sc;
}

ShellCount shell_count(const LocalEnvironment& env) {
  ShellCount sc;
  for (int k = 0; k <= env.radius(); ++k) sc.counts.push_back(static_cast<int>(env.shell_size(k)));
  return sc;
}

}  // namespace bondscope
