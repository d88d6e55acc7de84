#include "bondscope/descriptor.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <stdexcept>
#include <vector>

namespace bondscope {

namespace {

constexpr std::array<std::string_view, 6> kTagNames{
    "coordination", "shell-count", "primitive-rings", "h1-barcode", "graph-iso",
    "primitive-cluster",
};

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto end = text.find(sep, start);
    out.push_back(text.substr(start, end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

int to_int(std::string_view s) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::invalid_argument("malformed descriptor payload field '" + std::string(s) + "'");
  return v;
}

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

// "value×count" runs over an already-sorted sequence of tokens.
std::string runs(const std::vector<std::string>& sorted_tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < sorted_tokens.size();) {
    std::size_t j = i;
    while (j < sorted_tokens.size() && sorted_tokens[j] == sorted_tokens[i]) ++j;
    if (!out.empty()) out += sep;
    if (j - i > 1) out += std::to_string(j - i) + "×";
    out += sorted_tokens[i];
    i = j;
  }
  return out;
}

std::string coordination_payload(const LocalEnvironment& env, bool with_species) {
  if (!with_species) return encode_payload(coordination_profile(env));
  std::string out;
  for (int k = 0; k <= env.radius(); ++k) {
    if (k) out += '|';
    std::vector<std::pair<std::string, int>> entries;
    for (auto u = env.shell_begin(k); u < env.shell_begin(k + 1); ++u)
      entries.emplace_back(env.species_label(u), env.full_degree(u));
    std::sort(entries.begin(), entries.end());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (i) out += ',';
      out += entries[i].first + ':' + std::to_string(entries[i].second);
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(DescriptorTag tag) { return kTagNames[static_cast<int>(tag)]; }

std::optional<DescriptorTag> parse_descriptor_tag(std::string_view name) {
  for (std::size_t i = 0; i < kTagNames.size(); ++i)
    if (kTagNames[i] == name) return static_cast<DescriptorTag>(i);
  return std::nullopt;
}

std::string encode_payload(const CoordinationProfile& profile) {
  std::string out;
  for (std::size_t k = 0; k < profile.shells.size(); ++k) {
    if (k) out += '|';
    out += join_ints(profile.shells[k]);
  }
  return out;
}

std::string encode_payload(const ShellCount& sc) { return join_ints(sc.counts); }

std::string encode_payload(const PrimitiveRingProfile& rings) { return join_ints(rings.lengths); }

std::string encode_payload(const Barcode& bc) {
  std::string out;
  for (std::size_t i = 0; i < bc.intervals.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(bc.intervals[i].lo) + '-' + std::to_string(bc.intervals[i].hi);
  }
  return out;
}

DescriptorKey describe(const LocalEnvironment& env, DescriptorTag tag,
                       const DescribeOptions& options) {
  DescriptorKey key{tag, env.radius(), {}};
  switch (tag) {
    case DescriptorTag::kCoordination:
      key.payload = coordination_payload(env, options.coordination_species);
      break;
    case DescriptorTag::kShellCount:
      key.payload = encode_payload(shell_count(env));
      break;
    case DescriptorTag::kPrimitiveRings:
      key.payload = encode_payload(primitive_rings_through(env));
      break;
    case DescriptorTag::kH1Barcode:
      key.payload = encode_payload(h1_barcode(env));
      break;
    case DescriptorTag::kGraphIso:
      key.payload = canonical_form(env, options.canonical_cap).bytes;
      break;
    case DescriptorTag::kPrimitiveCluster:
      key.payload = primitive_cluster(env, options.canonical_cap).bytes;
      break;
  }
  return key;
}

std::string render_payload(DescriptorTag tag, std::string_view payload) {
  switch (tag) {
    case DescriptorTag::kCoordination: {
      std::string out;
      for (auto shell : split(payload, '|')) {
        std::vector<std::string> tokens;
        if (!shell.empty())
          for (auto t : split(shell, ',')) tokens.emplace_back(t);
        out += '{' + runs(tokens, ",") + '}';
      }
      return out;
    }
    case DescriptorTag::kShellCount:
      return '(' + std::string(payload) + ')';
    case DescriptorTag::kPrimitiveRings: {
      if (payload.empty()) return "no rings";
      std::map<int, int> counts;
      for (auto t : split(payload, ',')) ++counts[to_int(t)];
      std::string out;
      for (auto [len, count] : counts) {
        if (!out.empty()) out += ", ";
        out += std::to_string(count) + ' ' + std::to_string(len) + (count == 1 ? "-ring" : "-rings");
      }
      return out;
    }
    case DescriptorTag::kH1Barcode: {
      if (payload.empty()) return "empty";
      std::vector<std::string> tokens;
      for (auto t : split(payload, ',')) {
        auto dash = t.find('-');
        tokens.push_back('(' + std::string(t.substr(0, dash)) + ',' +
                         std::string(t.substr(dash + 1)) + ')');
      }
      return runs(tokens, ",");
    }
    case DescriptorTag::kGraphIso:
    case DescriptorTag::kPrimitiveCluster: {
      auto [n, m] = canonical_key_size(CanonicalGraphKey{std::string(payload)});
      return "graph(" + std::to_string(n) + " atoms, " + std::to_string(m) + " bonds)";
    }
  }
  return {};
}

}  // namespace bondscope
