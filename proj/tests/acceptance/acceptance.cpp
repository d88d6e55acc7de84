// Acceptance run: one PASS or FAIL line per primary criterion. Exit status is
// the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bondscope/barcode.hpp"
#include "bondscope/canonical.hpp"
#include "bondscope/crystals.hpp"
#include "bondscope/descriptor.hpp"
#include "bondscope/environment.hpp"
#include "bondscope/io.hpp"
#include "bondscope/stats.hpp"
#include "oracles.hpp"

using namespace bondscope;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Records the first few failures so the FAIL line says what went wrong.
struct Failures {
  std::size_t count = 0;
  std::ostringstream first;
  void add(const std::string& what) {
    if (count++ < 3) first << (count > 1 ? "; " : "") << what;
  }
  bool ok() const { return count == 0; }
  std::string str() const { return std::to_string(count) + " failures: " + first.str(); }
};

EmpiricalDistribution over_si(const BondNetwork& net, DescriptorTag tag, int r, unsigned threads = 1) {
  ClassifyOptions options;
  options.threads = threads;
  return classify_all(net, tag, r, species_filter("Si"), options);
}

std::string single_rendering(const BondNetwork& net, DescriptorTag tag, int r) {
  const auto d = over_si(net, tag, r);
  if (d.class_count() != 1) return std::to_string(d.class_count()) + " classes";
  return render_payload(tag, d.counts().begin()->first);
}

std::vector<oracle::Edge> pairs_of(std::uint32_t n) {
  std::vector<oracle::Edge> out;
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = a + 1; b < n; ++b) out.push_back({a, b});
  return out;
}

// ---------------------------------------------------------------------------

Outcome crystal_table() {
  Failures f;
  const auto q = generate_quartz(4), t = generate_tridymite(4);
  struct Row {
    const BondNetwork* net;
    const char* name;
    DescriptorTag tag;
    const char* expected;
  };
  const Row rows[] = {
      {&q, "quartz", DescriptorTag::kH1Barcode, "3×(0,6),3×(2,6)"},
      {&q, "quartz", DescriptorTag::kPrimitiveRings, "6 12-rings"},
      {&q, "quartz", DescriptorTag::kShellCount, "(1,4,4,12,12,36,30)"},
      {&t, "tridymite", DescriptorTag::kH1Barcode, "3×(0,6),7×(2,6),(4,6)"},
      {&t, "tridymite", DescriptorTag::kPrimitiveRings, "12 12-rings"},
      {&t, "tridymite", DescriptorTag::kShellCount, "(1,4,4,12,12,36,25)"},
  };
  for (const auto& row : rows) {
    const auto got = single_rendering(*row.net, row.tag, 6);
    if (got != row.expected)
      f.add(std::string(row.name) + " " + std::string(to_string(row.tag)) + " gave " + got);
  }
  return {f.ok(), f.ok() ? "quartz and tridymite n=4, every Si root at r=6 matches all six cells" : f.str()};
}

Outcome cristobalite_consistency() {
  Failures f;
  std::string barcode;
  for (int n : {3, 4, 5}) {
    const auto c = generate_cristobalite(n);
    const auto sc = single_rendering(c, DescriptorTag::kShellCount, 6);
    if (sc != "(1,4,4,12,12,36,24)") f.add("n=" + std::to_string(n) + " shell count " + sc);
    const auto rings = single_rendering(c, DescriptorTag::kPrimitiveRings, 6);
    if (rings != "12 12-rings") f.add("n=" + std::to_string(n) + " rings " + rings);
    const auto bc = single_rendering(c, DescriptorTag::kH1Barcode, 6);
    if (barcode.empty()) barcode = bc;
    if (bc != barcode) f.add("n=" + std::to_string(n) + " barcode " + bc + " differs from " + barcode);
    for (auto root : c.atoms_of_species("Si")) {
      const auto env = extract_environment(c, root, 6);
      const auto euler = static_cast<long>(env.bond_count()) - static_cast<long>(env.size()) + 1;
      const auto intervals = static_cast<long>(h1_barcode(env).intervals.size());
      if (intervals != euler || euler != 12) {
        f.add("root " + std::to_string(root) + " has " + std::to_string(intervals) +
              " intervals, Euler rank " + std::to_string(euler));
        break;
      }
    }
  }
  return {f.ok(), f.ok() ? "n=3,4,5: (1,4,4,12,12,36,24), 12 12-rings, barcode " + barcode +
                               " (12 intervals = Euler rank) on every Si root"
                         : f.str()};
}

Outcome crystal_discrimination() {
  Failures f;
  const auto q = generate_quartz(4), t = generate_tridymite(4), c = generate_cristobalite(4);
  for (int r = 1; r <= 5; ++r)
    for (auto tag : kAllDescriptorTags) {
      std::set<std::string> keys;
      for (const auto* net : {&q, &t, &c}) {
        const auto dist = over_si(*net, tag, r);
        for (const auto& [k, n] : dist.counts()) keys.insert(k);
      }
      if (keys.size() != 1)
        f.add(std::string(to_string(tag)) + " r=" + std::to_string(r) + " gives " +
              std::to_string(keys.size()) + " keys");
    }
  auto key6 = [](const BondNetwork& net, DescriptorTag tag) {
    const auto d = over_si(net, tag, 6);
    return d.class_count() == 1 ? d.counts().begin()->first : std::string("\x01multiple");
  };
  if (key6(c, DescriptorTag::kCoordination) == key6(t, DescriptorTag::kCoordination))
    f.add("coordination does not separate cristobalite and tridymite at r=6");
  if (key6(c, DescriptorTag::kH1Barcode) == key6(t, DescriptorTag::kH1Barcode))
    f.add("h1-barcode does not separate cristobalite and tridymite at r=6");
  if (key6(c, DescriptorTag::kPrimitiveRings) != key6(t, DescriptorTag::kPrimitiveRings))
    f.add("primitive-rings separates cristobalite and tridymite at r=6");
  return {f.ok(), f.ok() ? "r<=5: one key per descriptor (all six) across the three crystals; r=6: "
                           "coordination and h1-barcode split C/T, primitive-rings does not"
                         : f.str()};
}

Outcome barcode_properties() {
  Failures f;
  std::size_t graphs = 0, defects = 0, identities = 0;
  auto check = [&](const BondNetwork& net, AtomId root, int radius, const std::string& what) {
    const auto edges = oracle::edges_of(net);
    const auto env = extract_environment(net, root, radius);
    const auto barcode = h1_barcode(env);
    for (int i = 0; i <= radius; ++i)
      for (int j = i; j <= radius; ++j) {
        const auto ann = shell_annulus(env, i, j);
        const auto rank = static_cast<int>(h1_rank(ann.subgraph));
        const auto forest = static_cast<int>(oracle::cycle_rank(ann.subgraph.vertex_count, ann.subgraph.edges));
        const int direct = oracle::annulus_rank(net.atom_count(), edges, root, i, j);
        ++identities;
        if (barcode.count_within(i, j) != rank || rank != forest || rank != direct)
          f.add(what + " (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
  };

  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 250; ++trial) {
    const std::size_t n = 2 + rng() % 29;
    const auto edges = oracle::random_connected(n, rng() % (n + 2), rng);
    std::vector<std::string> species(n, "X");
    std::vector<Bond> bonds;
    for (auto [a, b] : edges) bonds.push_back({a, b});
    const BondNetwork net(species, bonds);
    check(net, static_cast<AtomId>(rng() % n), 1 + static_cast<int>(rng() % 7),
          "random graph " + std::to_string(trial));
    ++graphs;
  }

  const BondNetwork bases[] = {generate_cristobalite(3), generate_tridymite(3), generate_quartz(3)};
  for (int trial = 0; trial < 60; ++trial) {
    const auto& base = bases[trial % 3];
    const auto switched = bond_switch(base, 1 + rng() % 60, rng());
    std::vector<Bond> bonds(switched.bonds().begin(), switched.bonds().end());
    // Dangling bonds, then a few over-coordinated atoms.
    for (int k = 0; k < 2 + static_cast<int>(rng() % 4); ++k) bonds.erase(bonds.begin() + rng() % bonds.size());
    for (int k = 0; k < static_cast<int>(rng() % 4); ++k) {
      const auto a = static_cast<AtomId>(rng() % switched.atom_count());
      const auto b = static_cast<AtomId>(rng() % switched.atom_count());
      const Bond bond{std::min(a, b), std::max(a, b)};
      if (a != b && std::find(bonds.begin(), bonds.end(), bond) == bonds.end()) bonds.push_back(bond);
    }
    std::vector<std::string> species;
    for (AtomId a = 0; a < switched.atom_count(); ++a) species.push_back(switched.species_label(a));
    const BondNetwork net(species, bonds);
    check(net, static_cast<AtomId>(rng() % net.atom_count()), 2 + static_cast<int>(rng() % 5),
          "defect variant " + std::to_string(trial));
    ++defects;
  }
  return {f.ok(), f.ok() ? std::to_string(graphs) + " random graphs and " + std::to_string(defects) +
                               " defect variants, " + std::to_string(identities) +
                               " (i,j) identities exact, forest oracle agrees"
                         : f.str()};
}

// Orbits of root-fixing, label-preserving permutations on labelled graphs,
// counted with Burnside's lemma.
std::size_t burnside_orbits(std::uint32_t n, int label_count) {
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  const auto pairs = pairs_of(n);
  std::size_t total = 0, group = 0;
  do {
    if (perm[0] != 0) continue;
    ++group;
    std::vector<bool> seen(n, false);
    int vertex_cycles = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
      if (seen[v]) continue;
      ++vertex_cycles;
      for (auto u = v; !seen[u]; u = perm[u]) seen[u] = true;
    }
    std::set<oracle::Edge> done;
    int pair_cycles = 0;
    for (auto e : pairs) {
      if (done.count(e)) continue;
      ++pair_cycles;
      for (auto g = e; !done.count(g);) {
        done.insert(g);
        g = std::minmax(perm[g.first], perm[g.second]);
      }
    }
    std::size_t fixed = std::size_t{1} << pair_cycles;
    for (int k = 0; k < vertex_cycles; ++k) fixed *= label_count;
    total += fixed;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total / group;
}

Outcome canonical_soundness() {
  Failures f;
  std::size_t graphs = 0;
  auto exhaustive = [&](std::uint32_t n, int label_count) {
    const auto pairs = pairs_of(n);
    std::set<std::string> keys;
    const std::uint32_t labelings = label_count == 1 ? 1u : 1u << n;
    for (std::uint32_t lab = 0; lab < labelings; ++lab) {
      RootedGraph g;
      for (std::uint32_t v = 0; v < n; ++v) g.labels.push_back(lab >> v & 1 ? "B" : "A");
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
        g.edges.clear();
        for (std::size_t k = 0; k < pairs.size(); ++k)
          if (mask >> k & 1) g.edges.push_back(pairs[k]);
        keys.insert(canonical_form(g).bytes);
        ++graphs;
      }
    }
    const auto expected = burnside_orbits(n, label_count);
    if (keys.size() != expected)
      f.add("n=" + std::to_string(n) + " labels=" + std::to_string(label_count) + ": " +
            std::to_string(keys.size()) + " keys, " + std::to_string(expected) + " orbits");
  };
  for (std::uint32_t n = 1; n <= 7; ++n) exhaustive(n, 1);
  for (std::uint32_t n = 1; n <= 6; ++n) exhaustive(n, 2);

  std::mt19937_64 rng(31337);
  std::size_t iso = 0, non_iso = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::uint32_t n = 2 + rng() % 6;
    const auto pairs = pairs_of(n);
    const std::size_t m = rng() % (pairs.size() + 1);
    auto pick = [&] {
      auto shuffled = pairs;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      shuffled.resize(m);
      RootedGraph g{std::vector<std::string>(n, "A"), {shuffled.begin(), shuffled.end()}, 0};
      if (rng() % 3 == 0) g.labels[rng() % n] = "B";
      return g;
    };
    const auto g = pick();
    RootedGraph h;
    if (trial % 2) {
      std::vector<std::uint32_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0u);
      std::shuffle(perm.begin() + 1, perm.end(), rng);
      h.labels.resize(n);
      for (std::uint32_t v = 0; v < n; ++v) h.labels[perm[v]] = g.labels[v];
      for (auto [a, b] : g.edges) h.edges.push_back({perm[a], perm[b]});
      h.root = 0;
    } else {
      h = pick();
    }
    auto to_oracle = [](const RootedGraph& x) {
      std::vector<int> labels;
      for (const auto& l : x.labels) labels.push_back(l == "A" ? 0 : 1);
      return oracle::make_graph(labels, {x.edges.begin(), x.edges.end()}, x.root);
    };
    const bool brute = oracle::isomorphic(to_oracle(g), to_oracle(h));
    (brute ? iso : non_iso)++;
    if ((canonical_form(g) == canonical_form(h)) != brute) f.add("random pair " + std::to_string(trial));
  }
  return {f.ok(), f.ok() ? std::to_string(graphs) + " graphs (all n<=7 one label, n<=6 two labels) hit "
                               "the Burnside orbit counts; 10000 pairs (" + std::to_string(iso) +
                               " isomorphic) agree with brute force"
                         : f.str()};
}

Outcome shell_count_roundtrip() {
  Failures f;
  const auto base = generate_cristobalite(4);
  std::mt19937_64 rng(99);
  std::vector<std::string> sc_keys, h1_keys;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto net = bond_switch(base, 20 + rng() % 800, rng());
    const auto si = net.atoms_of_species("Si");
    const auto env = extract_environment(net, si[rng() % si.size()], 1 + static_cast<int>(rng() % 7));
    if (!perfect_coordination_check(env)) {
      f.add("sample " + std::to_string(trial) + " not perfectly coordinated");
      continue;
    }
    const auto sc = shell_count(env);
    const auto barcode = h1_barcode(env);
    const auto f0 = endpoints_from_shell_count(sc);
    for (int k = 0; k <= env.radius(); ++k)
      if (f0[k] != barcode.count_within(0, k)) {
        f.add("sample " + std::to_string(trial) + " F(0," + std::to_string(k) + ")");
        break;
      }
    if (shell_count_from_endpoints(f0) != sc) f.add("sample " + std::to_string(trial) + " inverse");
    // Both keys carry the radius so samples of different radius never collide.
    sc_keys.push_back(std::to_string(env.radius()) + ":" + encode_payload(sc));
    h1_keys.push_back(std::to_string(env.radius()) + ":" + encode_payload(barcode));
  }
  const auto joint = JointDistribution::from_keys(sc_keys, h1_keys);
  const double u = uncertainty_coefficient(joint);
  if (std::abs(u - 1.0) > 1e-12) f.add("U(shell-count | h1-barcode) = " + std::to_string(u));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", u);
  return {f.ok(), f.ok() ? "1000 environments: endpoints and inverse exact, U(shell-count | h1-barcode) = " +
                               std::string(buf)
                         : f.str()};
}

Outcome statistics_properties() {
  Failures f;
  std::mt19937_64 rng(5);
  constexpr double tol = 1e-12;
  auto random_dist = [&](int classes, int skip_mask) {
    EmpiricalDistribution d(DescriptorTag::kShellCount, 3);
    for (int k = 0; k < classes; ++k)
      if (!(skip_mask >> k & 1)) d.add("c" + std::to_string(k), 1 + rng() % 40);
    return d;
  };
  for (int trial = 0; trial < 2000; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 10);
    const auto p = random_dist(k, 0);
    const double h = shannon_entropy(p), s = scaled_entropy(p);
    if (h < -tol || h > std::log(static_cast<double>(p.class_count())) + tol || s < -tol || s > 1 + tol)
      f.add("entropy bounds, trial " + std::to_string(trial));

    std::vector<std::string> x, y;
    const std::size_t n = 1 + rng() % 300;
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = rng() % k;
      x.push_back(std::to_string(a));
      y.push_back(std::to_string(rng() % 2 ? a % 3 : rng() % 5));
    }
    const auto joint = JointDistribution::from_keys(x, y);
    const double info = mutual_information(joint);
    const double hx = entropy_of_counts(joint.marginal_x(), joint.total());
    const double hy = entropy_of_counts(joint.marginal_y(), joint.total());
    if (info < -tol || info > std::min(hx, hy) + tol) f.add("I bound, trial " + std::to_string(trial));
    if (hx > 0) {
      const double u = uncertainty_coefficient(joint);
      if (u < -tol || u > 1 + tol) f.add("U bound, trial " + std::to_string(trial));
    }

    // Same support: zero exactly when the frequencies agree.
    const auto q = trial % 3 == 0 ? p : random_dist(k, 0);
    EmpiricalDistribution scaled(DescriptorTag::kShellCount, 3);
    for (const auto& [key, c] : q.counts()) scaled.add(key, (1 + trial % 4) * c);
    const double d = symmetrized_kl(p, scaled);
    bool equal = true;
    for (const auto& [key, c] : p.counts()) equal = equal && c * scaled.total() == scaled.count(key) * p.total();
    if (d < -tol || (d <= tol) != equal) f.add("KL zero iff equal, trial " + std::to_string(trial));
  }

  // Byte-exact distribution files for every descriptor and thread count.
  const auto net = bond_switch(generate_cristobalite(4), 300, 8);
  for (auto tag : kAllDescriptorTags) {
    const auto one = distribution_to_json(over_si(net, tag, 5, 1));
    for (unsigned threads : {2u, 3u, 8u})
      if (distribution_to_json(over_si(net, tag, 5, threads)) != one)
        f.add(std::string(to_string(tag)) + " differs with " + std::to_string(threads) + " threads");
  }
  return {f.ok(), f.ok() ? "2000 random cases within 1e-12 bounds; KL zero exactly for equal frequencies; "
                           "distribution files byte-identical for 1/2/3/8 threads on all six descriptors"
                         : f.str()};
}

Outcome bond_switch_monotone() {
  Failures f;
  const auto crystal = generate_cristobalite(12);
  const std::size_t checkpoints[] = {10, 50, 250};
  const DescriptorTag tags[] = {DescriptorTag::kCoordination, DescriptorTag::kH1Barcode,
                                DescriptorTag::kPrimitiveRings};
  std::ostringstream summary;
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto series = bond_switch_series(crystal, checkpoints, seed);
    for (auto tag : tags) {
      const auto reference = over_si(crystal, tag, 6);
      double last_s = -1, last_kl = -1;
      for (std::size_t k = 0; k < series.size(); ++k) {
        const auto d = over_si(series[k], tag, 6);
        const double s = scaled_entropy(d), kl = symmetrized_kl(d, reference);
        if (!(s > last_s && kl > last_kl))
          f.add("seed " + std::to_string(seed) + " " + std::string(to_string(tag)) + " at s=" +
                std::to_string(checkpoints[k]));
        last_s = s;
        last_kl = kl;
        if (seed == 1 && tag == DescriptorTag::kH1Barcode) {
          char buf[64];
          std::snprintf(buf, sizeof buf, "%s%.4f/%.4f", k ? ", " : "", s, kl);
          summary << buf;
        }
      }
    }
  }
  return {f.ok(), f.ok() ? "cristobalite n=12, s=10/50/250, seeds 1-3: scaled entropy and KL strictly "
                           "increase for coordination, h1-barcode, primitive-rings (seed 1 h1: " +
                               summary.str() + ")"
                         : f.str()};
}

Outcome performance() {
  Failures f;
  const auto net = bond_switch(generate_cristobalite(24), 20000, 17);
  auto roots = net.atoms_of_species("Si");
  roots.resize(100000);
  std::ostringstream detail;
  double times[3];
  const DescriptorTag tags[] = {DescriptorTag::kCoordination, DescriptorTag::kH1Barcode,
                                DescriptorTag::kPrimitiveRings};
  for (int k = 0; k < 3; ++k) {
    const auto t0 = Clock::now();
    const auto keys = classify_roots(net, roots, tags[k], 6);
    times[k] = seconds_since(t0);
    if (keys.size() != roots.size()) f.add("wrong key count");
    if (times[k] >= 120) f.add(std::string(to_string(tags[k])) + " took " + std::to_string(times[k]) + " s");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%s %.2f s", k ? ", " : "", std::string(to_string(tags[k])).c_str(), times[k]);
    detail << buf;
  }
  if (!(times[0] < times[1] && times[0] < times[2])) f.add("coordination is not the fastest");
  return {f.ok(), f.ok() ? "1e5 Si roots at r=6, one thread: " + detail.str() : f.str() + " (" + detail.str() + ")"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"crystal-table", crystal_table},
      {"cristobalite-consistency", cristobalite_consistency},
      {"crystal-discrimination", crystal_discrimination},
      {"barcode-properties", barcode_properties},
      {"canonical-soundness", canonical_soundness},
      {"shell-count-roundtrip", shell_count_roundtrip},
      {"statistics-properties", statistics_properties},
      {"bond-switch-monotone", bond_switch_monotone},
      {"performance", performance},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failed += !out.pass;
    std::printf("%s %s: %s [%.1f s]\n", out.pass ? "PASS" : "FAIL", c.name, out.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  return failed;
}
