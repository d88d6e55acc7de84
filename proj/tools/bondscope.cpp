// bondscope: classify local atomic environments of bond networks.

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bondscope/barcode.hpp"
#include "bondscope/crystals.hpp"
#include "bondscope/descriptor.hpp"
#include "bondscope/environment.hpp"
#include "bondscope/errors.hpp"
#include "bondscope/ingest.hpp"
#include "bondscope/io.hpp"
#include "bondscope/stats.hpp"

using namespace bondscope;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

unsigned default_threads() {
  if (const char* env = std::getenv("BONDSCOPE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0) return static_cast<unsigned>(v);
    std::cerr << "warning: ignoring BONDSCOPE_THREADS='" << env << "'\n";
  }
  return 1;
}

DescriptorTag tag_or_throw(const std::string& name) {
  if (auto tag = parse_descriptor_tag(name)) return *tag;
  throw std::invalid_argument("unknown descriptor '" + name + "'");
}

std::vector<std::string> tag_names() {
  std::vector<std::string> out;
  for (auto t : kAllDescriptorTags) out.emplace_back(to_string(t));
  return out;
}

// Options shared by every command that reads structures.
struct InputFlags {
  std::string species_map;
  std::string bond = "Si-O:2.2";
  unsigned threads = default_threads();

  void attach(CLI::App* cmd) {
    cmd->add_option("--species-map", species_map, "dump type labels, e.g. 1=Si,2=O");
    cmd->add_option("--bond", bond, "bond cutoffs, e.g. Si-O:2.2")->capture_default_str();
    cmd->add_option("--threads", threads, "worker threads, 0 = all cores (env BONDSCOPE_THREADS)")
        ->capture_default_str();
  }

  LoadOptions load_options() const {
    LoadOptions opt;
    opt.rule = BondRule::parse(bond);
    if (!species_map.empty()) opt.species_map = parse_species_map(species_map);
    opt.threads = std::max(1u, threads);
    return opt;
  }

  std::vector<BondNetwork> load(const std::string& path) const {
    auto nets = load_networks(path, load_options());
    // Position-free networks are pure topology; nothing to truncate.
    for (const auto& n : nets)
      if (n.positions() && !n.cell())
        std::cerr << "warning: " << path
                  << " has no periodic cell; environments near the surface are truncated\n";
    return nets;
  }
};

// --------------------------------------------------------------- classify

struct ClassifyCmd {
  std::vector<std::string> inputs;
  std::string descriptor = "h1-barcode";
  int radius = 6;
  std::string root_species;
  std::string out;
  bool coordination_species = false;
  InputFlags in;

  int run() const {
    const auto t0 = Clock::now();
    const auto tag = tag_or_throw(descriptor);
    ClassifyOptions opt;
    opt.threads = in.threads;
    opt.describe.coordination_species = coordination_species;
    EmpiricalDistribution dist(tag, radius);
    std::string source;
    for (const auto& path : inputs) {
      for (const auto& net : in.load(path))
        dist.merge(classify_all(net, tag, radius, species_filter(root_species), opt));
      source += (source.empty() ? "" : ",") + path;
    }
    dist.set_source(source);
    if (!out.empty()) write_file_atomic(out, distribution_to_json(dist));
    std::cout << "descriptor     " << to_string(tag) << " r=" << radius << '\n'
              << "environments   " << dist.total() << '\n'
              << "classes        " << dist.class_count() << '\n'
              << "scaled entropy " << std::setprecision(6) << scaled_entropy(dist) << '\n'
              << "seconds        " << std::setprecision(4) << seconds_since(t0) << '\n';
    return 0;
  }
};

// ---------------------------------------------------------------- compare

struct CompareCmd {
  std::string a, b;
  std::string sort = "f1";
  std::size_t top = 20;
  std::string out, curve_csv, curve_svg;
  double smoothing = 0.0;

  int run() const {
    const auto p = distribution_from_json(read_file(a));
    const auto q = distribution_from_json(read_file(b));
    const auto mode = parse_sort_mode(sort);
    if (!mode) throw std::invalid_argument("unknown sort mode '" + sort + "'");
    const auto report = ranked_diff_table(p, q, *mode, top);
    const auto csv = report_to_csv(report);
    if (!out.empty()) write_file_atomic(out, csv);
    else std::cout << csv;

    std::size_t shared = 0;
    for (const auto& [key, c] : p.counts()) shared += q.count(key) > 0;
    const double kl = symmetrized_kl(p, q, smoothing);
    std::cout << "symmetrized KL " << std::setprecision(6) << kl;
    if (smoothing > 0) std::cout << " (add-" << smoothing << " smoothing)";
    std::cout << '\n'
              << "classes        " << p.class_count() << " vs " << q.class_count() << ", " << shared
              << " shared\n";
    if (smoothing == 0 && shared < std::max(p.class_count(), q.class_count()))
      std::cout << "note: terms for classes seen in only one distribution are dropped"
                << (shared == 0 ? "; the supports are disjoint, so the divergence carries no signal"
                                : "")
                << '\n';

    if (!curve_csv.empty() || !curve_svg.empty()) {
      const auto curve = rank_frequency_curve(p, {&q}, top);
      if (!curve_csv.empty()) write_file_atomic(curve_csv, curve_to_csv(p.tag(), curve));
      if (!curve_svg.empty()) write_file_atomic(curve_svg, curve_to_svg(curve, {a, b}));
    }
    return 0;
  }
};

// ------------------------------------------------------------ mutual-info

struct MutualInfoCmd {
  std::string input;
  std::string x = "shell-count", y = "h1-barcode";
  int radius_x = 6, radius_y = 6;
  std::string root_species;
  InputFlags in;

  int run() const {
    const auto tx = tag_or_throw(x), ty = tag_or_throw(y);
    ClassifyOptions opt;
    opt.threads = in.threads;
    std::vector<std::string> kx, ky;
    for (const auto& net : in.load(input)) {
      const auto roots = select_roots(net, species_filter(root_species));
      auto a = classify_roots(net, roots, tx, radius_x, opt);
      auto b = classify_roots(net, roots, ty, radius_y, opt);
      kx.insert(kx.end(), a.begin(), a.end());
      ky.insert(ky.end(), b.begin(), b.end());
    }
    const auto joint = JointDistribution::from_keys(kx, ky);
    const double hx = entropy_of_counts(joint.marginal_x(), joint.total());
    const double hy = entropy_of_counts(joint.marginal_y(), joint.total());
    const double info = mutual_information(joint);
    auto u = [&](double h) -> std::string {
      if (h <= 0) return "undefined (entropy 0)";
      std::ostringstream os;
      os << std::fixed << std::setprecision(3) << info / h;
      return os.str();
    };
    std::cout << std::setprecision(6) << "environments " << joint.total() << '\n'
              << "H(X) " << hx << "  H(Y) " << hy << "  I(X;Y) " << info << '\n'
              << "U(X|Y) " << u(hx) << "  X=" << x << " r=" << radius_x << '\n'
              << "U(Y|X) " << u(hy) << "  Y=" << y << " r=" << radius_y << '\n';
    return 0;
  }
};

// ---------------------------------------------------------------- barcode

struct BarcodeCmd {
  std::string input;
  AtomId root = 0;
  int radius = 6;
  std::string svg;
  InputFlags in;

  int run() const {
    const auto nets = in.load(input);
    const auto env = extract_environment(nets.front(), root, radius);
    const auto f = f_matrix(env);
    const auto bc = mobius_invert(f);
    std::cout << "root " << root << " (" << nets.front().species_label(root) << "), r=" << radius
              << ", " << env.size() << " atoms, " << env.bond_count() << " bonds\n"
              << "barcode " << render_payload(DescriptorTag::kH1Barcode, encode_payload(bc)) << '\n'
              << "F(i,j):\n";
    for (int i = 0; i <= radius; ++i) {
      std::cout << ' ';
      for (int j = 0; j <= radius; ++j)
        std::cout << std::setw(4) << (j < i ? std::string("") : std::to_string(f(i, j)));
      std::cout << '\n';
    }
    if (!svg.empty())
      write_file_atomic(svg, barcode_to_svg(bc, radius, "root " + std::to_string(root)));
    return 0;
  }
};

// ------------------------------------------------------------------ bench

struct BenchCmd {
  std::size_t roots = 100000;
  int radius = 6;
  int n = 24;
  std::size_t switches = 2000;
  std::uint64_t seed = 1;
  std::vector<std::string> descriptors{"coordination", "h1-barcode", "primitive-rings"};
  unsigned threads = 1;

  int run() const {
    auto t0 = Clock::now();
    const auto net = bond_switch(generate_cristobalite(n), switches, seed);
    auto ids = select_roots(net, species_filter("Si"));
    if (ids.size() < roots)
      throw std::invalid_argument("network has only " + std::to_string(ids.size()) +
                                  " Si roots; raise --n");
    ids.resize(roots);
    std::cout << "network: cristobalite n=" << n << " with " << switches << " bond switches, "
              << net.atom_count() << " atoms (" << std::setprecision(3) << seconds_since(t0)
              << " s)\n";
    ClassifyOptions opt;
    opt.threads = threads;
    for (const auto& name : descriptors) {
      const auto tag = tag_or_throw(name);
      t0 = Clock::now();
      const auto keys = classify_roots(net, ids, tag, radius, opt);
      std::cout << std::left << std::setw(18) << name << std::right << std::fixed
                << std::setprecision(3) << seconds_since(t0) << " s for " << keys.size()
                << " roots at r=" << radius << '\n'
                << std::defaultfloat;
    }
    return 0;
  }
};

// ---------------------------------------------------------------- crystal

struct CrystalCmd {
  std::string form;
  int n = 4;
  std::string out, json;

  int run() const {
    const auto f = parse_crystal_form(form);
    if (!f) throw std::invalid_argument("unknown crystal form '" + form + "'");
    const auto net = generate_crystal(*f, n);
    if (!out.empty()) write_file_atomic(out, write_xyz(configuration_of(net)));
    if (!json.empty()) write_file_atomic(json, network_to_json(net));
    std::cout << form << " n=" << n << ": " << net.atom_count() << " atoms, " << net.bond_count()
              << " bonds\n";
    return 0;
  }
};

// ----------------------------------------------------------------- export

struct ExportCmd {
  std::string input, out;
  std::size_t frame = 0;
  InputFlags in;

  int run() const {
    const auto nets = in.load(input);
    if (frame >= nets.size())
      throw std::invalid_argument("input has " + std::to_string(nets.size()) + " frame(s)");
    write_file_atomic(out, network_to_json(nets[frame]));
    std::cout << nets[frame].atom_count() << " atoms, " << nets[frame].bond_count() << " bonds\n";
    return 0;
  }
};

// -------------------------------------------------------------- stability

struct StabilityCmd {
  std::string input;
  int radius = 6;
  double delta = 0.2;
  std::string descriptor = "graph-iso";
  std::string root_species;
  InputFlags in;

  int run() const {
    const auto tag = tag_or_throw(descriptor);
    const auto text = read_file(input);
    std::vector<AtomicConfiguration> frames;
    const auto load = in.load_options();
    if (detect_format(input, std::string_view(text).substr(0, 256)) == InputFormat::kLammpsDump)
      frames = parse_lammps_dump_frames(text, load.species_map);
    else
      frames = parse_xyz_frames(text);
    ClassifyOptions opt;
    opt.threads = in.threads;
    for (std::size_t i = 0; i < frames.size(); ++i)
      std::cout << "frame " << i << ": " << std::fixed << std::setprecision(4)
                << cutoff_stability(frames[i], load.rule, radius, delta, tag,
                                    species_filter(root_species), opt)
                << " of environments unchanged under +-" << delta << " A\n"
                << std::defaultfloat;
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bondscope: classify local atomic environments in bond networks"};
  app.require_subcommand(1);
  const auto tags = tag_names();

  ClassifyCmd classify;
  auto* c = app.add_subcommand("classify", "build the descriptor distribution of one or more files");
  c->add_option("inputs", classify.inputs, "XYZ, LAMMPS dump or network JSON files")->required();
  c->add_option("--descriptor,-d", classify.descriptor)->check(CLI::IsMember(tags))->capture_default_str();
  c->add_option("--radius,-r", classify.radius)->check(CLI::Range(1, 64))->capture_default_str();
  c->add_option("--root-species", classify.root_species, "root label (default: every atom)");
  c->add_option("--out,-o", classify.out, "distribution JSON");
  c->add_flag("--coordination-species", classify.coordination_species,
              "tag coordination entries with species labels");
  classify.in.attach(c);

  CompareCmd compare;
  auto* cm = app.add_subcommand("compare", "ranked comparison of two distributions");
  cm->add_option("a", compare.a)->required();
  cm->add_option("b", compare.b)->required();
  cm->add_option("--sort", compare.sort)->check(CLI::IsMember({"f1", "f1-f2", "f2-f1"}))->capture_default_str();
  cm->add_option("--top", compare.top)->check(CLI::PositiveNumber)->capture_default_str();
  cm->add_option("--out,-o", compare.out, "report CSV (stdout if omitted)");
  cm->add_option("--curve-csv", compare.curve_csv, "rank-frequency curve CSV");
  cm->add_option("--curve-svg", compare.curve_svg, "rank-frequency curve SVG");
  cm->add_option("--smoothing", compare.smoothing, "add-alpha pseudo-count for the divergence")
      ->check(CLI::NonNegativeNumber);

  MutualInfoCmd mi;
  auto* m = app.add_subcommand("mutual-info", "uncertainty coefficients of two descriptors");
  m->add_option("input", mi.input)->required();
  m->add_option("--x", mi.x)->check(CLI::IsMember(tags))->capture_default_str();
  m->add_option("--y", mi.y)->check(CLI::IsMember(tags))->capture_default_str();
  m->add_option("--radius-x", mi.radius_x)->check(CLI::Range(1, 64))->capture_default_str();
  m->add_option("--radius-y", mi.radius_y)->check(CLI::Range(1, 64))->capture_default_str();
  m->add_option("--root-species", mi.root_species);
  mi.in.attach(m);

  BarcodeCmd barcode;
  auto* b = app.add_subcommand("barcode", "H1 barcode of one environment");
  b->add_option("input", barcode.input)->required();
  b->add_option("--root", barcode.root)->required();
  b->add_option("--radius,-r", barcode.radius)->check(CLI::Range(1, 64))->capture_default_str();
  b->add_option("--svg", barcode.svg, "write the barcode as SVG");
  barcode.in.attach(b);

  BenchCmd bench;
  bench.threads = default_threads();
  auto* be = app.add_subcommand("bench", "time descriptors on a perturbed cristobalite network");
  be->add_option("--roots", bench.roots)->check(CLI::PositiveNumber)->capture_default_str();
  be->add_option("--radius,-r", bench.radius)->check(CLI::Range(1, 64))->capture_default_str();
  be->add_option("--n", bench.n, "cristobalite supercell size")->capture_default_str();
  be->add_option("--switches", bench.switches)->capture_default_str();
  be->add_option("--seed", bench.seed)->capture_default_str();
  be->add_option("--descriptors", bench.descriptors)->check(CLI::IsMember(tags));
  be->add_option("--threads", bench.threads)->capture_default_str();

  CrystalCmd crystal;
  auto* cr = app.add_subcommand("crystal", "generate a silica crystal supercell");
  cr->add_option("--form", crystal.form)
      ->required()
      ->check(CLI::IsMember({"quartz", "cristobalite", "tridymite"}));
  cr->add_option("--n", crystal.n)->check(CLI::Range(3, 64))->capture_default_str();
  cr->add_option("--out,-o", crystal.out, "extended XYZ");
  cr->add_option("--json", crystal.json, "network edge-list JSON");

  ExportCmd exp;
  auto* ex = app.add_subcommand("export", "write the bond network of a file as edge-list JSON");
  ex->add_option("input", exp.input)->required();
  ex->add_option("--out,-o", exp.out)->required();
  ex->add_option("--frame", exp.frame)->capture_default_str();
  exp.in.attach(ex);

  StabilityCmd stab;
  auto* st = app.add_subcommand("stability", "fraction of environments unchanged under cutoff shifts");
  st->add_option("input", stab.input)->required();
  st->add_option("--radius,-r", stab.radius)->check(CLI::Range(1, 64))->capture_default_str();
  st->add_option("--delta", stab.delta)->check(CLI::NonNegativeNumber)->capture_default_str();
  st->add_option("--descriptor,-d", stab.descriptor)->check(CLI::IsMember(tags))->capture_default_str();
  st->add_option("--root-species", stab.root_species);
  stab.in.attach(st);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c) return classify.run();
    if (*cm) return compare.run();
    if (*m) return mi.run();
    if (*b) return barcode.run();
    if (*be) return bench.run();
    if (*cr) return crystal.run();
    if (*ex) return exp.run();
    if (*st) return stab.run();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
