#include "bondscope/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "bondscope/errors.hpp"
#include "bondscope/io.hpp"

namespace bondscope {

namespace {

// ---------------------------------------------------------------- text utils

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t b = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

/// Splits text into lines, remembering 1-based line numbers.
class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  std::size_t line_number() const { return line_; }

  std::string_view next(const char* expecting) {
    if (done()) throw ParseError(line_ + 1, std::string("unexpected end of file, expected ") + expecting);
    auto end = text_.find('\n', pos_);
    if (end == std::string_view::npos) end = text_.size();
    auto line = text_.substr(pos_, end - pos_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos_ = end + 1;
    ++line_;
    return line;
  }

  std::string_view peek() const {
    auto end = text_.find('\n', pos_);
    if (end == std::string_view::npos) end = text_.size();
    return text_.substr(pos_, end - pos_);
  }

  void skip_blank() {
    while (!done() && trim(peek()).empty()) next("");
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

double parse_double(std::string_view s, std::size_t line, const char* what) {
  auto v = parse_number<double>(s);
  if (!v || !std::isfinite(*v))
    throw ParseError(line, std::string("bad ") + what + " '" + std::string(s) + "'");
  return *v;
}

// ------------------------------------------------------------------ geometry

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// Fractional frame of a configuration. Without a cell, the bounding box acts
/// as a non-periodic orthorhombic cell.
struct Frame {
  Cell m{};
  Cell inv{};  // inverse of m
  Vec3 origin{};
  std::array<bool, 3> periodic{};
  Vec3 width{};  // perpendicular widths

  Vec3 frac(const Vec3& p) const {
    const Vec3 d = sub(p, origin);
    Vec3 f{};
    for (int k = 0; k < 3; ++k) f[k] = d[0] * inv[0][k] + d[1] * inv[1][k] + d[2] * inv[2][k];
    return f;
  }
  Vec3 cart(const Vec3& f) const {
    Vec3 r{};
    for (int j = 0; j < 3; ++j) r[j] = f[0] * m[0][j] + f[1] * m[1][j] + f[2] * m[2][j];
    return r;
  }

  /// Squared minimum-image distance for a fractional separation.
  double min_image_sq(Vec3 df) const {
    for (int k = 0; k < 3; ++k)
      if (periodic[k]) df[k] -= std::round(df[k]);
    double best = std::numeric_limits<double>::infinity();
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        for (int c = -1; c <= 1; ++c) {
          if ((a && !periodic[0]) || (b && !periodic[1]) || (c && !periodic[2])) continue;
          const Vec3 r = cart({df[0] + a, df[1] + b, df[2] + c});
          best = std::min(best, dot(r, r));
        }
    return best;
  }
};

Frame make_frame(const AtomicConfiguration& cfg) {
  Frame f;
  if (cfg.cell) {
    f.m = *cfg.cell;
    f.periodic = cfg.periodic;
  } else {
    Vec3 lo{0, 0, 0}, hi{0, 0, 0};
    if (!cfg.positions.empty()) lo = hi = cfg.positions.front();
    for (const auto& p : cfg.positions)
      for (int k = 0; k < 3; ++k) {
        lo[k] = std::min(lo[k], p[k]);
        hi[k] = std::max(hi[k], p[k]);
      }
    f.origin = lo;
    for (int k = 0; k < 3; ++k) f.m[k][k] = hi[k] - lo[k] + 1.0;
    f.periodic = {false, false, false};
  }
  const auto& [a, b, c] = f.m;
  const Vec3 bc = cross(b, c), ca = cross(c, a), ab = cross(a, b);
  const double vol = dot(a, bc);
  if (!(std::abs(vol) > 1e-12) || !std::isfinite(vol))
    throw std::invalid_argument("cell is singular");
  // Rows of the inverse transpose are the reciprocal vectors.
  for (int j = 0; j < 3; ++j) {
    f.inv[j][0] = bc[j] / vol;
    f.inv[j][1] = ca[j] / vol;
    f.inv[j][2] = ab[j] / vol;
  }
  f.width = {std::abs(vol) / std::sqrt(dot(bc, bc)), std::abs(vol) / std::sqrt(dot(ca, ca)),
             std::abs(vol) / std::sqrt(dot(ab, ab))};
  return f;
}

void validate(const AtomicConfiguration& cfg) {
  if (cfg.species.size() != cfg.positions.size())
    throw std::invalid_argument("configuration has " + std::to_string(cfg.species.size()) +
                                " labels but " + std::to_string(cfg.positions.size()) +
                                " positions");
  for (const auto& p : cfg.positions)
    for (double x : p)
      if (!std::isfinite(x)) throw std::invalid_argument("non-finite atom position");
  if (cfg.any_periodic() && !cfg.cell)
    throw std::invalid_argument("periodic configuration without a cell");
}

void check_minimum_image(const Frame& frame, double max_cutoff) {
  for (int k = 0; k < 3; ++k)
    if (frame.periodic[k] && max_cutoff >= 0.5 * frame.width[k]) {
      std::ostringstream os;
      os << "cutoff " << max_cutoff << " A is not below half the cell width " << frame.width[k]
         << " A along axis " << k << "; minimum image is ambiguous";
      throw MinimumImageError(os.str());
    }
}

/// Squared cutoffs indexed by interned species ids.
struct CutoffTable {
  std::vector<std::uint16_t> species;
  std::size_t kinds = 0;
  std::vector<double> cut_sq;  // kinds*kinds, negative means never bond

  CutoffTable(const AtomicConfiguration& cfg, const BondRule& rule) {
    std::map<std::string, std::uint16_t> ids;
    std::vector<const std::string*> labels;
    species.reserve(cfg.size());
    for (const auto& s : cfg.species) {
      auto [it, fresh] = ids.try_emplace(s, static_cast<std::uint16_t>(ids.size()));
      if (fresh) labels.push_back(&it->first);
      species.push_back(it->second);
    }
    kinds = labels.size();
    cut_sq.assign(kinds * kinds, -1.0);
    for (std::size_t i = 0; i < kinds; ++i)
      for (std::size_t j = 0; j < kinds; ++j)
        if (auto c = rule.cutoff(*labels[i], *labels[j])) cut_sq[i * kinds + j] = *c * *c;
  }
  double operator()(std::size_t a, std::size_t b) const {
    return cut_sq[species[a] * kinds + species[b]];
  }
};

}  // namespace

// ----------------------------------------------------------------- BondRule

BondRule BondRule::silica(double cutoff) {
  BondRule rule;
  rule.set("Si", "O", cutoff);
  return rule;
}

BondRule BondRule::parse(std::string_view text) {
  BondRule rule;
  std::string_view rest = text;
  while (!rest.empty()) {
    auto comma = rest.find(',');
    auto item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto dash = item.find('-'), colon = item.find(':');
    if (dash == std::string_view::npos || colon == std::string_view::npos || dash > colon)
      throw std::invalid_argument("bond rule entries look like Si-O:2.2, got '" +
                                  std::string(item) + "'");
    auto cutoff = parse_number<double>(item.substr(colon + 1));
    if (!cutoff) throw std::invalid_argument("bad cutoff in '" + std::string(item) + "'");
    rule.set(std::string(trim(item.substr(0, dash))),
             std::string(trim(item.substr(dash + 1, colon - dash - 1))), *cutoff);
  }
  if (rule.empty()) throw std::invalid_argument("empty bond rule");
  return rule;
}

void BondRule::set(const std::string& a, const std::string& b, double cutoff) {
  if (!(cutoff > 0) || !std::isfinite(cutoff))
    throw std::invalid_argument("bond cutoff must be positive and finite");
  if (a.empty() || b.empty()) throw std::invalid_argument("empty species label in bond rule");
  cutoffs_[std::minmax(a, b)] = cutoff;
}

std::optional<double> BondRule::cutoff(const std::string& a, const std::string& b) const {
  auto it = cutoffs_.find(std::minmax(a, b));
  if (it == cutoffs_.end()) return std::nullopt;
  return it->second;
}

double BondRule::max_cutoff() const {
  double m = 0;
  for (const auto& [pair, c] : cutoffs_) m = std::max(m, c);
  return m;
}

BondRule BondRule::shifted(double delta) const {
  BondRule out;
  for (const auto& [pair, c] : cutoffs_) out.set(pair.first, pair.second, c + delta);
  return out;
}

SpeciesMap parse_species_map(std::string_view text) {
  SpeciesMap map;
  std::string_view rest = text;
  while (!rest.empty()) {
    auto comma = rest.find(',');
    auto item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    auto eq = item.find('=');
    auto type = eq == std::string_view::npos ? std::nullopt : parse_number<int>(item.substr(0, eq));
    auto label = eq == std::string_view::npos ? std::string_view{} : trim(item.substr(eq + 1));
    if (!type || label.empty())
      throw std::invalid_argument("species map entries look like 1=Si, got '" + std::string(item) +
                                  "'");
    map[*type] = std::string(label);
  }
  return map;
}

// ---------------------------------------------------------------------- XYZ

namespace {

// key=value pairs of an extended XYZ comment line; values may be quoted.
std::map<std::string, std::string> comment_fields(std::string_view line) {
  std::map<std::string, std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t kb = i;
    while (i < line.size() && line[i] != '=' && !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::string key(line.substr(kb, i - kb));
    if (i >= line.size() || line[i] != '=') {
      if (!key.empty()) out.emplace(key, "");
      continue;
    }
    ++i;
    std::string value;
    if (i < line.size() && line[i] == '"') {
      const auto close = line.find('"', i + 1);
      value = std::string(line.substr(i + 1, close == std::string_view::npos ? std::string_view::npos
                                                                           : close - i - 1));
      i = close == std::string_view::npos ? line.size() : close + 1;
    } else {
      const std::size_t vb = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      value = std::string(line.substr(vb, i - vb));
    }
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    out[key] = value;
  }
  return out;
}

bool parse_flag(std::string_view s, std::size_t line) {
  if (s == "T" || s == "t" || s == "True" || s == "true" || s == "1") return true;
  if (s == "F" || s == "f" || s == "False" || s == "false" || s == "0") return false;
  throw ParseError(line, "bad pbc flag '" + std::string(s) + "'");
}

}  // namespace

std::vector<AtomicConfiguration> parse_xyz_frames(std::string_view text) {
  std::vector<AtomicConfiguration> frames;
  LineReader in(text);
  in.skip_blank();
  while (!in.done()) {
    const auto count_line = in.next("atom count");
    const auto count = parse_number<long long>(count_line);
    if (!count || *count < 0)
      throw ParseError(in.line_number(), "expected atom count, got '" + std::string(count_line) + "'");
    const auto comment = in.next("comment line");
    const std::size_t comment_line = in.line_number();

    AtomicConfiguration cfg;
    std::size_t species_col = 0, pos_col = 1;
    const auto fields = comment_fields(comment);
    if (auto it = fields.find("lattice"); it != fields.end()) {
      auto t = tokens(it->second);
      if (t.size() != 9) throw ParseError(comment_line, "Lattice needs 9 numbers");
      Cell cell{};
      for (int i = 0; i < 9; ++i) cell[i / 3][i % 3] = parse_double(t[i], comment_line, "lattice entry");
      cfg.cell = cell;
      cfg.periodic = {true, true, true};
    }
    if (auto it = fields.find("pbc"); it != fields.end()) {
      auto t = tokens(it->second);
      if (t.size() != 3) throw ParseError(comment_line, "pbc needs 3 flags");
      for (int k = 0; k < 3; ++k) cfg.periodic[k] = parse_flag(t[k], comment_line);
      if (cfg.any_periodic() && !cfg.cell) throw ParseError(comment_line, "pbc without Lattice");
    }
    if (auto it = fields.find("properties"); it != fields.end()) {
      std::vector<std::string_view> parts;
      std::string_view rest = it->second;
      while (true) {
        auto c = rest.find(':');
        parts.push_back(rest.substr(0, c));
        if (c == std::string_view::npos) break;
        rest = rest.substr(c + 1);
      }
      if (parts.size() % 3 != 0) throw ParseError(comment_line, "malformed Properties");
      std::optional<std::size_t> sp, ps;
      std::size_t col = 0;
      for (std::size_t i = 0; i < parts.size(); i += 3) {
        auto width = parse_number<int>(parts[i + 2]);
        if (!width || *width < 1) throw ParseError(comment_line, "malformed Properties");
        if (parts[i] == "species") sp = col;
        if (parts[i] == "pos") ps = col;
        col += static_cast<std::size_t>(*width);
      }
      if (!sp || !ps) throw ParseError(comment_line, "Properties lacks species or pos");
      species_col = *sp;
      pos_col = *ps;
    }

    const std::size_t need = std::max(species_col, pos_col + 2) + 1;
    cfg.species.reserve(static_cast<std::size_t>(*count));
    cfg.positions.reserve(static_cast<std::size_t>(*count));
    for (long long a = 0; a < *count; ++a) {
      if (in.done())
        throw ParseError(in.line_number() + 1, "file ends after " + std::to_string(a) + " of " +
                                                   std::to_string(*count) + " atoms");
      const auto line = in.next("atom line");
      const auto t = tokens(line);
      if (t.size() < need)
        throw ParseError(in.line_number(), "atom line has " + std::to_string(t.size()) +
                                               " fields, need " + std::to_string(need));
      cfg.species.emplace_back(t[species_col]);
      cfg.positions.push_back({parse_double(t[pos_col], in.line_number(), "coordinate"),
                               parse_double(t[pos_col + 1], in.line_number(), "coordinate"),
                               parse_double(t[pos_col + 2], in.line_number(), "coordinate")});
    }
    frames.push_back(std::move(cfg));
    in.skip_blank();
  }
  if (frames.empty()) throw ParseError(1, "no frames in XYZ input");
  return frames;
}

AtomicConfiguration parse_xyz(std::string_view text) { return parse_xyz_frames(text).front(); }

std::string write_xyz(const AtomicConfiguration& cfg) {
  validate(cfg);
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << cfg.size() << '\n';
  if (cfg.cell) {
    os << "Lattice=\"";
    for (int i = 0; i < 9; ++i) os << (i ? " " : "") << (*cfg.cell)[i / 3][i % 3];
    os << "\" Properties=species:S:1:pos:R:3 pbc=\"";
    for (int k = 0; k < 3; ++k) os << (k ? " " : "") << (cfg.periodic[k] ? 'T' : 'F');
    os << "\"\n";
  } else {
    os << "bondscope\n";
  }
  for (std::size_t a = 0; a < cfg.size(); ++a) {
    const auto& p = cfg.positions[a];
    os << cfg.species[a] << ' ' << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
  }
  return os.str();
}

AtomicConfiguration configuration_of(const BondNetwork& network) {
  if (!network.positions()) throw std::invalid_argument("network carries no positions");
  AtomicConfiguration cfg;
  for (AtomId a = 0; a < network.atom_count(); ++a) cfg.species.push_back(network.species_label(a));
  cfg.positions = *network.positions();
  cfg.cell = network.cell();
  if (cfg.cell) cfg.periodic = {true, true, true};
  return cfg;
}

// --------------------------------------------------------------- LAMMPS dump

std::vector<AtomicConfiguration> parse_lammps_dump_frames(std::string_view text,
                                                          const SpeciesMap& types) {
  std::vector<AtomicConfiguration> frames;
  LineReader in(text);

  long long natoms = -1;
  std::optional<Cell> cell;
  Vec3 origin{};
  std::array<bool, 3> periodic{true, true, true};

  in.skip_blank();
  while (!in.done()) {
    const auto header = trim(in.next("ITEM line"));
    const std::size_t header_line = in.line_number();
    if (header.rfind("ITEM:", 0) != 0)
      throw ParseError(header_line, "expected an ITEM: line, got '" + std::string(header) + "'");
    const auto item = trim(header.substr(5));

    if (item.rfind("NUMBER OF ATOMS", 0) == 0) {
      const auto line = in.next("atom count");
      const auto parsed = parse_number<long long>(line);
      if (!parsed || *parsed < 0) throw ParseError(in.line_number(), "bad atom count");
      natoms = *parsed;
    } else if (item.rfind("BOX BOUNDS", 0) == 0) {
      auto flags = tokens(item.substr(10));
      bool tilted = false;
      if (!flags.empty() && flags[0] == "abc")
        throw ParseError(header_line, "general triclinic boxes are not supported");
      if (flags.size() >= 3 && flags[0] == "xy") {
        tilted = true;
        flags.erase(flags.begin(), flags.begin() + 3);
      }
      periodic = {true, true, true};
      if (flags.size() == 3)
        for (int k = 0; k < 3; ++k) periodic[k] = flags[k] == "pp";
      else if (!flags.empty())
        throw ParseError(header_line, "expected three boundary flags");
      double lo[3], hi[3], tilt[3] = {0, 0, 0};
      for (int k = 0; k < 3; ++k) {
        const auto t = tokens(in.next("box bounds"));
        if (t.size() < (tilted ? 3u : 2u)) throw ParseError(in.line_number(), "short box bounds line");
        lo[k] = parse_double(t[0], in.line_number(), "box bound");
        hi[k] = parse_double(t[1], in.line_number(), "box bound");
        if (tilted) tilt[k] = parse_double(t[2], in.line_number(), "tilt factor");
      }
      const double xy = tilt[0], xz = tilt[1], yz = tilt[2];
      // Dumps store the bounding box of a tilted cell; undo that.
      lo[0] -= std::min({0.0, xy, xz, xy + xz});
      hi[0] -= std::max({0.0, xy, xz, xy + xz});
      lo[1] -= std::min(0.0, yz);
      hi[1] -= std::max(0.0, yz);
      Cell c{};
      c[0] = {hi[0] - lo[0], 0, 0};
      c[1] = {xy, hi[1] - lo[1], 0};
      c[2] = {xz, yz, hi[2] - lo[2]};
      if (!(c[0][0] > 0 && c[1][1] > 0 && c[2][2] > 0))
        throw ParseError(header_line, "box has non-positive extent");
      cell = c;
      origin = {lo[0], lo[1], lo[2]};
    } else if (item.rfind("ATOMS", 0) == 0) {
      if (natoms < 0) throw ParseError(header_line, "ATOMS section before NUMBER OF ATOMS");
      if (!cell) throw ParseError(header_line, "ATOMS section before BOX BOUNDS");
      const auto cols = tokens(item.substr(5));
      auto find = [&](std::initializer_list<std::string_view> names) -> std::optional<std::size_t> {
        for (auto name : names)
          for (std::size_t i = 0; i < cols.size(); ++i)
            if (cols[i] == name) return i;
        return std::nullopt;
      };
      const auto id_col = find({"id"});
      const auto type_col = find({"type"});
      const auto elem_col = find({"element"});
      if (!type_col && !elem_col) throw ParseError(header_line, "no type or element column");
      std::array<std::optional<std::size_t>, 3> pos_col;
      bool scaled = false;
      const std::array<std::array<std::string_view, 4>, 3> names{{{"x", "xu", "xs", "xsu"},
                                                                  {"y", "yu", "ys", "ysu"},
                                                                  {"z", "zu", "zs", "zsu"}}};
      for (int k = 0; k < 3; ++k) {
        for (int v = 0; v < 4 && !pos_col[k]; ++v)
          if ((pos_col[k] = find({names[k][v]}))) {
            if (k == 0) scaled = v >= 2;
            else if (scaled != (v >= 2))
              throw ParseError(header_line, "mixed scaled and unscaled coordinates");
          }
        if (!pos_col[k]) throw ParseError(header_line, "missing coordinate column");
      }

      struct Row {
        long long id;
        std::string label;
        Vec3 p;
      };
      const long long count = natoms;
      std::vector<Row> rows;
      rows.reserve(static_cast<std::size_t>(count));
      const Cell& m = *cell;
      for (long long a = 0; a < count; ++a) {
        const auto t = tokens(in.next("atom line"));
        const std::size_t ln = in.line_number();
        if (t.size() < cols.size())
          throw ParseError(ln, "atom line has " + std::to_string(t.size()) + " fields, header names " +
                                   std::to_string(cols.size()));
        Row row;
        if (id_col) {
          auto id = parse_number<long long>(t[*id_col]);
          if (!id) throw ParseError(ln, "bad atom id '" + std::string(t[*id_col]) + "'");
          row.id = *id;
        } else {
          row.id = a;
        }
        if (elem_col) {
          row.label = std::string(t[*elem_col]);
        } else {
          auto type = parse_number<int>(t[*type_col]);
          if (!type) throw ParseError(ln, "bad atom type '" + std::string(t[*type_col]) + "'");
          auto it = types.find(*type);
          if (it == types.end())
            throw MappingError("line " + std::to_string(ln) + ": atom type " + std::to_string(*type) +
                               " has no species mapping (use e.g. --species-map 1=Si,2=O)");
          row.label = it->second;
        }
        Vec3 v{};
        for (int k = 0; k < 3; ++k) v[k] = parse_double(t[*pos_col[k]], ln, "coordinate");
        if (scaled) {
          for (int j = 0; j < 3; ++j)
            row.p[j] = origin[j] + v[0] * m[0][j] + v[1] * m[1][j] + v[2] * m[2][j];
        } else {
          row.p = v;
        }
        rows.push_back(std::move(row));
      }
      std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.id < b.id; });
      for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].id == rows[i - 1].id)
          throw ParseError(header_line, "duplicate atom id " + std::to_string(rows[i].id));

      AtomicConfiguration cfg;
      cfg.cell = cell;
      cfg.periodic = periodic;
      for (auto& row : rows) {
        cfg.species.push_back(std::move(row.label));
        cfg.positions.push_back(row.p);
      }
      frames.push_back(std::move(cfg));
      natoms = -1;
    } else {
      // TIMESTEP, UNITS, TIME and anything else: skip to the next item.
      while (!in.done() && trim(in.peek()).rfind("ITEM:", 0) != 0) in.next("");
    }
    in.skip_blank();
  }
  if (frames.empty()) throw ParseError(in.line_number(), "no ATOMS section in dump");
  return frames;
}

AtomicConfiguration parse_lammps_dump(std::string_view text, const SpeciesMap& types) {
  return parse_lammps_dump_frames(text, types).front();
}

InputFormat detect_format(const std::filesystem::path& path, std::string_view head) {
  if (path.extension() == ".json") return InputFormat::kNetworkJson;
  if (trim(head).rfind("ITEM:", 0) == 0) return InputFormat::kLammpsDump;
  return InputFormat::kXyz;
}

// ------------------------------------------------------------------ bonding

double minimum_image_distance(const AtomicConfiguration& cfg, const Vec3& p, const Vec3& q) {
  const Frame frame = make_frame(cfg);
  return std::sqrt(frame.min_image_sq(sub(frame.frac(q), frame.frac(p))));
}

BondNetwork build_bond_network(const AtomicConfiguration& cfg, const BondRule& rule,
                               unsigned threads) {
  validate(cfg);
  const Frame frame = make_frame(cfg);
  const double reach = rule.max_cutoff();
  check_minimum_image(frame, reach);
  const CutoffTable cutoffs(cfg, rule);
  const std::size_t n = cfg.size();

  std::vector<Vec3> frac(n);
  for (std::size_t a = 0; a < n; ++a) {
    frac[a] = frame.frac(cfg.positions[a]);
    for (int k = 0; k < 3; ++k)
      if (frame.periodic[k]) frac[a][k] -= std::floor(frac[a][k]);
  }

  // Bins are at least `reach` wide perpendicular to each face, so bonded
  // atoms always sit in the same or adjacent bins.
  std::array<int, 3> nb{1, 1, 1};
  std::array<double, 3> lo{0, 0, 0}, span{1, 1, 1};
  for (int k = 0; k < 3; ++k) {
    if (!frame.periodic[k] && n > 0) {
      double mn = frac[0][k], mx = frac[0][k];
      for (const auto& f : frac) {
        mn = std::min(mn, f[k]);
        mx = std::max(mx, f[k]);
      }
      lo[k] = mn;
      span[k] = std::max(mx - mn, 1e-12);
    }
    if (reach > 0) {
      const double cells = std::floor(span[k] * frame.width[k] / reach);
      nb[k] = static_cast<int>(std::clamp(cells, 1.0, 128.0));
    }
  }
  const std::size_t bin_count = static_cast<std::size_t>(nb[0]) * nb[1] * nb[2];
  auto bin_of = [&](const Vec3& f) {
    std::array<int, 3> b{};
    for (int k = 0; k < 3; ++k)
      b[k] = std::clamp(static_cast<int>((f[k] - lo[k]) / span[k] * nb[k]), 0, nb[k] - 1);
    return b;
  };
  auto linear = [&](int x, int y, int z) {
    return (static_cast<std::size_t>(x) * nb[1] + y) * nb[2] + z;
  };

  std::vector<std::uint32_t> start(bin_count + 1, 0), members(n);
  std::vector<std::size_t> atom_bin(n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto b = bin_of(frac[a]);
    atom_bin[a] = linear(b[0], b[1], b[2]);
    ++start[atom_bin[a] + 1];
  }
  std::partial_sum(start.begin(), start.end(), start.begin());
  {
    auto fill = start;
    for (std::size_t a = 0; a < n; ++a) members[fill[atom_bin[a]]++] = static_cast<std::uint32_t>(a);
  }

  auto bond_if_close = [&](std::uint32_t a, std::uint32_t b, std::vector<Bond>& out) {
    const double c2 = cutoffs(a, b);
    if (c2 < 0) return;
    if (frame.min_image_sq(sub(frac[b], frac[a])) < c2) out.push_back({std::min(a, b), std::max(a, b)});
  };

  auto scan = [&](std::size_t begin, std::size_t end, std::vector<Bond>& out) {
    std::vector<std::size_t> near;
    for (std::size_t bin = begin; bin < end; ++bin) {
      const int x = static_cast<int>(bin / (static_cast<std::size_t>(nb[1]) * nb[2]));
      const int y = static_cast<int>(bin / nb[2] % nb[1]);
      const int z = static_cast<int>(bin % nb[2]);
      near.clear();
      for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy)
          for (int dz = -1; dz <= 1; ++dz) {
            std::array<int, 3> c{x + dx, y + dy, z + dz};
            bool ok = true;
            for (int k = 0; k < 3; ++k) {
              if (frame.periodic[k]) c[k] = (c[k] % nb[k] + nb[k]) % nb[k];
              else if (c[k] < 0 || c[k] >= nb[k]) ok = false;
            }
            if (ok) near.push_back(linear(c[0], c[1], c[2]));
          }
      std::sort(near.begin(), near.end());
      near.erase(std::unique(near.begin(), near.end()), near.end());
      for (std::size_t other : near) {
        if (other < bin) continue;
        for (auto i = start[bin]; i < start[bin + 1]; ++i) {
          const auto first = other == bin ? i + 1 : start[other];
          for (auto j = first; j < start[other + 1]; ++j) bond_if_close(members[i], members[j], out);
        }
      }
    }
  };

  std::vector<Bond> bonds;
  if (reach > 0) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(bin_count)));
    if (threads == 1) {
      scan(0, bin_count, bonds);
    } else {
      std::vector<std::vector<Bond>> parts(threads);
      {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (bin_count + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t)
          pool.emplace_back([&, t] {
            scan(std::min(bin_count, t * chunk), std::min(bin_count, (t + 1) * chunk), parts[t]);
          });
      }
      for (auto& p : parts) bonds.insert(bonds.end(), p.begin(), p.end());
    }
  }
  return BondNetwork(cfg.species, std::move(bonds), cfg.positions, cfg.cell);
}

BondNetwork build_bond_network_brute_force(const AtomicConfiguration& cfg, const BondRule& rule) {
  validate(cfg);
  const Frame frame = make_frame(cfg);
  check_minimum_image(frame, rule.max_cutoff());
  std::vector<Bond> bonds;
  for (std::uint32_t a = 0; a < cfg.size(); ++a)
    for (std::uint32_t b = a + 1; b < cfg.size(); ++b) {
      auto c = rule.cutoff(cfg.species[a], cfg.species[b]);
      if (!c) continue;
      const Vec3 d = sub(cfg.positions[b], cfg.positions[a]);
      double best = std::numeric_limits<double>::infinity();
      // Plain Cartesian image sum over a generous range, no fractional wrap.
      const int ra = frame.periodic[0] ? 2 : 0, rb = frame.periodic[1] ? 2 : 0,
                rc = frame.periodic[2] ? 2 : 0;
      for (int i = -ra; i <= ra; ++i)
        for (int j = -rb; j <= rb; ++j)
          for (int k = -rc; k <= rc; ++k) {
            Vec3 r = d;
            for (int x = 0; x < 3; ++x)
              r[x] += i * frame.m[0][x] + j * frame.m[1][x] + k * frame.m[2][x];
            best = std::min(best, dot(r, r));
          }
      if (best < *c * *c) bonds.push_back({a, b});
    }
  return BondNetwork(cfg.species, std::move(bonds), cfg.positions, cfg.cell);
}

double cutoff_stability(const AtomicConfiguration& cfg, const BondRule& rule, int radius,
                        double delta, DescriptorTag tag, const RootFilter& filter,
                        const ClassifyOptions& options) {
  if (!(delta >= 0)) throw std::invalid_argument("cutoff delta must be non-negative");
  const unsigned threads = std::max(1u, options.threads);
  const auto mid = build_bond_network(cfg, rule, threads);
  const auto roots = select_roots(mid, filter);
  if (roots.empty()) throw std::invalid_argument("no roots selected for cutoff stability");
  if (delta == 0) return 1.0;
  const auto lower = build_bond_network(cfg, rule.shifted(-delta), threads);
  const auto upper = build_bond_network(cfg, rule.shifted(delta), threads);

  const auto k_mid = classify_roots(mid, roots, tag, radius, options);
  const auto k_lo = classify_roots(lower, roots, tag, radius, options);
  const auto k_hi = classify_roots(upper, roots, tag, radius, options);
  std::size_t stable = 0;
  for (std::size_t i = 0; i < roots.size(); ++i)
    if (k_mid[i] == k_lo[i] && k_mid[i] == k_hi[i]) ++stable;
  return static_cast<double>(stable) / static_cast<double>(roots.size());
}

// ------------------------------------------------------------- network JSON

std::string network_to_json(const BondNetwork& network) {
  nlohmann::ordered_json doc;
  auto species = nlohmann::ordered_json::array();
  for (AtomId a = 0; a < network.atom_count(); ++a) species.push_back(network.species_label(a));
  doc["species"] = std::move(species);
  auto bonds = nlohmann::ordered_json::array();
  for (const auto& b : network.bonds()) bonds.push_back({b.a, b.b});
  doc["bonds"] = std::move(bonds);
  if (network.positions()) doc["positions"] = *network.positions();
  if (network.cell()) doc["cell"] = *network.cell();
  return doc.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

BondNetwork network_from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    const auto species = doc.at("species").get<std::vector<std::string>>();
    std::vector<Bond> bonds;
    for (const auto& b : doc.at("bonds")) {
      if (!b.is_array() || b.size() != 2) throw std::invalid_argument("bond entries are [a, b] pairs");
      bonds.push_back({b[0].get<AtomId>(), b[1].get<AtomId>()});
    }
    std::optional<std::vector<Vec3>> positions;
    std::optional<Cell> cell;
    if (doc.contains("positions")) positions = doc["positions"].get<std::vector<Vec3>>();
    if (doc.contains("cell")) cell = doc["cell"].get<Cell>();
    return BondNetwork(species, std::move(bonds), std::move(positions), cell);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed network file: ") + e.what());
  }
}

std::vector<BondNetwork> load_networks(const std::filesystem::path& path,
                                       const LoadOptions& options) {
  const std::string text = read_file(path);
  std::vector<AtomicConfiguration> frames;
  switch (detect_format(path, std::string_view(text).substr(0, 256))) {
    case InputFormat::kNetworkJson: {
      std::vector<BondNetwork> out;
      out.push_back(network_from_json(text));
      return out;
    }
    case InputFormat::kLammpsDump:
      frames = parse_lammps_dump_frames(text, options.species_map);
      break;
    case InputFormat::kXyz:
      frames = parse_xyz_frames(text);
      break;
  }
  std::vector<BondNetwork> out;
  out.reserve(frames.size());
  for (const auto& cfg : frames) out.push_back(build_bond_network(cfg, options.rule, options.threads));
  return out;
}

}  // namespace bondscope
