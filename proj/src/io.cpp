#include "bondscope/io.hpp"

#include <sodium.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

namespace bondscope {

namespace {

constexpr int kB64Variant = sodium_base64_VARIANT_ORIGINAL;

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v, int precision = 10) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

}  // namespace

std::string base64_encode(std::string_view bytes) {
  std::string out(sodium_base64_encoded_len(bytes.size(), kB64Variant), '\0');
  sodium_bin2base64(out.data(), out.size(), reinterpret_cast<const unsigned char*>(bytes.data()),
                    bytes.size(), kB64Variant);
  out.resize(out.size() - 1);  // trailing NUL
  return out;
}

std::string base64_decode(std::string_view text) {
  std::string out(text.size() / 4 * 3 + 3, '\0');
  std::size_t len = 0;
  const char* end = nullptr;
  if (sodium_base642bin(reinterpret_cast<unsigned char*>(out.data()), out.size(), text.data(),
                        text.size(), nullptr, &len, &end, kB64Variant) != 0 ||
      end != text.data() + text.size())
    throw std::invalid_argument("malformed base64 key '" + std::string(text) + "'");
  out.resize(len);
  return out;
}

std::string distribution_to_json(const EmpiricalDistribution& dist) {
  nlohmann::ordered_json doc;
  doc["descriptor"] = to_string(dist.tag());
  doc["radius"] = dist.radius();
  doc["source"] = dist.source();
  doc["total"] = dist.total();
  auto classes = nlohmann::ordered_json::array();
  for (const auto& [payload, count] : dist.counts()) {
    nlohmann::ordered_json c;
    c["key"] = base64_encode(payload);
    c["label"] = render_payload(dist.tag(), payload);
    c["count"] = count;
    classes.push_back(std::move(c));
  }
  doc["classes"] = std::move(classes);
  return doc.dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::replace) + "\n";
}

EmpiricalDistribution distribution_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    const auto tag_name = doc.at("descriptor").get<std::string>();
    const auto tag = parse_descriptor_tag(tag_name);
    if (!tag) throw std::invalid_argument("unknown descriptor '" + tag_name + "'");
    EmpiricalDistribution dist(*tag, doc.at("radius").get<int>(),
                               doc.value("source", std::string{}));
    for (const auto& c : doc.at("classes")) {
      const auto count = c.at("count").get<std::uint64_t>();
      if (count == 0) throw std::invalid_argument("class with zero count");
      const auto payload = base64_decode(c.at("key").get<std::string>());
      if (dist.count(payload) != 0) throw std::invalid_argument("duplicate class key");
      dist.add(payload, count);
    }
    if (dist.total() != doc.at("total").get<std::uint64_t>())
      throw std::invalid_argument("total does not match the class counts");
    return dist;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed distribution file: ") + e.what());
  }
}

std::string report_to_csv(const ComparisonReport& report) {
  std::ostringstream os;
  os << "key,f1,f2,r1,r2\n";
  for (const auto& row : report.rows)
    os << csv_field(render_payload(report.tag, row.payload)) << ',' << num(row.f1) << ','
       << num(row.f2) << ',' << row.r1 << ',' << row.r2 << '\n';
  return os.str();
}

std::string curve_to_csv(DescriptorTag tag, const std::vector<CurvePoint>& curve) {
  std::ostringstream os;
  os << "rank,key";
  const std::size_t series = curve.empty() ? 0 : curve.front().frequency.size();
  for (std::size_t s = 0; s < series; ++s) os << ",f" << s + 1 << ",se" << s + 1;
  os << '\n';
  for (const auto& p : curve) {
    os << p.rank << ',' << csv_field(render_payload(tag, p.payload));
    for (std::size_t s = 0; s < p.frequency.size(); ++s)
      os << ',' << num(p.frequency[s]) << ',' << num(p.standard_error[s]);
    os << '\n';
  }
  return os.str();
}

std::string barcode_to_svg(const Barcode& bc, int radius, std::string_view title) {
  const int left = 40, top = 30, unit = 60, row = 18;
  const int width = left * 2 + unit * std::max(radius, 1);
  const int height = top + row * static_cast<int>(bc.intervals.size()) + 40;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  if (!title.empty())
    os << "  <text x=\"" << left << "\" y=\"18\">" << xml_escape(title) << "</text>\n";
  const int axis_y = height - 25;
  for (int k = 0; k <= radius; ++k) {
    const int x = left + unit * k;
    os << "  <line x1=\"" << x << "\" y1=\"" << top - 5 << "\" x2=\"" << x << "\" y2=\"" << axis_y
       << "\" stroke=\"#ddd\"/>\n";
    os << "  <text x=\"" << x - 3 << "\" y=\"" << axis_y + 15 << "\">" << k << "</text>\n";
  }
  for (std::size_t i = 0; i < bc.intervals.size(); ++i) {
    const auto& iv = bc.intervals[i];
    const int y = top + row * static_cast<int>(i) + row / 2;
    const int x0 = left + unit * iv.lo, x1 = left + unit * iv.hi;
    if (x0 == x1)
      os << "  <circle cx=\"" << x0 << "\" cy=\"" << y << "\" r=\"4\" fill=\"#1f77b4\"/>\n";
    else
      os << "  <line x1=\"" << x0 << "\" y1=\"" << y << "\" x2=\"" << x1 << "\" y2=\"" << y
         << "\" stroke=\"#1f77b4\" stroke-width=\"6\" stroke-linecap=\"round\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string curve_to_svg(const std::vector<CurvePoint>& curve,
                         const std::vector<std::string>& series_names) {
  static constexpr std::array<std::string_view, 6> kColors{"#1f77b4", "#d62728", "#2ca02c",
                                                           "#9467bd", "#ff7f0e", "#8c564b"};
  const double w = 640, h = 420, left = 60, right = 20, top = 20, bottom = 40;
  double fmin = 1.0;
  for (const auto& p : curve)
    for (double f : p.frequency)
      if (f > 0) fmin = std::min(fmin, f);
  const double lo = std::floor(std::log10(fmin)), hi = 0.0;
  const double span = std::max(hi - lo, 1.0);
  const double n = static_cast<double>(std::max<std::size_t>(curve.size(), 2) - 1);
  auto px = [&](std::size_t i) { return left + (w - left - right) * static_cast<double>(i) / n; };
  auto py = [&](double f) {
    const double l = std::log10(std::max(f, std::pow(10.0, lo)));
    return top + (h - top - bottom) * (hi - l) / span;
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double e = lo; e <= hi; e += 1.0)
    os << "  <line x1=\"" << left << "\" y1=\"" << num(py(std::pow(10.0, e)), 6) << "\" x2=\""
       << w - right << "\" y2=\"" << num(py(std::pow(10.0, e)), 6)
       << "\" stroke=\"#eee\"/>\n  <text x=\"5\" y=\"" << num(py(std::pow(10.0, e)) + 4, 6)
       << "\">1e" << e << "</text>\n";
  const std::size_t series = curve.empty() ? 0 : curve.front().frequency.size();
  for (std::size_t s = 0; s < series; ++s) {
    const auto color = kColors[s % kColors.size()];
    auto polyline = [&](auto value, std::string_view style) {
      os << "  <polyline fill=\"none\" stroke=\"" << color << "\" " << style << " points=\"";
      for (std::size_t i = 0; i < curve.size(); ++i)
        os << (i ? " " : "") << num(px(i), 6) << ',' << num(py(value(curve[i])), 6);
      os << "\"/>\n";
    };
    polyline([&](const CurvePoint& p) { return p.frequency[s]; }, "stroke-width=\"1.5\"");
    polyline([&](const CurvePoint& p) { return p.frequency[s] + p.standard_error[s]; },
             "stroke-dasharray=\"3,3\"");
    polyline([&](const CurvePoint& p) { return p.frequency[s] - p.standard_error[s]; },
             "stroke-dasharray=\"3,3\"");
    const std::string name = s < series_names.size() ? series_names[s] : "series " + std::to_string(s + 1);
    os << "  <text x=\"" << w - 200 << "\" y=\"" << top + 14 * (s + 1) << "\" fill=\"" << color
       << "\">" << xml_escape(name) << "</text>\n";
  }
  os << "  <text x=\"" << w / 2 - 20 << "\" y=\"" << h - 8 << "\">rank</text>\n</svg>\n";
  return os.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::random_device rd;
  auto tmp = path;
  tmp += ".tmp" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot replace '" + path.string() + "'");
  }
}

}  // namespace bondscope
