#include "bondscope/stats.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "bondscope/environment.hpp"
#include "bondscope/errors.hpp"

namespace bondscope {

namespace {

void require_comparable(const EmpiricalDistribution& p, const EmpiricalDistribution& q) {
  if (p.tag() != q.tag() || p.radius() != q.radius())
    throw std::invalid_argument("distributions differ in descriptor or radius: " +
                                std::string(to_string(p.tag())) + "/" +
                                std::to_string(p.radius()) + " vs " +
                                std::string(to_string(q.tag())) + "/" +
                                std::to_string(q.radius()));
}

double xlogx_ratio(double a, double b) { return a > 0 && b > 0 ? a * std::log(a / b) : 0.0; }

// 1-based rank of every payload in `universe` by descending count in `counts`,
// ties broken by payload; absent payloads rank after all present ones.
std::map<std::string, std::size_t> ranks(const std::map<std::string, std::uint64_t>& counts,
                                         const std::set<std::string>& universe) {
  std::vector<std::pair<std::uint64_t, const std::string*>> order;
  order.reserve(universe.size());
  for (const auto& key : universe) {
    auto it = counts.find(key);
    order.emplace_back(it == counts.end() ? 0 : it->second, &key);
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < order.size(); ++i) out[*order[i].second] = i + 1;
  return out;
}

}  // namespace

void EmpiricalDistribution::add(const std::string& payload, std::uint64_t count) {
  if (count == 0) return;
  counts_[payload] += count;
  total_ += count;
}

void EmpiricalDistribution::merge(const EmpiricalDistribution& other) {
  if (total_ == 0) {
    tag_ = other.tag_;
    radius_ = other.radius_;
  }
  require_comparable(*this, other);
  for (const auto& [key, count] : other.counts_) add(key, count);
}

std::uint64_t EmpiricalDistribution::count(const std::string& payload) const {
  auto it = counts_.find(payload);
  return it == counts_.end() ? 0 : it->second;
}

double EmpiricalDistribution::frequency(const std::string& payload) const {
  return total_ == 0 ? 0.0 : static_cast<double>(count(payload)) / static_cast<double>(total_);
}

RootFilter species_filter(std::string label) {
  if (label.empty()) return {};
  return [label = std::move(label)](const BondNetwork& network, AtomId a) {
    return network.species_label(a) == label;
  };
}

std::vector<AtomId> select_roots(const BondNetwork& network, const RootFilter& filter) {
  std::vector<AtomId> roots;
  for (AtomId a = 0; a < network.atom_count(); ++a)
    if (!filter || filter(network, a)) roots.push_back(a);
  return roots;
}

std::vector<std::string> classify_roots(const BondNetwork& network, std::span<const AtomId> roots,
                                        DescriptorTag tag, int radius,
                                        const ClassifyOptions& options) {
  std::vector<std::string> keys(roots.size());
  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(roots.size())));

  auto work = [&](std::size_t begin, std::size_t end) {
    EnvironmentExtractor extractor(network);
    for (std::size_t i = begin; i < end; ++i)
      keys[i] = describe(extractor.extract(roots[i], radius), tag, options.describe).payload;
  };
  if (threads <= 1) {
    work(0, roots.size());
    return keys;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  const std::size_t chunk = (roots.size() + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk, end = std::min(roots.size(), begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        work(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return keys;
}

EmpiricalDistribution classify_all(const BondNetwork& network, DescriptorTag tag, int radius,
                                   const RootFilter& filter, const ClassifyOptions& options) {
  const auto roots = select_roots(network, filter);
  if (roots.empty()) throw std::invalid_argument("no roots selected for classification");
  EmpiricalDistribution dist(tag, radius);
  for (const auto& key : classify_roots(network, roots, tag, radius, options)) dist.add(key);
  return dist;
}

double entropy_of_counts(const std::map<std::string, std::uint64_t>& counts, std::uint64_t total) {
  if (total == 0) return 0.0;
  double h = 0.0;
  const double n = static_cast<double>(total);
  for (const auto& [key, count] : counts) {
    if (count == 0) continue;
    const double p = static_cast<double>(count) / n;
    h -= p * std::log(p);
  }
  return std::max(0.0, h);
}

double shannon_entropy(const EmpiricalDistribution& p) {
  return entropy_of_counts(p.counts(), p.total());
}

double scaled_entropy(const EmpiricalDistribution& p) {
  if (p.total() <= 1) return 0.0;
  return shannon_entropy(p) / std::log(static_cast<double>(p.total()));
}

JointDistribution JointDistribution::from_keys(const std::vector<std::string>& x,
                                               const std::vector<std::string>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("joint distribution needs the same roots for both descriptors");
  if (x.empty()) throw std::invalid_argument("joint distribution over no roots");
  JointDistribution j;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ++j.counts_[{x[i], y[i]}];
    ++j.x_[x[i]];
    ++j.y_[y[i]];
  }
  j.total_ = x.size();
  return j;
}

double mutual_information(const JointDistribution& joint) {
  const double n = static_cast<double>(joint.total());
  double info = 0.0;
  for (const auto& [xy, count] : joint.counts()) {
    const double pxy = static_cast<double>(count) / n;
    const double px = static_cast<double>(joint.marginal_x().at(xy.first)) / n;
    const double py = static_cast<double>(joint.marginal_y().at(xy.second)) / n;
    info += pxy * std::log(pxy / (px * py));
  }
  return info;
}

double uncertainty_coefficient(const JointDistribution& joint) {
  const double hx = entropy_of_counts(joint.marginal_x(), joint.total());
  if (hx <= 0.0)
    throw UndefinedUncertaintyError("U(X|Y) is undefined: X places every root in one class");
  return mutual_information(joint) / hx;
}

double kl_divergence(const EmpiricalDistribution& p, const EmpiricalDistribution& q) {
  require_comparable(p, q);
  double d = 0.0;
  for (const auto& [key, count] : p.counts())
    d += xlogx_ratio(p.frequency(key), q.frequency(key));
  return d;
}

double symmetrized_kl(const EmpiricalDistribution& p, const EmpiricalDistribution& q,
                      double smoothing) {
  require_comparable(p, q);
  if (smoothing <= 0.0) return kl_divergence(p, q) + kl_divergence(q, p);

  std::set<std::string> support;
  for (const auto& [key, c] : p.counts()) support.insert(key);
  for (const auto& [key, c] : q.counts()) support.insert(key);
  const double k = static_cast<double>(support.size());
  const double np = static_cast<double>(p.total()) + smoothing * k;
  const double nq = static_cast<double>(q.total()) + smoothing * k;
  double d = 0.0;
  for (const auto& key : support) {
    const double a = (static_cast<double>(p.count(key)) + smoothing) / np;
    const double b = (static_cast<double>(q.count(key)) + smoothing) / nq;
    d += xlogx_ratio(a, b) + xlogx_ratio(b, a);
  }
  return d;
}

std::string_view to_string(SortMode mode) {
  switch (mode) {
    case SortMode::kF1: return "f1";
    case SortMode::kF1MinusF2: return "f1-f2";
    case SortMode::kF2MinusF1: return "f2-f1";
  }
  return {};
}

std::optional<SortMode> parse_sort_mode(std::string_view name) {
  for (auto mode : {SortMode::kF1, SortMode::kF1MinusF2, SortMode::kF2MinusF1})
    if (to_string(mode) == name) return mode;
  return std::nullopt;
}

ComparisonReport ranked_diff_table(const EmpiricalDistribution& p, const EmpiricalDistribution& q,
                                   SortMode mode, std::size_t top_n) {
  require_comparable(p, q);
  if (top_n < 1) throw std::invalid_argument("top-n must be at least 1");

  std::set<std::string> universe;
  for (const auto& [key, c] : p.counts()) universe.insert(key);
  for (const auto& [key, c] : q.counts()) universe.insert(key);
  const auto rank_p = ranks(p.counts(), universe);
  const auto rank_q = ranks(q.counts(), universe);

  ComparisonReport report{p.tag(), p.radius(), mode, {}, symmetrized_kl(p, q)};
  for (const auto& key : universe)
    report.rows.push_back({key, p.frequency(key), q.frequency(key), rank_p.at(key), rank_q.at(key)});

  // Sort on exact integer cross-products so ties are genuine ties.
  const auto np = static_cast<long double>(p.total()), nq = static_cast<long double>(q.total());
  auto score = [&](const ComparisonRow& row) -> long double {
    const long double a = static_cast<long double>(p.count(row.payload)) * nq;
    const long double b = static_cast<long double>(q.count(row.payload)) * np;
    switch (mode) {
      case SortMode::kF1: return a;
      case SortMode::kF1MinusF2: return a - b;
      case SortMode::kF2MinusF1: return b - a;
    }
    return 0;
  };
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [&](const ComparisonRow& a, const ComparisonRow& b) { return score(a) > score(b); });
  if (report.rows.size() > top_n) report.rows.resize(top_n);
  return report;
}

std::map<std::string, double> frequency_standard_error(const EmpiricalDistribution& p) {
  std::map<std::string, double> out;
  for (const auto& [key, count] : p.counts()) {
    const double f = p.frequency(key);
    out[key] = std::sqrt(f * (1.0 - f) / static_cast<double>(p.total()));
  }
  return out;
}

std::vector<CurvePoint> rank_frequency_curve(const EmpiricalDistribution& reference,
                                             const std::vector<const EmpiricalDistribution*>& others,
                                             std::size_t top_n) {
  std::set<std::string> universe;
  for (const auto& [key, c] : reference.counts()) universe.insert(key);
  const auto rank = ranks(reference.counts(), universe);
  std::vector<std::pair<std::size_t, std::string>> order;
  for (const auto& [key, r] : rank) order.emplace_back(r, key);
  std::sort(order.begin(), order.end());
  if (order.size() > top_n) order.resize(top_n);

  auto se = [](const EmpiricalDistribution& d, const std::string& key) {
    if (d.total() == 0) return 0.0;
    const double f = d.frequency(key);
    return std::sqrt(f * (1.0 - f) / static_cast<double>(d.total()));
  };
  std::vector<CurvePoint> curve;
  for (const auto& [r, key] : order) {
    CurvePoint point{r, key, {reference.frequency(key)}, {se(reference, key)}};
    for (const auto* other : others) {
      require_comparable(reference, *other);
      point.frequency.push_back(other->frequency(key));
      point.standard_error.push_back(se(*other, key));
    }
    curve.push_back(std::move(point));
  }
  return curve;
}

}  // namespace bondscope
