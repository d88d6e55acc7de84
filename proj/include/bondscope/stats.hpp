#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bondscope/descriptor.hpp"
#include "bondscope/network.hpp"

namespace bondscope {

/// Counts of descriptor payloads over a set of roots. Keys are ordered by
/// payload bytes, which fixes every iteration order downstream.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  EmpiricalDistribution(DescriptorTag tag, int radius, std::string source = {})
      : tag_(tag), radius_(radius), source_(std::move(source)) {}

  void add(const std::string& payload, std::uint64_t count = 1);
  /// Adds another distribution's counts. An empty distribution adopts the
  /// other's tag and radius; otherwise a mismatch throws std::invalid_argument.
  void merge(const EmpiricalDistribution& other);

  DescriptorTag tag() const { return tag_; }
  int radius() const { return radius_; }
  const std::string& source() const { return source_; }
  void set_source(std::string source) { source_ = std::move(source); }

  std::uint64_t total() const { return total_; }
  std::size_t class_count() const { return counts_.size(); }
  const std::map<std::string, std::uint64_t>& counts() const { return counts_; }
  std::uint64_t count(const std::string& payload) const;
  double frequency(const std::string& payload) const;

  friend bool operator==(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    return a.tag_ == b.tag_ && a.radius_ == b.radius_ && a.total_ == b.total_ &&
           a.counts_ == b.counts_;
  }

 private:
  DescriptorTag tag_{};
  int radius_ = 0;
  std::string source_;
  std::uint64_t total_ = 0;
  std::map<std::string, std::uint64_t> counts_;
};

using RootFilter = std::function<bool(const BondNetwork&, AtomId)>;

/// Roots with the given species label; every atom when the label is empty.
RootFilter species_filter(std::string label);

struct ClassifyOptions {
  DescribeOptions describe;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 1;
};

std::vector<AtomId> select_roots(const BondNetwork& network, const RootFilter& filter);

/// Payload of the radius-r descriptor for each root, in the order given.
/// Per-root work is split across threads; output order never depends on the
/// thread count.
std::vector<std::string> classify_roots(const BondNetwork& network, std::span<const AtomId> roots,
                                        DescriptorTag tag, int radius,
                                        const ClassifyOptions& options = {});

/// Throws std::invalid_argument when the filter leaves no roots.
EmpiricalDistribution classify_all(const BondNetwork& network, DescriptorTag tag, int radius,
                                   const RootFilter& filter = {},
                                   const ClassifyOptions& options = {});

/// Natural-log Shannon entropy.
double shannon_entropy(const EmpiricalDistribution& p);
/// H / log(total), in [0,1]; 0 when total == 1.
double scaled_entropy(const EmpiricalDistribution& p);

/// Joint counts of two descriptors evaluated on the same roots.
class JointDistribution {
 public:
  /// Throws std::invalid_argument when the key lists differ in length or are
  /// empty.
  static JointDistribution from_keys(const std::vector<std::string>& x,
                                     const std::vector<std::string>& y);

  std::uint64_t total() const { return total_; }
  const std::map<std::pair<std::string, std::string>, std::uint64_t>& counts() const {
    return counts_;
  }
  const std::map<std::string, std::uint64_t>& marginal_x() const { return x_; }
  const std::map<std::string, std::uint64_t>& marginal_y() const { return y_; }

 private:
  std::uint64_t total_ = 0;
  std::map<std::pair<std::string, std::string>, std::uint64_t> counts_;
  std::map<std::string, std::uint64_t> x_, y_;
};

double entropy_of_counts(const std::map<std::string, std::uint64_t>& counts, std::uint64_t total);

double mutual_information(const JointDistribution& joint);
/// U(X|Y) = I(X;Y) / H(X). Throws UndefinedUncertaintyError when H(X) == 0.
double uncertainty_coefficient(const JointDistribution& joint);

/// D(P||Q) with p log(p/q) taken as 0 whenever p or q is zero.
double kl_divergence(const EmpiricalDistribution& p, const EmpiricalDistribution& q);
/// D(P||Q) + D(Q||P). Throws std::invalid_argument on tag or radius mismatch.
/// With smoothing > 0, that pseudo-count is added to every class in the union
/// of both supports before normalising.
double symmetrized_kl(const EmpiricalDistribution& p, const EmpiricalDistribution& q,
                      double smoothing = 0.0);

enum class SortMode { kF1, kF1MinusF2, kF2MinusF1 };
std::string_view to_string(SortMode mode);
std::optional<SortMode> parse_sort_mode(std::string_view name);

struct ComparisonRow {
  std::string payload;
  double f1 = 0, f2 = 0;
  /// 1-based ranks by descending frequency, ties broken by payload bytes.
  /// Classes missing from a distribution rank after all of its observed ones.
  std::size_t r1 = 0, r2 = 0;
};

struct ComparisonReport {
  DescriptorTag tag{};
  int radius = 0;
  SortMode mode = SortMode::kF1;
  std::vector<ComparisonRow> rows;
  double divergence = 0;
};

/// Top `top_n` classes of the union support under `mode`. Throws
/// std::invalid_argument for top_n < 1 or mismatched distributions.
ComparisonReport ranked_diff_table(const EmpiricalDistribution& p, const EmpiricalDistribution& q,
                                   SortMode mode, std::size_t top_n);

/// Binomial standard error sqrt(p(1-p)/total) of every class frequency.
std::map<std::string, double> frequency_standard_error(const EmpiricalDistribution& p);

/// Rank-frequency curve: classes ranked by frequency in the reference
/// distribution, with each other distribution's frequency and standard error
/// for the same class. Index 0 of `frequency` and `standard_error` is the
/// reference itself.
struct CurvePoint {
  std::size_t rank = 0;
  std::string payload;
  std::vector<double> frequency;
  std::vector<double> standard_error;
};
std::vector<CurvePoint> rank_frequency_curve(const EmpiricalDistribution& reference,
                                             const std::vector<const EmpiricalDistribution*>& others,
                                             std::size_t top_n);

}  // namespace bondscope
