#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "recurlab/index_window.hpp"

namespace recur {

/// An exact ratio count / (length) together with its value as a double.
struct CountRatio {
  std::uint64_t count = 0;
  std::uint64_t length = 1;
  double value() const { return static_cast<double>(count) / static_cast<double>(length); }
};

/// a < b on exact ratios.
bool ratio_less(const CountRatio& a, const CountRatio& b);

struct SyndeticCertificate {
  bool certified = false;
  /// Largest gap between consecutive elements, counting the leading gap from 0.
  std::uint64_t max_gap = 0;
  std::uint64_t leading_gap = 0;
  /// H - last element. Censored: it only enters as a lower bound on a real gap.
  std::uint64_t trailing_gap = 0;
  std::uint64_t cap = 0;
  bool empty = false;
};

/// Passes iff A is nonempty, every observed gap is <= cap, and the censored
/// trailing stretch is shorter than cap. Default cap is floor(sqrt(H)).
SyndeticCertificate syndetic_certificate(const IndexWindow& a, std::optional<std::uint64_t> cap = {});

struct DensityReport {
  double lower_est = 0;
  double upper_est = 0;
  double banach_upper_est = 0;
  CountRatio lower;
  CountRatio upper;
  /// Sliding maximum at the largest schedule length, before clamping by upper.
  CountRatio banach_raw;
  std::uint64_t lower_at = 0;
  std::uint64_t upper_at = 0;
  /// Empty when the syndetic certificate fails ("unbounded").
  std::optional<std::uint64_t> max_gap;
  SyndeticCertificate syndetic;
  std::uint64_t burn_in = 0;
  std::vector<std::uint64_t> schedule;
  std::vector<std::pair<std::uint64_t, double>> running_density_curve;
  std::vector<std::pair<std::uint64_t, double>> banach_curve;
};

/// floor(H^(1/2)), floor(H^(2/3)), floor(H^(3/4)), deduplicated.
std::vector<std::uint64_t> default_window_schedule(std::uint64_t horizon);

/// max over m <= H - L of card(A ∩ [m, m+L]), with length L + 1.
CountRatio sliding_window_max(const IndexWindow& a, std::uint64_t length);

DensityReport density_report(const IndexWindow& a, std::uint64_t burn_in,
                             const std::vector<std::uint64_t>& window_schedule);
DensityReport density_report(const IndexWindow& a, std::uint64_t burn_in);

/// All sums of at most `depth` distinct generators that are <= horizon.
IndexWindow ip_generate(const std::vector<std::uint64_t>& generators, std::uint64_t depth,
                        std::uint64_t horizon);

struct IpProbeResult {
  enum class Kind { ArithmeticCertificate, FalsifiedByIpWitness, Inconclusive };
  Kind kind = Kind::Inconclusive;
  std::uint64_t modulus = 0;
  std::vector<std::uint64_t> generators;
  std::uint64_t budget_used = 0;
};

struct IpProbeOptions {
  std::uint64_t budget = 8;
  std::uint64_t seed = 0;
  /// Generators a falsifier must collect; 0 means ceil(sqrt(H) / 2).
  std::uint64_t min_generators = 0;
};

/// Looks for k N0 ⊆ A with k <= sqrt(H), then for a fully observed finite
/// IP set avoiding A. Never claims more than the arithmetic certificate.
IpProbeResult ip_star_probe(const IndexWindow& a, const IpProbeOptions& options = {});
std::string to_string(const IpProbeResult& r);

/// A piece of a CuSP partition.
struct ResiduePredicate {
  std::uint64_t modulus = 1;
  std::vector<std::uint64_t> residues;
};
struct IntervalPredicate {
  /// Closed intervals; UINT64_MAX as upper end means unbounded.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> intervals;
};
using IndexPredicate = std::variant<ResiduePredicate, IntervalPredicate>;

bool holds(const IndexPredicate& p, std::uint64_t n);
std::string to_string(const IndexPredicate& p);
IndexPredicate parse_index_predicate(std::string_view text);

struct CuspInstance {
  std::vector<IndexPredicate> partition;
  std::vector<std::uint64_t> shifts;

  std::uint64_t max_shift() const;
  std::uint64_t min_shift() const;
  std::string to_string() const;
  /// `residue(2; 0) + 0 | residue(2; 1) + 1`
  static CuspInstance parse(std::string_view text);
};

/// ∪_j (n_j + A ∩ I_j) on horizon H + max shift. Elements above H + min shift
/// can be missing, since they may come from beyond the observed horizon.
IndexWindow cusp_transform(const IndexWindow& a, const CuspInstance& inst);

}  // namespace recur
