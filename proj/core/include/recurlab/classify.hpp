#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "recurlab/families.hpp"
#include "recurlab/orbit.hpp"

namespace recur {

/// Recurrence classes, weakest first.
enum class Label { None, Recurrent, Reiterative, UpperFrequent, Frequent, Uniform, IpStar, Periodic };

std::string to_string(Label l);
/// Frequent and everything above it.
inline bool at_least(Label l, Label floor) { return static_cast<int>(l) >= static_cast<int>(floor); }

struct Thresholds {
  double delta_low = 0.01;
  double delta_up = 0.01;
  double delta_bd = 0.01;
  std::uint64_t m_min = 20;
  /// Both default to N/10.
  std::optional<std::uint64_t> burn_in;
  std::optional<std::uint64_t> margin;
  std::uint64_t ip_budget = 8;
  std::uint64_t seed = 0;

  std::uint64_t burn_in_for(std::uint64_t horizon) const { return burn_in.value_or(horizon / 10); }
  std::uint64_t margin_for(std::uint64_t horizon) const { return margin.value_or(horizon / 10); }
  /// delta_low >= delta_up >= delta_bd, so the density tiers nest.
  void validate() const;
  std::string to_string() const;
};

/// Everything measured on one return-set window.
struct WindowEvidence {
  DensityReport density;
  IpProbeResult ip;
  bool infinite = false;
  bool reiterative = false;
  bool upper_frequent = false;
  bool frequent = false;
  bool uniform = false;
  bool ip_star = false;
  /// The window is exactly d N0 on [0, N].
  std::optional<std::uint64_t> progression;
};

WindowEvidence window_evidence(const IndexWindow& w, const Thresholds& t);

struct EpsilonEvidence {
  Rational epsilon;
  WindowEvidence evidence;
  std::size_t returns = 0;
};

struct RecurrenceVerdict {
  Label label = Label::None;
  std::optional<std::uint64_t> period;
  /// Ordered by epsilon, largest first.
  std::vector<EpsilonEvidence> evidence;
  Thresholds thresholds;
  std::uint64_t horizon = 0;
  std::vector<std::string> notes;

  std::string label_text() const;
  /// key=value lines.
  std::string to_record() const;
};

RecurrenceVerdict classify(const std::vector<ReturnSetRecord>& records, const Thresholds& thresholds = {});

/// An upward-closed family, observed through a finite evidence predicate.
struct FamilyEvaluator {
  std::string name;
  std::function<bool(const IndexWindow&, const Thresholds&)> predicate;

  static FamilyEvaluator infinite();
  static FamilyEvaluator syndetic();
  static FamilyEvaluator lower_density();
  static FamilyEvaluator upper_density();
  static FamilyEvaluator banach_density();
  static FamilyEvaluator ip_star();
  static FamilyEvaluator by_name(const std::string& name);
};

struct FamilyCheck {
  bool holds = false;
  std::vector<bool> per_record;
};

FamilyCheck f_recurrence_check(const std::vector<ReturnSetRecord>& records, const FamilyEvaluator& family,
                               const Thresholds& thresholds = {});

struct RrecRefutation {
  bool applicable = false;
  std::string reason;
  std::uint64_t j = 0;
  /// 1 + largest index with |x_n| >= 1/2.
  std::uint64_t n1 = 0;
  std::uint64_t pairs_verified = 0;
  /// Returns allowed in any window of 2^j consecutive times.
  std::uint64_t max_returns_per_window = 0;
  double density_bound = 0;
};

/// Certificate that a block-cycle vector with |x_{2^j}| > 1/j for a suitable j
/// returns to its epsilon-ball (epsilon <= 1/2) at most j times in every
/// stretch of 2^j steps, so its upper Banach density stays below delta.
RrecRefutation blockcycle_rrec_refutation(const StateVector& x, double delta, const Rational& epsilon = Rational(1, 2));

}  // namespace recur
