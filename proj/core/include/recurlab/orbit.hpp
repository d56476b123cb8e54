#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "recurlab/index_window.hpp"
#include "recurlab/operators.hpp"

namespace recur {

struct OrbitInfo {
  /// Smallest p >= 1 with T^p x = x exactly.
  std::optional<std::uint64_t> exact_period;
  /// T^{m+1} x = T^m x exactly from this m on.
  std::optional<std::uint64_t> fixed_from;
  /// States actually computed (the rest were replayed from the period).
  std::uint64_t applications = 0;
};

/// Calls visit(n, T^n x, same_as) for n = 0..N. When exact arithmetic shows
/// that T^n x equals an earlier state T^m x, same_as = m and the operator is
/// no longer applied.
using OrbitVisitor = std::function<void(std::uint64_t, const StateVector&, std::optional<std::uint64_t>)>;
OrbitInfo walk_orbit(const Operator& op, const StateVector& x, std::uint64_t horizon, const OrbitVisitor& visit);

/// n -> max over the seminorm indices of p(T^n x - x), n = 0..N.
struct OrbitDistances {
  std::vector<NormValue> values;
  OrbitInfo info;
};
OrbitDistances orbit_distances(const Operator& op, const StateVector& x, const std::vector<std::uint64_t>& seminorms,
                               std::uint64_t horizon);

struct ReturnSetRecord {
  std::string operator_literal;
  std::string vector_literal;
  Rational epsilon;
  std::vector<std::uint64_t> seminorms;
  std::uint64_t horizon = 0;
  IndexWindow window;
  std::optional<std::uint64_t> exact_period;
  bool exact_arithmetic = false;

  /// Header block of key=value lines, then the window text.
  std::string serialize() const;
};

ReturnSetRecord return_set(const Operator& op, const StateVector& x, const Rational& epsilon,
                           const std::vector<std::uint64_t>& seminorms, std::uint64_t horizon);
/// One record per epsilon, sharing a single orbit walk.
std::vector<ReturnSetRecord> return_sets(const Operator& op, const StateVector& x, const std::vector<Rational>& epsilons,
                                         const std::vector<std::uint64_t>& seminorms, std::uint64_t horizon);
std::vector<ReturnSetRecord> return_sets(const OrbitDistances& d, const Operator& op, const StateVector& x,
                                         const std::vector<Rational>& epsilons,
                                         const std::vector<std::uint64_t>& seminorms);

struct GrowthCurve {
  enum class Verdict { BoundedWithin, GrowthWitness };
  Verdict verdict = Verdict::BoundedWithin;
  /// Largest sampled value.
  double bound = 0;
  std::vector<std::pair<std::uint64_t, double>> samples;
  /// Samples that beat every earlier value (only for GrowthWitness).
  std::vector<std::pair<std::uint64_t, double>> witness;
};

/// Samples p(T^n x) on a logarithmic schedule plus n = 2^{k-1} +- 1. A growth
/// witness needs at least three records, the last one in the second half of
/// the horizon.
GrowthCurve orbit_growth(const Operator& op, const StateVector& x, std::uint64_t seminorm_index, std::uint64_t horizon);

struct PowerBoundedResult {
  bool equibounded = true;
  /// sup of p(T^n x) / p(x) over the sample.
  double bound = 0;
  std::uint64_t witness_n = 0;
  std::size_t witness_vector = 0;
  double witness_ratio = 0;
};

PowerBoundedResult power_bounded_probe(const Operator& op, const std::vector<StateVector>& sample, std::uint64_t horizon,
                                       std::uint64_t seminorm_index = 0, double cap = 1e3);

struct CoveringReport {
  std::vector<Rational> epsilons;
  /// Greedy epsilon-net sizes over {T^n x : n <= N/2} and over n <= N.
  std::vector<std::uint64_t> at_half;
  std::vector<std::uint64_t> at_full;
};

CoveringReport totally_bounded_probe(const Operator& op, const StateVector& x, std::uint64_t horizon,
                                     const std::vector<Rational>& epsilons, std::uint64_t seminorm_index = 0);

}  // namespace recur
