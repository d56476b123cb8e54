#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "recurlab/classify.hpp"
#include "recurlab/families.hpp"
#include "recurlab/operators.hpp"
#include "recurlab/orbit.hpp"

namespace recur {

struct CheckOutcome {
  enum class Status { Pass, Fail, Skipped };

  std::string name;
  Status status = Status::Skipped;
  /// Everything needed to replay the check: literals and parameters.
  std::string witness;
  std::string reason;
  /// Ordered key/value pairs.
  std::vector<std::pair<std::string, std::string>> metrics;
  std::uint64_t seed = 0;
  /// FNV-1a of the witness text, hex.
  std::string fingerprint;

  void metric(const std::string& key, const std::string& value) { metrics.emplace_back(key, value); }
  void metric(const std::string& key, double value);
  std::optional<std::string> find_metric(const std::string& key) const;
  std::string to_record() const;
};

std::string to_string(CheckOutcome::Status s);
std::string fnv1a_hex(const std::string& text);

/// The shared classification setting of a check.
struct SweepSettings {
  std::vector<Rational> epsilons{Rational(1, 2)};
  std::vector<std::uint64_t> seminorms{0};
  std::uint64_t horizon = 10000;
  Thresholds thresholds;
};

/// Records for one vector over the epsilon grid.
std::vector<ReturnSetRecord> sweep(const Operator& op, const StateVector& x, const SweepSettings& s);
RecurrenceVerdict classify_orbit(const Operator& op, const StateVector& x, const SweepSettings& s);

/// Class-level agreement: equal labels, or both at least Uniform.
bool same_class(Label a, Label b);

/// Criterion (diagonalizable with unimodular spectrum) against simulation
/// (every basis vector at least Recurrent).
CheckOutcome matrix_recurrence_check(const MatrixOperator& m, const SweepSettings& s, const EigenOptions& eig = {});

/// Criterion (sampled |lambda_n| = 1) against simulation: every sample
/// vector (basis vectors and their sum) reaches Uniform and is never IP-falsified.
CheckOutcome diagonal_recurrence_check(const DiagonalOperator& d, std::uint64_t sample_size, const SweepSettings& s,
                                       double tolerance = 1e-10);

struct KroneckerWindow {
  IndexWindow window;
  /// max_j |lambda_j^n - 1| for n = 0..N.
  std::vector<double> distances;
};

/// {n <= N : max_j |lambda_j^n - 1| < eps}; exact lambdas decide lambda^n = 1 exactly.
KroneckerWindow kronecker_window(const std::vector<Scalar>& lambdas, double epsilon, std::uint64_t horizon);
CheckOutcome kronecker_check(const std::vector<Scalar>& lambdas, double epsilon, std::uint64_t horizon,
                             const IpProbeOptions& ip = {}, double tolerance = 1e-10);

struct Eigenpair {
  Scalar lambda;
  StateVector vector;
};

/// x = sum a_j v_j must reach Uniform, and each return window must contain the
/// Kronecker window of the lambdas at eps / sum |a_j| p(v_j).
CheckOutcome span_eigenvector_check(const Operator& op, const std::vector<Eigenpair>& pairs,
                                    const std::vector<Scalar>& coefficients, const SweepSettings& s);

/// (i) the window of T^p at N/p equals contract(window of T, p), elementwise;
/// (ii) the labels of x under T and T^p, both swept to N, agree at class level.
CheckOutcome ansari_check(const OperatorPtr& op, const StateVector& x, std::uint64_t p, const SweepSettings& s);

/// Labels of x under T and lambda T agree at class level.
CheckOutcome leon_muller_check(const OperatorPtr& op, const StateVector& x, const Scalar& lambda,
                               const SweepSettings& s, double tolerance = 1e-10);

struct SeriesOptions {
  double divergence_threshold = 10;
  /// Converging when the estimated tail is below this.
  double tail_tolerance = 1e-9;
  /// Largest index of the constructed fixed-point vector.
  std::uint64_t construction_cap = 2048;
  SpaceDescriptor space = SpaceDescriptor::lp(1);
};

enum class SeriesVerdict { Converging, Diverging, Inconclusive };
std::string to_string(SeriesVerdict v);

struct SeriesCurve {
  SeriesVerdict verdict = SeriesVerdict::Inconclusive;
  /// (n, partial sum through n) on a logarithmic schedule.
  std::vector<std::pair<std::uint64_t, double>> partial_sums;
  double total = 0;
  double tail_estimate = 0;
  /// Index where the partial sums first exceed the threshold, observed or extrapolated.
  std::optional<double> crossing;
  bool extrapolated = false;
};

/// Partial sums of sum_{n in A} (w_1 ... w_n)^{-p} in the log domain.
SeriesCurve shift_series(const Expr& weights, const IndexWindow& a, const SeriesOptions& o = {});
CheckOutcome shift_series_check(const Expr& weights, const IndexWindow& a, const SeriesOptions& o = {},
                                std::optional<SeriesVerdict> expect = std::nullopt);

struct CuspFamilyOptions {
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  std::uint64_t horizon = 10000;
  std::uint64_t max_pieces = 4;
  std::uint64_t max_shift = 20;
  /// Target upper Banach density of banach-density members.
  double delta = 0.3;
  double slack = 0.02;
  Thresholds thresholds;
};

/// Random members of a family, random partitions and shifts; the interior
/// window of every transform must keep the family's evidence.
CheckOutcome cusp_family_check(const std::string& family, const CuspFamilyOptions& o = {});

/// Distance from T^n x (n <= N) to the periodic orbit of y stays positive.
CheckOutcome urec_avoids_periodic_check(const Operator& op, const StateVector& x, const StateVector& y,
                                        const SweepSettings& s);

/// Density and Banach density of W and W + m agree within m / (burn_in + m + 1).
CheckOutcome translation_check(const IndexWindow& w, std::uint64_t m, std::optional<std::uint64_t> burn_in = {});

}  // namespace recur
