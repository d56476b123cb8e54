#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "recurlab/expr.hpp"
#include "recurlab/rational.hpp"
#include "recurlab/scalar.hpp"

namespace recur {

struct SpaceDescriptor {
  enum class Kind { SequenceLp, SequenceC0, RowRotationFrechet, PolynomialEntire, FiniteDim };

  Kind kind = Kind::SequenceLp;
  /// Exponent of the l^p norm (SequenceLp and FiniteDim).
  Rational p = 2;
  /// Sequences indexed by Z instead of N (bilateral shifts).
  bool over_integers = false;
  std::uint64_t dimension = 0;
  std::uint64_t max_degree = 0;
  std::vector<Rational> radii;

  static SpaceDescriptor lp(const Rational& p, bool over_integers = false);
  static SpaceDescriptor c0(bool over_integers = false);
  static SpaceDescriptor row_rotation();
  static SpaceDescriptor polynomials(std::uint64_t max_degree, std::vector<Rational> radii);
  static SpaceDescriptor finite(std::uint64_t dimension, const Rational& p = 2);

  /// Normed spaces have a single norm; indices are accepted and ignored.
  bool is_frechet() const { return kind == Kind::RowRotationFrechet || kind == Kind::PolynomialEntire; }
  std::string to_string() const;
  friend bool operator==(const SpaceDescriptor&, const SpaceDescriptor&) = default;
};

/// Parses `l1`, `l2`, `lp(3)`, `c0`, with an optional `_Z` suffix for Z-indexed sequences.
SpaceDescriptor parse_sequence_space(std::string_view text);

/// A vector of one of the spaces.
///
/// Sequence and finite-dimensional vectors are sparse maps (1-based indices,
/// any integer for Z-indexed sequences, 0-based degrees for polynomials).
/// Row-rotation vectors are rows k = 0..K given sparsely plus tail terms:
/// a tail term (c, s) puts c at position -s mod 2^k in every row k > K.
class StateVector {
 public:
  using Sparse = std::map<std::int64_t, Scalar>;
  using Row = std::map<std::uint64_t, Scalar>;
  struct TailTerm {
    Scalar coef;
    std::uint64_t shift = 0;
    friend bool operator==(const TailTerm&, const TailTerm&) = default;
  };
  struct Rows {
    std::vector<Row> rows;
    std::vector<TailTerm> tail;
  };

  StateVector() = default;
  static StateVector sparse(const SpaceDescriptor& space, Sparse coords);
  static StateVector row_blocks(Rows rows);
  static StateVector zero(const SpaceDescriptor& space);

  const SpaceDescriptor& space() const noexcept { return space_; }
  bool is_rows() const noexcept { return space_.kind == SpaceDescriptor::Kind::RowRotationFrechet; }
  const Sparse& coords() const noexcept { return coords_; }
  const Rows& blocks() const noexcept { return rows_; }

  /// Rows 0..k materialized, tail moved past k. Requires k <= 62.
  Rows materialized_to(std::size_t k) const;

  bool is_exact() const;
  bool is_zero() const;
  StateVector to_inexact() const;
  /// All coordinates finite (inexact ones may overflow).
  bool is_finite() const;

  StateVector operator+(const StateVector& o) const;
  StateVector operator-(const StateVector& o) const;
  StateVector scaled(const Scalar& s) const;

  /// Structural equality; exact for exact coordinates.
  friend bool operator==(const StateVector& a, const StateVector& b);

  /// Literal form accepted by the config parser.
  std::string to_string(int digits = 17) const;

 private:
  void canonicalize();

  SpaceDescriptor space_;
  Sparse coords_;
  Rows rows_;
};

/// A seminorm value: `approx` always, plus an exact power when available
/// (`exact_pow` = value^power, power 1 or 2).
struct NormValue {
  double approx = 0;
  std::optional<Rational> exact_pow;
  int power = 1;

  bool less_than(const Rational& eps) const;
  /// Exact when both sides are exact.
  bool less_equal(const NormValue& o) const;
  static NormValue exact(const Rational& v);
  static NormValue exact_squared(const Rational& v2);
  static NormValue approximate(double v);
  std::optional<Rational> exact_value() const;
};

class Operator;
using OperatorPtr = std::shared_ptr<const Operator>;

class Operator {
 public:
  enum class Kind { Matrix, Shift, Diagonal, BlockCycle, RowRotation, Composition, Scaled, Power };

  explicit Operator(SpaceDescriptor space) : space_(std::move(space)) {}
  virtual ~Operator() = default;
  Operator(const Operator&) = delete;
  Operator& operator=(const Operator&) = delete;

  virtual Kind kind() const = 0;
  const SpaceDescriptor& space() const noexcept { return space_; }

  StateVector apply(const StateVector& x) const;
  /// T^m x; closed forms where available, repeated application otherwise.
  virtual StateVector apply_power(const StateVector& x, std::uint64_t m) const;

  /// Round-trippable literal.
  virtual std::string literal() const = 0;
  /// Kind, parameters, space and the construction it instantiates.
  virtual std::string describe() const = 0;

 protected:
  virtual StateVector apply_checked(const StateVector& x) const = 0;

 private:
  SpaceDescriptor space_;
};

class MatrixOperator final : public Operator {
 public:
  explicit MatrixOperator(std::vector<std::vector<Scalar>> entries);
  Kind kind() const override { return Kind::Matrix; }
  const std::vector<std::vector<Scalar>>& entries() const { return entries_; }
  std::size_t dimension() const { return entries_.size(); }
  std::string literal() const override;
  std::string describe() const override;

 protected:
  StateVector apply_checked(const StateVector& x) const override;

 private:
  std::vector<std::vector<Scalar>> entries_;
};

/// (B_w x)_n = w_{n+1} x_{n+1}
class ShiftOperator final : public Operator {
 public:
  ShiftOperator(Expr weights, bool bilateral, SpaceDescriptor space);
  Kind kind() const override { return Kind::Shift; }
  bool bilateral() const { return bilateral_; }
  const Expr& weight_rule() const { return weights_; }
  Scalar weight(std::int64_t n) const;
  std::string literal() const override;
  std::string describe() const override;

 protected:
  StateVector apply_checked(const StateVector& x) const override;

 private:
  Expr weights_;
  bool bilateral_;
  mutable std::mutex mutex_;
  mutable std::map<std::int64_t, Scalar> cache_;
};

class DiagonalOperator final : public Operator {
 public:
  /// Infinite diagonal with lambda_n given by a rule in n >= 1.
  DiagonalOperator(Expr rule, SpaceDescriptor space);
  /// Finite diagonal diag(v_1, ..., v_d).
  explicit DiagonalOperator(std::vector<Scalar> values);
  Kind kind() const override { return Kind::Diagonal; }
  Scalar eigenvalue(std::int64_t n) const;
  bool is_finite() const { return !values_.empty(); }
  const std::vector<Scalar>& values() const { return values_; }
  StateVector apply_power(const StateVector& x, std::uint64_t m) const override;
  std::string literal() const override;
  std::string describe() const override;

 protected:
  StateVector apply_checked(const StateVector& x) const override;

 private:
  Expr rule_;
  std::vector<Scalar> values_;
  mutable std::mutex mutex_;
  mutable std::map<std::int64_t, Scalar> cache_;
};

/// Te_1 = e_1; inside block j (2^j <= k < 2^{j+1}) Te_k = 2 e_{k+1}, and the
/// block end maps back with 2^{-(2^j - 1)} e_{2^j}.
class BlockCycleOperator final : public Operator {
 public:
  explicit BlockCycleOperator(SpaceDescriptor space);
  Kind kind() const override { return Kind::BlockCycle; }
  /// Image of e_k as (index, weight).
  static std::pair<std::int64_t, Rational> image_of_basis(std::int64_t k);
  std::string literal() const override;
  std::string describe() const override;

 protected:
  StateVector apply_checked(const StateVector& x) const override;
};

/// (Tx)_{k,j} = x_{k, j+1 mod 2^k}
class RowRotationOperator final : public Operator {
 public:
  RowRotationOperator();
  Kind kind() const override { return Kind::RowRotation; }
  StateVector apply_power(const StateVector& x, std::uint64_t m) const override;
  std::string literal() const override;
  std::string describe() const override;

 protected:
  StateVector apply_checked(const StateVector& x) const override;
};

/// f(z) -> f(az + b) on polynomial coefficients.
class CompositionOperator final : public Operator {
 public:
  CompositionOperator(Scalar a, Scalar b, SpaceDescriptor space);
  Kind kind() const override { return Kind::Composition; }
  const Scalar& a() const { return a_; }
  const Scalar& b() const { return b_; }
  /// Column j holds the coefficients of (az+b)^j.
  std::vector<std::vector<Scalar>> coefficient_matrix() const;
  std::string literal() const override;
  std::string describe() const override;

 protected:
  StateVector apply_checked(const StateVector& x) const override;

 private:
  Scalar a_;
  Scalar b_;
};

/// lambda T
class ScaledOperator final : public Operator {
 public:
  ScaledOperator(Scalar lambda, OperatorPtr inner);
  Kind kind() const override { return Kind::Scaled; }
  const Scalar& factor() const { return lambda_; }
  const OperatorPtr& inner() const { return inner_; }
  StateVector apply_power(const StateVector& x, std::uint64_t m) const override;
  std::string literal() const override;
  std::string describe() const override;

 protected:
  StateVector apply_checked(const StateVector& x) const override;

 private:
  Scalar lambda_;
  OperatorPtr inner_;
};

/// T^p as a single step.
class PowerOperator final : public Operator {
 public:
  PowerOperator(std::uint64_t p, OperatorPtr inner);
  Kind kind() const override { return Kind::Power; }
  std::uint64_t exponent() const { return p_; }
  const OperatorPtr& inner() const { return inner_; }
  StateVector apply_power(const StateVector& x, std::uint64_t m) const override;
  std::string literal() const override;
  std::string describe() const override;

 protected:
  StateVector apply_checked(const StateVector& x) const override;

 private:
  std::uint64_t p_;
  OperatorPtr inner_;
};

OperatorPtr scaled(const Scalar& lambda, OperatorPtr op);
OperatorPtr power(std::uint64_t p, OperatorPtr op);

/// Seminorm number n of the space. Sequence and finite spaces have one norm;
/// the row-rotation space uses p_n; polynomial spaces use q_R with R the n-th radius.
NormValue seminorm(const SpaceDescriptor& space, std::uint64_t n, const StateVector& x);
/// max over the given seminorm indices.
NormValue seminorm_max(const SpaceDescriptor& space, const std::vector<std::uint64_t>& indices,
                       const StateVector& x);

/// sum_{k > K} 2^{-k} max_j |x_{k,j}| is at most the returned bound for a
/// row-blocks vector whose rows above K are given by the tail.
Rational row_tail_bound(const StateVector& x, std::size_t k);

struct ContinuityCheck {
  bool holds = false;
  NormValue lhs;
  NormValue rhs;
  std::uint64_t l = 0;
  Rational constant;
};

/// p_n(Tx) <= (1 + (l-1) 2^{l-1}) p_{n+1}(x), l minimal with 2^l >= 2(n+2).
ContinuityCheck continuity_bound_check(const StateVector& x, std::uint64_t n);

/// The row-rotation vector with x_{k,0} = 1 for every row k.
StateVector row_rotation_special_vector();

struct EigenCluster {
  std::complex<double> value;
  std::size_t algebraic = 0;
  std::size_t geometric = 0;
};

struct EigenStructure {
  std::vector<EigenCluster> eigenvalues;
  bool diagonalizable = false;
  bool unimodular = false;
  double condition = 0;
};

struct EigenOptions {
  double unimodular_tolerance = 1e-10;
  double cluster_tolerance = 1e-6;
  double rank_tolerance = 1e-6;
  std::size_t dimension_cap = 64;
};

/// Eigenvalues with algebraic and geometric multiplicities.
EigenStructure eigen_structure(const MatrixOperator& m, const EigenOptions& options = {});

}  // namespace recur
