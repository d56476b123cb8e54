#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "recurlab/rational.hpp"

namespace recur {

/// A complex scalar that stays exact as long as the arithmetic allows it.
///
/// Exact values are `coef * exp(2*pi*i*phase)` with `coef` a Gaussian
/// rational and `phase` a rational turn normalized into [0, 1/4); quarter
/// turns are folded into `coef`, which makes the representation unique.
/// Products and quotients of exact values stay exact. Sums stay exact when
/// the phases agree; otherwise the result degrades to `std::complex<double>`.
class Scalar {
 public:
  struct Exact {
    Rational re;
    Rational im;
    Rational phase;
  };

  Scalar() : value_(Exact{}) {}
  Scalar(long v) : value_(Exact{Rational(v), 0, 0}) {}  // NOLINT(google-explicit-constructor)
  Scalar(const Rational& v) : value_(Exact{v, 0, 0}) {}  // NOLINT(google-explicit-constructor)

  static Scalar gaussian(const Rational& re, const Rational& im);
  /// exp(2*pi*i*turns), exact.
  static Scalar root_of_unity(const Rational& turns);
  static Scalar inexact(std::complex<double> z);

  bool is_exact() const noexcept { return std::holds_alternative<Exact>(value_); }
  bool is_zero() const;
  /// Exact and equal to a real rational.
  std::optional<Rational> as_rational() const;
  const Exact* exact() const noexcept { return std::get_if<Exact>(&value_); }

  std::complex<double> to_complex() const;
  double abs() const { return std::abs(to_complex()); }
  /// |z|^2 when exact.
  std::optional<Rational> abs2_exact() const;
  /// |z| when exact and rational (coefficient on an axis).
  std::optional<Rational> abs_exact() const;

  /// Same value, stored as complex<double>.
  Scalar to_inexact() const { return inexact(to_complex()); }

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  /// Exact structural equality for exact values; value equality otherwise.
  friend bool operator==(const Scalar& a, const Scalar& b);

  Scalar pow(std::uint64_t e) const;

  /// Canonical text: `3/4`, `1/2+3i`, `root(1/8)*2`, `(0.3,-1.2)`.
  std::string to_string(int digits = 17) const;

 private:
  void normalize();

  std::variant<Exact, std::complex<double>> value_;
};

/// Formats a double with a fixed number of significant digits (`%.Ng`).
std::string format_double(double v, int digits = 17);

}  // namespace recur
