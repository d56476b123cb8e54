#include "recurlab/scalar.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "recurlab/error.hpp"

namespace recur {

Rational pow2(long e) {
  Rational r(1);
  if (e >= 0) {
    mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  }
  r.canonicalize();
  return r;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ConfigError("empty number");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw ConfigError("zero denominator in '" + s + "'");
    return num / den;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') {
    negative = s[pos] == '-';
    ++pos;
  }
  Integer mantissa = 0;
  long scale = 0;
  bool digits = false;
  bool in_fraction = false;
  for (; pos < s.size(); ++pos) {
    const char c = s[pos];
    if (c >= '0' && c <= '9') {
      mantissa = mantissa * 10 + (c - '0');
      if (in_fraction) --scale;
      digits = true;
    } else if (c == '.' && !in_fraction) {
      in_fraction = true;
    } else {
      break;
    }
  }
  if (!digits) throw ConfigError("malformed number '" + s + "'");
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    ++pos;
    bool exp_negative = false;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
      exp_negative = s[pos] == '-';
      ++pos;
    }
    long e = 0;
    bool exp_digits = false;
    for (; pos < s.size() && s[pos] >= '0' && s[pos] <= '9'; ++pos) {
      e = e * 10 + (s[pos] - '0');
      exp_digits = true;
      if (e > 100000) throw ConfigError("exponent too large in '" + s + "'");
    }
    if (!exp_digits) throw ConfigError("malformed exponent in '" + s + "'");
    scale += exp_negative ? -e : e;
  }
  if (pos != s.size()) throw ConfigError("trailing characters in number '" + s + "'");
  Rational r(mantissa);
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  if (scale < 0) {
    r /= Rational(ten_pow);
  } else {
    r *= Rational(ten_pow);
  }
  return negative ? Rational(-r) : r;
}

Rational from_double(double v) {
  if (!std::isfinite(v)) throw OverflowError("non-finite value cannot be made exact");
  Rational r;
  mpq_set_d(r.get_mpq_t(), v);
  return r;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::string format_double(double v, int digits) {
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

namespace {

void gauss_mul(Rational& re, Rational& im, const Rational& ore, const Rational& oim) {
  Rational nre = re * ore - im * oim;
  Rational nim = re * oim + im * ore;
  re = std::move(nre);
  im = std::move(nim);
}

}  // namespace

Scalar Scalar::gaussian(const Rational& re, const Rational& im) {
  Scalar s;
  s.value_ = Exact{re, im, 0};
  return s;
}

Scalar Scalar::root_of_unity(const Rational& turns) {
  Scalar s;
  s.value_ = Exact{1, 0, turns};
  s.normalize();
  return s;
}

Scalar Scalar::inexact(std::complex<double> z) {
  Scalar s;
  s.value_ = z;
  return s;
}

void Scalar::normalize() {
  auto* e = std::get_if<Exact>(&value_);
  if (e == nullptr) return;
  if (e->re == 0 && e->im == 0) {
    e->phase = 0;
    return;
  }
  // phase mod 1, then fold quarter turns into the coefficient
  Integer whole;
  mpz_fdiv_q(whole.get_mpz_t(), e->phase.get_num_mpz_t(), e->phase.get_den_mpz_t());
  e->phase -= Rational(whole);
  Rational four_phase = e->phase * 4;
  Integer quarters;
  mpz_fdiv_q(quarters.get_mpz_t(), four_phase.get_num_mpz_t(), four_phase.get_den_mpz_t());
  const long q = quarters.get_si();
  e->phase -= Rational(q) / 4;
  for (long k = 0; k < q; ++k) {
    // multiply by i
    Rational nre = -e->im;
    e->im = e->re;
    e->re = std::move(nre);
  }
}

bool Scalar::is_zero() const {
  if (const auto* e = exact()) return e->re == 0 && e->im == 0;
  return std::get<std::complex<double>>(value_) == std::complex<double>(0.0, 0.0);
}

std::optional<Rational> Scalar::as_rational() const {
  const auto* e = exact();
  if (e == nullptr || e->im != 0 || e->phase != 0) return std::nullopt;
  return e->re;
}

std::complex<double> Scalar::to_complex() const {
  if (const auto* e = exact()) {
    std::complex<double> c(e->re.get_d(), e->im.get_d());
    if (e->phase != 0) {
      const double angle = 2.0 * std::numbers::pi * e->phase.get_d();
      c *= std::complex<double>(std::cos(angle), std::sin(angle));
    }
    return c;
  }
  return std::get<std::complex<double>>(value_);
}

std::optional<Rational> Scalar::abs2_exact() const {
  const auto* e = exact();
  if (e == nullptr) return std::nullopt;
  return Rational(e->re * e->re + e->im * e->im);
}

std::optional<Rational> Scalar::abs_exact() const {
  const auto* e = exact();
  if (e == nullptr) return std::nullopt;
  if (e->im == 0) return Rational(::abs(e->re));
  if (e->re == 0) return Rational(::abs(e->im));
  return std::nullopt;
}

Scalar Scalar::operator-() const {
  Scalar s = *this;
  if (auto* e = std::get_if<Exact>(&s.value_)) {
    e->re = -e->re;
    e->im = -e->im;
  } else {
    auto& z = std::get<std::complex<double>>(s.value_);
    z = -z;
  }
  return s;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  auto* a = std::get_if<Exact>(&value_);
  const auto* b = o.exact();
  if (a != nullptr && b != nullptr) {
    if (b->re == 0 && b->im == 0) return *this;
    if (a->re == 0 && a->im == 0) {
      *a = *b;
      return *this;
    }
    if (a->phase == b->phase) {
      a->re += b->re;
      a->im += b->im;
      normalize();
      return *this;
    }
  }
  value_ = to_complex() + o.to_complex();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  auto* a = std::get_if<Exact>(&value_);
  const auto* b = o.exact();
  if (a != nullptr && b != nullptr) {
    gauss_mul(a->re, a->im, b->re, b->im);
    a->phase += b->phase;
    normalize();
    return *this;
  }
  value_ = to_complex() * o.to_complex();
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw Error("division by zero scalar");
  auto* a = std::get_if<Exact>(&value_);
  const auto* b = o.exact();
  if (a != nullptr && b != nullptr) {
    const Rational norm = b->re * b->re + b->im * b->im;
    gauss_mul(a->re, a->im, b->re, Rational(-b->im));
    a->re /= norm;
    a->im /= norm;
    a->phase -= b->phase;
    normalize();
    return *this;
  }
  value_ = to_complex() / o.to_complex();
  return *this;
}

bool operator==(const Scalar& a, const Scalar& b) {
  const auto* ea = a.exact();
  const auto* eb = b.exact();
  if (ea != nullptr && eb != nullptr) {
    return ea->re == eb->re && ea->im == eb->im && ea->phase == eb->phase;
  }
  return a.to_complex() == b.to_complex();
}

Scalar Scalar::pow(std::uint64_t e) const {
  Scalar result(1L);
  Scalar base = *this;
  while (e > 0) {
    if ((e & 1U) != 0U) result *= base;
    e >>= 1U;
    if (e > 0) base *= base;
  }
  return result;
}

namespace {

std::string gaussian_text(const Rational& re, const Rational& im) {
  if (im == 0) return re.get_str();
  std::string imag;
  const Rational mag = abs(im);
  imag = mag == 1 ? "i" : mag.get_str() + "*i";
  if (re == 0) return im < 0 ? "-" + imag : imag;
  return re.get_str() + (im < 0 ? "-" : "+") + imag;
}

}  // namespace

std::string Scalar::to_string(int digits) const {
  if (const auto* e = exact()) {
    const std::string coef = gaussian_text(e->re, e->im);
    if (e->phase == 0) return coef;
    const std::string root = "root(" + e->phase.get_str() + ")";
    if (e->im == 0 && e->re == 1) return root;
    return "(" + coef + ")*" + root;
  }
  const auto z = std::get<std::complex<double>>(value_);
  if (z.imag() == 0.0) return format_double(z.real(), digits);
  std::string out = "(" + format_double(z.real(), digits);
  out += z.imag() < 0 ? "-" : "+";
  out += format_double(std::abs(z.imag()), digits) + "*i)";
  return out;
}

}  // namespace recur
