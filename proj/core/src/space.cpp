#include <cmath>

#include "recurlab/error.hpp"
#include "recurlab/operators.hpp"
#include "recurlab/text.hpp"

namespace recur {

SpaceDescriptor SpaceDescriptor::lp(const Rational& p, bool over_integers) {
  if (p < 1) throw ConfigError("l^p needs p >= 1");
  SpaceDescriptor s;
  s.kind = Kind::SequenceLp;
  s.p = p;
  s.over_integers = over_integers;
  return s;
}

SpaceDescriptor SpaceDescriptor::c0(bool over_integers) {
  SpaceDescriptor s;
  s.kind = Kind::SequenceC0;
  s.p = 0;
  s.over_integers = over_integers;
  return s;
}

SpaceDescriptor SpaceDescriptor::row_rotation() {
  SpaceDescriptor s;
  s.kind = Kind::RowRotationFrechet;
  s.p = 0;
  return s;
}

SpaceDescriptor SpaceDescriptor::polynomials(std::uint64_t max_degree, std::vector<Rational> radii) {
  if (radii.empty()) throw ConfigError("polynomial space needs at least one radius");
  for (const auto& r : radii) {
    if (r <= 0) throw ConfigError("radii must be positive");
  }
  SpaceDescriptor s;
  s.kind = Kind::PolynomialEntire;
  s.p = 0;
  s.max_degree = max_degree;
  s.radii = std::move(radii);
  return s;
}

SpaceDescriptor SpaceDescriptor::finite(std::uint64_t dimension, const Rational& p) {
  if (dimension == 0) throw ConfigError("finite-dimensional space needs dimension >= 1");
  if (p < 1) throw ConfigError("l^p needs p >= 1");
  SpaceDescriptor s;
  s.kind = Kind::FiniteDim;
  s.dimension = dimension;
  s.p = p;
  return s;
}

std::string SpaceDescriptor::to_string() const {
  const std::string z = over_integers ? "(Z)" : "";
  switch (kind) {
    case Kind::SequenceLp:
      return "l^" + p.get_str() + z;
    case Kind::SequenceC0:
      return "c0" + z;
    case Kind::RowRotationFrechet:
      return "row-rotation Frechet space";
    case Kind::PolynomialEntire: {
      std::string s = "entire functions, degree <= " + std::to_string(max_degree) + ", radii {";
      for (std::size_t i = 0; i < radii.size(); ++i) s += (i > 0 ? "," : "") + radii[i].get_str();
      return s + "}";
    }
    case Kind::FiniteDim:
      return "C^" + std::to_string(dimension) + " with l^" + p.get_str();
  }
  return "?";
}

SpaceDescriptor parse_sequence_space(std::string_view text) {
  TextCursor c(text);
  std::string name = c.identifier();
  bool over_z = false;
  if (name.size() > 2 && name.ends_with("_Z")) {
    over_z = true;
    name.resize(name.size() - 2);
  }
  SpaceDescriptor s;
  if (name == "c0") {
    s = SpaceDescriptor::c0(over_z);
  } else if (name == "lp") {
    c.expect('(');
    const Rational p = parse_rational(c.balanced_until(')'));
    s = SpaceDescriptor::lp(p, over_z);
  } else if (name.size() > 1 && name[0] == 'l') {
    s = SpaceDescriptor::lp(parse_rational(name.substr(1)), over_z);
  } else {
    c.fail("unknown sequence space '" + name + "'");
  }
  if (!c.eof()) c.fail("unexpected trailing input in space");
  return s;
}

NormValue NormValue::exact(const Rational& v) {
  NormValue n;
  n.exact_pow = v;
  n.power = 1;
  n.approx = v.get_d();
  return n;
}

NormValue NormValue::exact_squared(const Rational& v2) {
  NormValue n;
  n.exact_pow = v2;
  n.power = 2;
  n.approx = std::sqrt(v2.get_d());
  return n;
}

NormValue NormValue::approximate(double v) {
  NormValue n;
  n.approx = v;
  return n;
}

bool NormValue::less_than(const Rational& eps) const {
  if (exact_pow) return power == 1 ? *exact_pow < eps : *exact_pow < eps * eps;
  return approx < eps.get_d();
}

bool NormValue::less_equal(const NormValue& o) const {
  if (exact_pow && o.exact_pow) {
    if (power == o.power) return *exact_pow <= *o.exact_pow;
    const Rational a = power == 1 ? Rational(*exact_pow * *exact_pow) : *exact_pow;
    const Rational b = o.power == 1 ? Rational(*o.exact_pow * *o.exact_pow) : *o.exact_pow;
    return a <= b;
  }
  return approx <= o.approx;
}

std::optional<Rational> NormValue::exact_value() const {
  if (!exact_pow) return std::nullopt;
  if (power == 1) return exact_pow;
  const Integer& num = exact_pow->get_num();
  const Integer& den = exact_pow->get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0 || mpz_perfect_square_p(den.get_mpz_t()) == 0) return std::nullopt;
  Integer rn;
  Integer rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  return Rational(rn, rd);
}

}  // namespace recur
