#include <algorithm>
#include <cmath>

#include "recurlab/error.hpp"
#include "recurlab/operators.hpp"

namespace recur {

namespace {

/// |z| exactly when it is rational.
std::optional<Rational> exact_abs(const Scalar& z) {
  if (auto a = z.abs_exact()) return a;
  auto sq = z.abs2_exact();
  if (!sq) return std::nullopt;
  const Integer& num = sq->get_num();
  const Integer& den = sq->get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0 || mpz_perfect_square_p(den.get_mpz_t()) == 0) return std::nullopt;
  Integer rn;
  Integer rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  return Rational(rn, rd);
}

/// Non-negative quantity tracked exactly while possible.
struct Magnitude {
  std::optional<Rational> exact = Rational(0);
  double approx = 0;

  static Magnitude of(const Scalar& z) {
    Magnitude m;
    m.exact = exact_abs(z);
    m.approx = z.abs();
    return m;
  }
  void add_scaled(const Magnitude& o, const Rational& w) {
    if (exact && o.exact) {
      *exact += *o.exact * w;
    } else {
      exact.reset();
    }
    approx += o.approx * w.get_d();
  }
  void max_with(const Magnitude& o) {
    if (exact && o.exact) {
      if (*o.exact > *exact) {
        exact = o.exact;
        approx = o.approx;
      }
      return;
    }
    exact.reset();
    approx = std::max(approx, o.approx);
  }
  NormValue value() const { return exact ? NormValue::exact(*exact) : NormValue::approximate(approx); }
};

template <class Map>
NormValue lp_norm(const Map& coords, const Rational& p) {
  if (p == 1) {
    Magnitude sum;
    for (const auto& [i, v] : coords) sum.add_scaled(Magnitude::of(v), Rational(1));
    return sum.value();
  }
  if (p == 2) {
    Rational sq = 0;
    bool exact = true;
    double approx = 0;
    for (const auto& [i, v] : coords) {
      const double a = v.abs();
      approx += a * a;
      if (auto s = v.abs2_exact()) {
        sq += *s;
      } else {
        exact = false;
      }
    }
    return exact ? NormValue::exact_squared(sq) : NormValue::approximate(std::sqrt(approx));
  }
  const double pd = p.get_d();
  double acc = 0;
  for (const auto& [i, v] : coords) acc += std::pow(v.abs(), pd);
  return NormValue::approximate(std::pow(acc, 1.0 / pd));
}

template <class Map>
NormValue sup_norm(const Map& coords) {
  Rational best = 0;
  bool exact = true;
  double approx = 0;
  for (const auto& [i, v] : coords) {
    approx = std::max(approx, v.abs());
    if (auto s = v.abs2_exact()) {
      best = std::max(best, *s);
    } else {
      exact = false;
    }
  }
  return exact ? NormValue::exact_squared(best) : NormValue::approximate(approx);
}

Magnitude row_max(const StateVector::Row& row) {
  Magnitude m;
  for (const auto& [j, v] : row) m.max_with(Magnitude::of(v));
  return m;
}

/// 2^{-k} max_j |x_{k,j}| + k max_{1<=m<=n, m<2^{k-1}} |x_{k,2^{k-1}+m}|
Magnitude row_term(const StateVector::Row& row, std::size_t k, std::uint64_t n) {
  Magnitude total;
  total.add_scaled(row_max(row), pow2(-static_cast<long>(k)));
  if (k >= 2) {
    const std::uint64_t half = std::uint64_t{1} << (k - 1);
    const std::uint64_t m_max = std::min<std::uint64_t>(n, half - 1);
    Magnitude inner;
    if (m_max >= 1) {
      for (auto it = row.lower_bound(half + 1); it != row.end() && it->first <= half + m_max; ++it) {
        inner.max_with(Magnitude::of(it->second));
      }
    }
    total.add_scaled(inner, Rational(static_cast<long>(k)));
  }
  return total;
}

NormValue row_rotation_seminorm(std::uint64_t n, const StateVector& x) {
  const auto& tail = x.blocks().tail;
  const std::size_t given = x.blocks().rows.size();
  if (tail.empty()) {
    Magnitude total;
    for (std::size_t k = 0; k < given; ++k) total.add_scaled(row_term(x.blocks().rows[k], k, n), Rational(1));
    return total.value();
  }
  // Beyond row k*, tail entries sit at distinct positions outside the
  // second-term range, so each row contributes exactly 2^{-k} max |c|.
  std::uint64_t max_shift = 0;
  for (const auto& t : tail) max_shift = std::max(max_shift, t.shift);
  if (max_shift >= (std::uint64_t{1} << 60) || n >= (std::uint64_t{1} << 60)) {
    throw SeminormRefusal("row-rotation shift or seminorm index too large for closed-form evaluation");
  }
  std::size_t k_star = std::max<std::size_t>(given, 2);
  while (k_star < 62 && !((std::uint64_t{1} << k_star) > max_shift &&
                          (std::uint64_t{1} << (k_star - 1)) > max_shift + n)) {
    ++k_star;
  }
  if (!((std::uint64_t{1} << k_star) > max_shift && (std::uint64_t{1} << (k_star - 1)) > max_shift + n)) {
    throw SeminormRefusal("no closed-form tail for this row-rotation vector");
  }
  const auto rows = x.materialized_to(k_star - 1);
  Magnitude total;
  for (std::size_t k = 0; k < k_star; ++k) total.add_scaled(row_term(rows.rows[k], k, n), Rational(1));
  Magnitude c;
  for (const auto& t : tail) c.max_with(Magnitude::of(t.coef));
  total.add_scaled(c, pow2(-static_cast<long>(k_star - 1)));
  return total.value();
}

NormValue polynomial_seminorm(const Rational& radius, const StateVector& x) {
  Magnitude total;
  for (const auto& [j, v] : x.coords()) {
    Rational rj = 1;
    mpz_pow_ui(rj.get_num_mpz_t(), radius.get_num_mpz_t(), static_cast<unsigned long>(j));
    mpz_pow_ui(rj.get_den_mpz_t(), radius.get_den_mpz_t(), static_cast<unsigned long>(j));
    total.add_scaled(Magnitude::of(v), rj);
  }
  return total.value();
}

}  // namespace

NormValue seminorm(const SpaceDescriptor& space, std::uint64_t n, const StateVector& x) {
  if (!(space == x.space())) throw SpaceMismatch("seminorm of a vector from another space");
  switch (space.kind) {
    case SpaceDescriptor::Kind::SequenceLp:
    case SpaceDescriptor::Kind::FiniteDim:
      return lp_norm(x.coords(), space.p);
    case SpaceDescriptor::Kind::SequenceC0:
      return sup_norm(x.coords());
    case SpaceDescriptor::Kind::RowRotationFrechet:
      return row_rotation_seminorm(n, x);
    case SpaceDescriptor::Kind::PolynomialEntire:
      if (n >= space.radii.size()) {
        throw ConfigError("seminorm index " + std::to_string(n) + " but only " + std::to_string(space.radii.size()) +
                          " radii");
      }
      return polynomial_seminorm(space.radii[n], x);
  }
  throw Error("unknown space");
}

NormValue seminorm_max(const SpaceDescriptor& space, const std::vector<std::uint64_t>& indices, const StateVector& x) {
  if (indices.empty()) throw ConfigError("empty seminorm index set");
  NormValue best = seminorm(space, indices.front(), x);
  if (!space.is_frechet()) return best;
  for (std::size_t i = 1; i < indices.size(); ++i) {
    NormValue v = seminorm(space, indices[i], x);
    if (!v.less_equal(best)) best = v;
  }
  return best;
}

Rational row_tail_bound(const StateVector& x, std::size_t k) {
  Rational sum = 0;
  for (const auto& t : x.blocks().tail) {
    if (auto a = exact_abs(t.coef)) {
      sum += *a;
    } else {
      sum += from_double(t.coef.abs() * (1 + 1e-12));
    }
  }
  return sum * pow2(-static_cast<long>(k));
}

ContinuityCheck continuity_bound_check(const StateVector& x, std::uint64_t n) {
  if (!x.is_rows()) throw SpaceMismatch("continuity bound applies to row-rotation vectors");
  ContinuityCheck c;
  c.l = 1;
  while ((std::uint64_t{1} << c.l) < 2 * (n + 2)) ++c.l;
  c.constant = 1 + Rational(static_cast<long>(c.l - 1)) * pow2(static_cast<long>(c.l - 1));
  const RowRotationOperator t;
  c.lhs = seminorm(x.space(), n, t.apply(x));
  const NormValue base = seminorm(x.space(), n + 1, x);
  if (auto e = base.exact_value()) {
    c.rhs = NormValue::exact(c.constant * *e);
  } else {
    c.rhs = NormValue::approximate(c.constant.get_d() * base.approx);
  }
  c.holds = c.lhs.less_equal(c.rhs);
  return c;
}

StateVector row_rotation_special_vector() {
  StateVector::Rows rows;
  rows.tail.push_back({Scalar(1L), 0});
  return StateVector::row_blocks(std::move(rows));
}

}  // namespace recur
