#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>

#include "recurlab/error.hpp"
#include "recurlab/literals.hpp"
#include "recurlab/operators.hpp"
#include "support.hpp"

using namespace recur;
namespace ts = testing_support;

namespace {

StateVector basis(const SpaceDescriptor& s, std::int64_t k) { return StateVector::sparse(s, {{k, Scalar(1)}}); }

/// Entries of S D S^{-1} for 2x2 complex S.
std::vector<std::vector<Scalar>> conjugated(std::complex<double> d1, std::complex<double> d2, std::complex<double> a,
                                            std::complex<double> b, std::complex<double> c, std::complex<double> d) {
  const std::complex<double> det = a * d - b * c;
  const std::complex<double> i00 = d / det, i01 = -b / det, i10 = -c / det, i11 = a / det;
  const std::complex<double> m00 = a * d1 * i00 + b * d2 * i10;
  const std::complex<double> m01 = a * d1 * i01 + b * d2 * i11;
  const std::complex<double> m10 = c * d1 * i00 + d * d2 * i10;
  const std::complex<double> m11 = c * d1 * i01 + d * d2 * i11;
  return {{Scalar::inexact(m00), Scalar::inexact(m01)}, {Scalar::inexact(m10), Scalar::inexact(m11)}};
}

}  // namespace

TEST_CASE("block cycle moves e5 to 2 e6 and returns after four steps") {
  const BlockCycleOperator t(SpaceDescriptor::lp(2));
  const auto e5 = basis(t.space(), 5);
  CHECK(t.apply(e5) == StateVector::sparse(t.space(), {{6, Scalar(2)}}));
  CHECK(t.apply_power(e5, 4) == e5);
  CHECK_FALSE(t.apply_power(e5, 2) == e5);
  CHECK(t.apply(basis(t.space(), 1)) == basis(t.space(), 1));
}

TEST_CASE("property: block cycle weights multiply to one around every block") {
  for (std::int64_t j = 0; j <= 12; ++j) {
    const std::int64_t lo = std::int64_t{1} << j;
    Rational product = 1;
    std::int64_t k = lo;
    for (std::int64_t step = 0; step < lo; ++step) {
      const auto [next, w] = BlockCycleOperator::image_of_basis(k);
      product *= w;
      k = next;
    }
    CHECK(k == lo);
    CHECK(product == 1);
  }
}

TEST_CASE("property: backward shift on sparse vectors is exact") {
  ts::Rng rng(21);
  const ShiftOperator b(Expr::parse("(n+1)/n"), false, SpaceDescriptor::lp(1));
  for (int t = 0; t < 50; ++t) {
    const auto x = ts::random_sparse_vector(rng, b.space(), 30, 6);
    const auto y = b.apply(x);
    CHECK(y.is_exact());
    for (const auto& [n, v] : y.coords()) {
      const Scalar expected = b.weight(n + 1) * x.coords().at(n + 1);
      CHECK(v == expected);
    }
    CHECK(y.coords().size() == x.coords().size() - (x.coords().count(1) != 0 ? 1 : 0));
  }
}

TEST_CASE("bilateral shift relabels without loss") {
  const ShiftOperator b(Expr::parse("2"), true, SpaceDescriptor::lp(2, true));
  const auto x = StateVector::sparse(b.space(), {{0, Scalar(1)}, {-3, Scalar(Rational(1, 2))}});
  const auto y = b.apply(x);
  CHECK(y == StateVector::sparse(b.space(), {{-1, Scalar(2)}, {-4, Scalar(1)}}));
}

TEST_CASE("affine composition with a = b = 1 has the Pascal matrix") {
  const CompositionOperator c(Scalar(1), Scalar(1), SpaceDescriptor::polynomials(3, {Rational(1)}));
  const auto m = c.coefficient_matrix();
  const long pascal[4][4] = {{1, 1, 1, 1}, {0, 1, 2, 3}, {0, 0, 1, 3}, {0, 0, 0, 1}};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) CHECK(m[i][j] == Scalar(pascal[i][j]));
  }
}

TEST_CASE("seminorm examples") {
  const auto l2 = SpaceDescriptor::lp(2);
  CHECK(seminorm(l2, 0, basis(l2, 3)).approx == doctest::Approx(1.0));
  const auto poly = SpaceDescriptor::polynomials(2, {Rational(1)});
  const auto f = StateVector::sparse(poly, {{0, Scalar(1)}, {1, Scalar(1)}, {2, Scalar(1)}});
  const auto q = seminorm(poly, 0, f);
  REQUIRE(q.exact_value());
  CHECK(*q.exact_value() == 3);
}

TEST_CASE("row rotation special vector has an unbounded orbit under p1") {
  const RowRotationOperator t;
  const auto x = row_rotation_special_vector();
  // Left rotation: row k has its 1 at position 2^k - n after n steps.
  for (std::uint64_t k = 3; k <= 12; ++k) {
    const auto v = seminorm(t.space(), 1, t.apply_power(x, (std::uint64_t{1} << (k - 1)) - 1));
    CHECK(v.approx >= static_cast<double>(k));
  }
}

TEST_CASE("row tail bound halves with every extra row") {
  const auto x = row_rotation_special_vector();
  for (std::size_t k = 1; k <= 20; ++k) {
    CHECK(row_tail_bound(x, k) == pow2(-static_cast<long>(k)));
    CHECK(row_tail_bound(x, k + 1) * 2 == row_tail_bound(x, k));
  }
}

TEST_CASE("continuity bound examples") {
  CHECK(continuity_bound_check(row_rotation_special_vector(), 1).holds);
  CHECK(continuity_bound_check(StateVector::row_blocks({}), 3).holds);
}

TEST_CASE("property: continuity bound on random finitely supported vectors") {
  ts::Rng rng(22);
  for (std::uint64_t n = 0; n <= 4; ++n) {
    for (int t = 0; t < 50; ++t) CHECK(continuity_bound_check(ts::random_row_vector(rng, 9), n).holds);
  }
}

TEST_CASE("property: unimodular diagonal and composition keep seminorms") {
  ts::Rng rng(23);
  const DiagonalOperator d(Expr::parse("root(1/(n+2))"), SpaceDescriptor::lp(2));
  const CompositionOperator c(Scalar::root_of_unity(Rational(1, 5)), Scalar(0),
                              SpaceDescriptor::polynomials(6, {Rational(1), Rational(3)}));
  for (int t = 0; t < 40; ++t) {
    const auto x = ts::random_sparse_vector(rng, d.space(), 12, 5);
    const auto m = ts::uniform(rng, 1, 40);
    CHECK(seminorm(d.space(), 0, d.apply_power(x, m)).approx == doctest::Approx(seminorm(d.space(), 0, x).approx));
    const auto f = ts::random_sparse_vector(rng, c.space(), 6, 4);
    for (std::uint64_t r = 0; r < 2; ++r) {
      CHECK(seminorm(c.space(), r, c.apply_power(f, m)).approx == doctest::Approx(seminorm(c.space(), r, f).approx));
    }
  }
}

TEST_CASE("eigen structure examples") {
  const auto rot = eigen_structure(MatrixOperator({{Scalar(0), Scalar(-1)}, {Scalar(1), Scalar(0)}}));
  CHECK(rot.diagonalizable);
  CHECK(rot.unimodular);
  REQUIRE(rot.eigenvalues.size() == 2);
  for (const auto& c : rot.eigenvalues) CHECK(std::abs(std::abs(c.value.imag()) - 1) < 1e-12);

  const auto jordan = eigen_structure(MatrixOperator({{Scalar(1), Scalar(1)}, {Scalar(0), Scalar(1)}}));
  CHECK_FALSE(jordan.diagonalizable);
  REQUIRE(jordan.eigenvalues.size() == 1);
  CHECK(jordan.eigenvalues[0].algebraic == 2);
  CHECK(jordan.eigenvalues[0].geometric == 1);

  const auto mixed = eigen_structure(MatrixOperator({{Scalar(2), Scalar(0)}, {Scalar(0), Scalar::gaussian(0, 1)}}));
  CHECK_FALSE(mixed.unimodular);
}

TEST_CASE("property: conjugated unimodular diagonals stay unimodular") {
  ts::Rng rng(24);
  for (int t = 0; t < 40; ++t) {
    const double pi2 = 2 * 3.14159265358979323846;
    const auto d1 = std::polar(1.0, ts::uniform_real(rng, 0, pi2));
    auto d2 = std::polar(1.0, ts::uniform_real(rng, 0, pi2));
    if (std::abs(d1 - d2) < 1e-3) d2 = -d1;
    auto r = [&] { return std::complex<double>(ts::uniform_real(rng, -1, 1), ts::uniform_real(rng, -1, 1)); };
    const auto a = 1.0 + 0.3 * r(), b = 0.3 * r(), c = 0.3 * r(), d = 1.0 + 0.3 * r();
    const auto e = eigen_structure(MatrixOperator(conjugated(d1, d2, a, b, c, d)));
    CHECK(e.diagonalizable);
    CHECK(e.unimodular);
  }
}

TEST_CASE("operator literals round trip") {
  for (const char* lit : {"matrix([[0, -1], [1, 0]])", "shift(weights=(n+1)/n, side=uni, space=l1)", "blockcycle",
                          "rowrotation", "diag(root(1/2^n))", "diag(values: i, 1/2)", "comp(a=1, b=1, deg=3, radii=1,2)",
                          "power(p=2, op=blockcycle)", "scaled(lambda=-1, op=rowrotation)",
                          "shift(weights=2, side=uni, space=lp(3/2))", "shift(weights=1, side=bi, space=c0_Z)"}) {
    const auto op = parse_operator(lit);
    const auto again = parse_operator(op->literal());
    CHECK(again->literal() == op->literal());
    CHECK(again->kind() == op->kind());
  }
  CHECK_THROWS_AS(parse_operator("matrix([[1, 2], [3]"), ConfigError);
  CHECK_THROWS_AS(parse_operator("shift(side=uni)"), ConfigError);
  CHECK_THROWS_AS(parse_operator("wobble(3)"), ConfigError);
}

TEST_CASE("vector literals") {
  const auto l2 = SpaceDescriptor::lp(2);
  CHECK(parse_vector("vec(sparse: 5:1)", l2) == basis(l2, 5));
  CHECK(parse_vector("vec(dense: 1, 0, 2)", l2) == StateVector::sparse(l2, {{1, Scalar(1)}, {3, Scalar(2)}}));
  const auto g = parse_vector("gvec(3)", l2);
  CHECK(g.coords().at(8) == Scalar(Rational(2, 3)));
  CHECK(parse_vector("rowvec(special)", SpaceDescriptor::row_rotation()) == row_rotation_special_vector());
  CHECK_THROWS_AS(parse_vector("vec(sparse: 1:1, 1:2)", l2), ConfigError);
  CHECK_THROWS_AS(parse_vector("rowvec(special)", l2), ConfigError);
}
