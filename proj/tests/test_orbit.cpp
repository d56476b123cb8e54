#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "recurlab/literals.hpp"
#include "recurlab/orbit.hpp"
#include "support.hpp"

using namespace recur;
namespace ts = testing_support;

namespace {

StateVector basis(const SpaceDescriptor& s, std::int64_t k) { return StateVector::sparse(s, {{k, Scalar(1)}}); }

struct ZooEntry {
  const char* op;
  const char* vec;
  std::vector<std::uint64_t> seminorms;
};

std::vector<ZooEntry> zoo() {
  return {
      {"blockcycle", "vec(sparse: 5:1)", {0}},
      {"blockcycle", "vec(sparse: 1:1, 3:1/2, 9:1/4)", {0}},
      {"rowrotation", "rowvec(special)", {1}},
      {"rowrotation", "rowvec(entries: 2:1:1, 3:5:-1/2; tail: 1/2@1)", {0, 2}},
      {"matrix([[0, -1], [1, 0]])", "vec(sparse: 1:1)", {0}},
      {"matrix([[1, 1], [0, 1]])", "vec(sparse: 2:1)", {0}},
      {"diag(root(1/2^n))", "vec(sparse: 1:1, 2:1, 3:1)", {0}},
      {"diag(values: i, root(1/3))", "vec(dense: 1, 1)", {0}},
      {"comp(a=root(1/5), b=0, deg=4, radii=1,2)", "vec(dense: 1, 1, 1)", {0, 1}},
      {"shift(weights=2, side=uni, space=l1)", "vec(sparse: 4:1, 6:1)", {0}},
      {"scaled(lambda=-1, op=blockcycle)", "vec(sparse: 6:1)", {0}},
  };
}

}  // namespace

TEST_CASE("block cycle e5 returns on 4N0") {
  const BlockCycleOperator t(SpaceDescriptor::lp(2));
  const auto r = return_set(t, basis(t.space(), 5), Rational(1, 10), {0}, 100);
  CHECK(r.window == IndexWindow::residue(4, 0, 100));
  CHECK(r.exact_period == std::optional<std::uint64_t>(4));
  CHECK(r.exact_arithmetic);
}

TEST_CASE("row rotation special vector returns along 2^l N0") {
  const RowRotationOperator t;
  const auto x = row_rotation_special_vector();
  for (std::uint64_t l = 1; l <= 6; ++l) {
    const std::uint64_t step = std::uint64_t{1} << l;
    for (std::uint64_t n = 0; n < step && n <= 4; ++n) {
      const auto r = return_set(t, x, pow2(-static_cast<long>(l)) * Rational(3, 2), {n}, 10 * step);
      for (std::uint64_t m = 0; m <= 10 * step; m += step) CHECK(r.window.contains(m));
    }
  }
}

TEST_CASE("huge epsilon returns everywhere") {
  const auto op = parse_operator("matrix([[0, -1], [1, 0]])");
  const auto r = return_set(*op, parse_vector("vec(sparse: 1:3)", op->space()), Rational(100), {0}, 200);
  CHECK(r.window == IndexWindow::full(200));
}

TEST_CASE("walk_orbit detects periods and fixed points") {
  const BlockCycleOperator t(SpaceDescriptor::lp(2));
  std::uint64_t visited = 0;
  const auto info = walk_orbit(t, basis(t.space(), 9), 1000, [&](std::uint64_t, const StateVector&, auto) { ++visited; });
  CHECK(info.exact_period == std::optional<std::uint64_t>(8));
  CHECK(info.applications <= 9);
  CHECK(visited == 1001);

  const ShiftOperator b(Expr::parse("2"), false, SpaceDescriptor::lp(1));
  const auto nil = walk_orbit(b, basis(b.space(), 5), 100, [](std::uint64_t, const StateVector&, auto) {});
  CHECK(nil.fixed_from == std::optional<std::uint64_t>(5));
}

TEST_CASE("growth of the row rotation special vector") {
  const RowRotationOperator t;
  const auto g = orbit_growth(t, row_rotation_special_vector(), 1, std::uint64_t{1} << 20);
  CHECK(g.verdict == GrowthCurve::Verdict::GrowthWitness);
  CHECK(g.bound >= 20);
}

TEST_CASE("rotations keep their orbits bounded") {
  const auto op = parse_operator("matrix([[cos(1), -sin(1)], [sin(1), cos(1)]])");
  const auto g = orbit_growth(*op, parse_vector("vec(dense: 3, 4)", op->space()), 0, 10000);
  CHECK(g.verdict == GrowthCurve::Verdict::BoundedWithin);
  CHECK(g.bound == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("power boundedness probe") {
  const auto d = parse_operator("diag(root(1/(n+1)))");
  std::vector<StateVector> sample;
  for (std::int64_t k = 1; k <= 8; ++k) sample.push_back(basis(d->space(), k));
  const auto ok = power_bounded_probe(*d, sample, 200);
  CHECK(ok.equibounded);
  CHECK(ok.bound == doctest::Approx(1.0));

  const auto j = parse_operator("matrix([[1, 1], [0, 1]])");
  CHECK_FALSE(power_bounded_probe(*j, {parse_vector("vec(dense: 0, 1)", j->space())}, 10000).equibounded);

  const auto bc = parse_operator("blockcycle");
  std::vector<StateVector> block;
  for (std::int64_t k = 1; k <= 31; ++k) block.push_back(basis(bc->space(), k));
  CHECK_FALSE(power_bounded_probe(*bc, block, 64).equibounded);
}

TEST_CASE("covering numbers") {
  const auto rot5 = parse_operator("matrix([[cos(2*pi/5), -sin(2*pi/5)], [sin(2*pi/5), cos(2*pi/5)]])");
  const auto c = totally_bounded_probe(*rot5, parse_vector("vec(sparse: 1:1)", rot5->space()), 1000, {Rational(1, 10)});
  CHECK(c.at_full[0] == 5);

  const auto j = parse_operator("matrix([[1, 1], [0, 1]])");
  const auto g = totally_bounded_probe(*j, parse_vector("vec(dense: 0, 1)", j->space()), 1000, {Rational(1, 10)});
  CHECK(g.at_full[0] > g.at_half[0]);

  const auto irr = parse_operator("diag(values: root(sqrt(2)))");
  const auto x = parse_vector("vec(sparse: 1:1)", irr->space());
  const auto small = totally_bounded_probe(*irr, x, 20000, {Rational(1, 10)});
  const auto big = totally_bounded_probe(*irr, x, 40000, {Rational(1, 10)});
  const double circle = std::ceil(3.14159265358979323846 / 0.1);
  CHECK(static_cast<double>(small.at_full[0]) >= circle / 2);
  CHECK(static_cast<double>(small.at_full[0]) <= 2 * circle);
  CHECK(big.at_full[0] == small.at_full[0]);
}

TEST_CASE("property: windows contain 0 and grow with epsilon") {
  for (const auto& z : zoo()) {
    const auto op = parse_operator(z.op);
    const auto x = parse_vector(z.vec, op->space());
    const std::vector<Rational> eps{Rational(1, 20), Rational(1, 5), Rational(1, 2), Rational(2)};
    const auto recs = return_sets(*op, x, eps, z.seminorms, 600);
    for (std::size_t i = 0; i < recs.size(); ++i) {
      CHECK(recs[i].window.contains(0));
      if (i > 0) CHECK(recs[i - 1].window.subset_of(recs[i].window));
    }
  }
}

TEST_CASE("property: power identity over the zoo") {
  for (const auto& z : zoo()) {
    const auto op = parse_operator(z.op);
    const auto x = parse_vector(z.vec, op->space());
    for (std::uint64_t p : {2, 3, 5}) {
      const std::uint64_t n = 600;
      const auto tp = power(p, op);
      for (const auto& eps : {Rational(1, 10), Rational(1, 2)}) {
        const auto base = return_set(*op, x, eps, z.seminorms, n);
        const auto pw = return_set(*tp, x, eps, z.seminorms, n / p);
        CHECK_MESSAGE(pw.window == contract(base.window, p), z.op << " p=" << p);
      }
    }
  }
}

TEST_CASE("property: block cycle windows are decided exactly") {
  ts::Rng rng(31);
  const BlockCycleOperator t(SpaceDescriptor::lp(2));
  for (int i = 0; i < 30; ++i) {
    const auto x = ts::random_sparse_vector(rng, t.space(), 40, 4);
    const auto r = return_set(t, x, Rational(1, 3), {0}, 300);
    CHECK(r.exact_arithmetic);
    const auto d = orbit_distances(t, x, {0}, 300);
    for (std::uint64_t n = 0; n <= 300; ++n) {
      REQUIRE(d.values[n].exact_pow);
      CHECK(r.window.contains(n) == d.values[n].less_than(Rational(1, 3)));
    }
  }
}
