#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "recurlab/error.hpp"
#include "recurlab/families.hpp"
#include "support.hpp"

using namespace recur;
namespace ts = testing_support;

TEST_CASE("index window basics") {
  const auto w = IndexWindow::from_unsorted({9, 3, 3, 0, 12}, 10);
  CHECK(w.elements() == std::vector<std::uint64_t>{0, 3, 9});
  CHECK(w.count_upto(8) == 2);
  CHECK(w.count_in(1, 9) == 2);
  CHECK(w.contains(9));
  CHECK_FALSE(w.contains(4));
  CHECK(w.truncated(5).elements() == std::vector<std::uint64_t>{0, 3});
  CHECK(w.translated(2) == IndexWindow({2, 5, 11}, 12));
  CHECK(IndexWindow::deserialize(w.serialize()) == w);
  CHECK_THROWS_AS(IndexWindow({3, 2}, 10), Error);
}

TEST_CASE("set expressions") {
  CHECK(window_from_expression("residue(3, 1)", 10).elements() == std::vector<std::uint64_t>{1, 4, 7, 10});
  CHECK(window_from_expression("squares", 20).elements() == std::vector<std::uint64_t>{0, 1, 4, 9, 16});
  CHECK(window_from_expression("powers(2)", 20).elements() == std::vector<std::uint64_t>{1, 2, 4, 8, 16});
  CHECK(window_from_expression("intervals([2,3], [8, inf])", 10).elements() ==
        std::vector<std::uint64_t>{2, 3, 8, 9, 10});
  CHECK(window_from_expression("fs(5, 7; 2)", 20).elements() == std::vector<std::uint64_t>{5, 7, 12});
  CHECK_THROWS_AS(window_from_expression("primes", 10), ConfigError);
}

TEST_CASE("density of the even numbers") {
  const std::uint64_t h = 100000;
  // The running density at n is 1/2 + 1/(2(n+1)) on even n, so a burn-in of H/2 keeps it within 1/H.
  const auto r = density_report(IndexWindow::residue(2, 0, h), h / 2);
  CHECK(std::abs(r.lower_est - 0.5) <= 1.0 / h);
  CHECK(std::abs(r.upper_est - 0.5) <= 1.0 / h);
  CHECK(std::abs(r.banach_upper_est - 0.5) <= 1.0 / h + 1.0 / (r.schedule.back() + 1));
}

TEST_CASE("density of the squares") {
  // Burn-in H/2 with the single window length H/2: card <= sqrt(H) forces every estimate down.
  const std::uint64_t h = 100000;
  const auto sq = window_from_expression("squares", h);
  const auto r = density_report(sq, h / 2, {h / 2});
  CHECK(r.lower_est <= 0.005);
  CHECK(r.upper_est <= 0.005);
  CHECK(r.banach_upper_est <= 0.005);
}

TEST_CASE("factorial blocks have Banach density one and small density") {
  std::vector<std::uint64_t> e;
  std::uint64_t f = 1;
  for (std::uint64_t j = 1; j <= 10; ++j) {
    f *= j;
    for (std::uint64_t i = f; i <= f + j; ++i) e.push_back(i);
  }
  const std::uint64_t h = 3628800;
  const auto a = IndexWindow::from_unsorted(e, h);
  const auto r = density_report(a, h / 10, {9});
  const auto naive = ts::naive_density(a, h / 10, {9});
  CHECK(naive.banach.back() == doctest::Approx(1.0));
  CHECK(r.banach_upper_est == doctest::Approx(1.0));
  CHECK(r.upper_est < 0.01);
}

TEST_CASE("syndetic certificate examples") {
  const auto c3 = syndetic_certificate(IndexWindow::residue(3, 0, 10000));
  CHECK(c3.certified);
  CHECK(c3.max_gap == 3);
  const auto pw = syndetic_certificate(window_from_expression("powers(2)", 10000));
  CHECK_FALSE(pw.certified);
  CHECK(pw.max_gap == 4096);
  const auto empty = syndetic_certificate(IndexWindow({}, 100));
  CHECK(empty.empty);
  CHECK_FALSE(empty.certified);
}

TEST_CASE("finite sums") {
  CHECK(ip_generate({1, 2, 4, 8}, 4, 20) == IndexWindow::from_unsorted({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15}, 20));
  CHECK(ip_generate({2, 4, 8}, 3, 20).elements() == std::vector<std::uint64_t>{2, 4, 6, 8, 10, 12, 14});
  CHECK(ip_generate({5, 7}, 2, 20).elements() == std::vector<std::uint64_t>{5, 7, 12});
}

TEST_CASE("IP* probe examples") {
  const std::uint64_t h = 10000;
  const auto four = ip_star_probe(IndexWindow::residue(4, 0, h));
  CHECK(four.kind == IpProbeResult::Kind::ArithmeticCertificate);
  CHECK(four.modulus == 4);

  const auto odds = IndexWindow::residue(2, 1, h);
  const auto f = ip_star_probe(odds);
  REQUIRE(f.kind == IpProbeResult::Kind::FalsifiedByIpWitness);
  for (auto g : f.generators) CHECK(g % 2 == 0);
  const auto sums = ip_generate(f.generators, f.generators.size(), h);
  for (auto s : sums.elements()) CHECK_FALSE(odds.contains(s));
}

TEST_CASE("dilate and contract") {
  CHECK(dilate(IndexWindow::residue(3, 0, 100), 2) == IndexWindow::residue(6, 0, 200));
  CHECK(contract(IndexWindow::residue(3, 0, 99), 3) == IndexWindow::full(33));
}

TEST_CASE("CuSP examples") {
  const auto full = IndexWindow::full(1000);
  const auto out = cusp_transform(full, CuspInstance::parse("residue(2; 0) + 0 | residue(2; 1) + 1"));
  for (std::uint64_t n = 0; n <= 1000; ++n) CHECK(out.contains(n) == (n % 2 == 0));

  const auto shifted = cusp_transform(IndexWindow::residue(3, 0, 1000), CuspInstance::parse("residue(1; 0) + 5"));
  CHECK(shifted == IndexWindow::residue(3, 0, 1000).translated(5));
}

TEST_CASE("property: density ordering and oracle agreement") {
  ts::Rng rng(11);
  for (int t = 0; t < 60; ++t) {
    const std::uint64_t h = ts::uniform(rng, 50, 3000);
    const auto a = ts::random_structured_set(rng, h);
    const auto burn = ts::uniform(rng, 0, h / 2);
    const auto r = density_report(a, burn);
    const auto naive = ts::naive_density(a, burn, r.schedule);
    CHECK(r.lower_est <= r.upper_est);
    CHECK(r.upper_est <= r.banach_upper_est);
    CHECK(std::abs(r.lower_est - naive.lower) <= 1e-12);
    CHECK(std::abs(r.upper_est - naive.upper) <= 1e-12);
    for (std::size_t i = 0; i < r.schedule.size(); ++i) {
      CHECK(std::abs(r.banach_curve[i].second - naive.banach[i]) <= 1e-12);
    }
  }
}

TEST_CASE("property: Banach lower bound from the syndetic gap") {
  ts::Rng rng(12);
  for (int t = 0; t < 80; ++t) {
    const std::uint64_t h = ts::uniform(rng, 200, 4000);
    const auto a = ts::random_structured_set(rng, h);
    const auto s = syndetic_certificate(a);
    if (!s.certified) continue;
    const auto g = s.max_gap;
    for (std::uint64_t l = g; l <= std::min(h, g + 40); l += 7) {
      const double est = sliding_window_max(a, l).value();
      CHECK(est >= 1.0 / static_cast<double>(g + 1) - 1.0 / static_cast<double>(l + 1) - 1e-15);
    }
  }
}

TEST_CASE("property: syndetic certificate agrees with a direct gap scan") {
  ts::Rng rng(13);
  for (int t = 0; t < 100; ++t) {
    const std::uint64_t h = ts::uniform(rng, 10, 5000);
    const auto a = ts::random_structured_set(rng, h);
    const auto s = syndetic_certificate(a);
    const auto g = ts::naive_max_gap(a);
    if (a.empty()) {
      CHECK_FALSE(s.certified);
      continue;
    }
    CHECK(s.max_gap == g);
    const auto cap = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(h)));
    CHECK(s.certified == (g <= cap && h - a.back() < cap));
  }
}

TEST_CASE("property: finite sums match subset enumeration and are closed") {
  ts::Rng rng(14);
  for (int t = 0; t < 100; ++t) {
    std::vector<std::uint64_t> g;
    const auto m = ts::uniform(rng, 1, 9);
    for (std::uint64_t i = 0; i < m; ++i) g.push_back(ts::uniform(rng, 1, 60));
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    const std::uint64_t m2 = g.size();
    const auto depth = ts::uniform(rng, 1, m2);
    const std::uint64_t h = ts::uniform(rng, 10, 300);
    const auto out = ip_generate(g, depth, h);
    const auto naive = ts::naive_finite_sums(g, depth, h);
    CHECK(std::vector<std::uint64_t>(naive.begin(), naive.end()) == out.elements());
    // Two disjoint sub-sums within depth combine into an element.
    for (std::uint64_t a = 1; a < (std::uint64_t{1} << m2); ++a) {
      const std::uint64_t b = ((std::uint64_t{1} << m2) - 1) & ~a;
      const auto pa = static_cast<std::uint64_t>(__builtin_popcountll(a));
      const auto pb = static_cast<std::uint64_t>(__builtin_popcountll(b));
      if (b == 0 || pa + pb > depth) continue;
      std::uint64_t s = 0;
      for (std::size_t i = 0; i < m2; ++i) {
        if ((a | b) & (std::uint64_t{1} << i)) s += g[i];
      }
      if (s <= h) CHECK(out.contains(s));
    }
  }
}

TEST_CASE("property: IP probe claims are sound") {
  ts::Rng rng(15);
  for (int t = 0; t < 60; ++t) {
    const std::uint64_t h = ts::uniform(rng, 100, 5000);
    const auto a = ts::random_structured_set(rng, h);
    const auto r = ip_star_probe(a, {8, rng(), 0});
    const auto cap = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(h)));
    const auto k = ts::naive_progression(a, cap);
    if (r.kind == IpProbeResult::Kind::ArithmeticCertificate) {
      CHECK(r.modulus == k);
    } else {
      CHECK(k == 0);
    }
    if (r.kind == IpProbeResult::Kind::FalsifiedByIpWitness) {
      const auto sums = ip_generate(r.generators, r.generators.size(), h);
      std::uint64_t total = 0;
      for (auto g : r.generators) total += g;
      CHECK(total <= h);
      for (auto s : sums.elements()) CHECK_FALSE(a.contains(s));
    }
  }
}

TEST_CASE("property: sparse random sets never get an arithmetic certificate") {
  ts::Rng rng(16);
  for (int t = 0; t < 30; ++t) {
    const std::uint64_t h = 10000;
    std::vector<std::uint64_t> e{0};
    std::bernoulli_distribution coin(0.01);
    for (std::uint64_t n = 1; n <= h; ++n) {
      if (coin(rng)) e.push_back(n);
    }
    const auto a = IndexWindow::from_unsorted(e, h);
    const auto r = ip_star_probe(a, {8, rng(), 0});
    CHECK(r.kind != IpProbeResult::Kind::ArithmeticCertificate);
    CHECK(ts::naive_progression(a, 100) == 0);
  }
}

TEST_CASE("property: dilate and contract round trip and scale gaps") {
  ts::Rng rng(17);
  for (int t = 0; t < 60; ++t) {
    const std::uint64_t h = ts::uniform(rng, 20, 2000);
    const auto a = ts::random_structured_set(rng, h);
    const auto p = ts::uniform(rng, 1, 7);
    CHECK(contract(dilate(a, p), p) == a);
    if (!a.empty()) {
      const auto sa = syndetic_certificate(a, UINT64_MAX);
      const auto sd = syndetic_certificate(dilate(a, p), UINT64_MAX);
      CHECK(sd.max_gap == p * sa.max_gap);
    }
  }
}

TEST_CASE("property: CuSP identity instance") {
  ts::Rng rng(18);
  const auto id = CuspInstance::parse("residue(1; 0) + 0");
  for (int t = 0; t < 40; ++t) {
    const auto a = ts::random_structured_set(rng, ts::uniform(rng, 10, 3000));
    CHECK(cusp_transform(a, id) == a);
  }
}

TEST_CASE("property: CuSP keeps syndetic gaps within g + s") {
  ts::Rng rng(19);
  for (int t = 0; t < 60; ++t) {
    const std::uint64_t h = 5000;
    const auto k = ts::uniform(rng, 1, 9);
    const auto a = IndexWindow::residue(k, 0, h);
    const auto q = ts::uniform(rng, 1, 3);
    CuspInstance inst;
    std::uint64_t s = 0;
    for (std::uint64_t j = 0; j < q; ++j) {
      inst.partition.push_back(ResiduePredicate{q, {j}});
      inst.shifts.push_back(ts::uniform(rng, 0, 12));
      s = std::max(s, inst.shifts.back());
    }
    const auto out = cusp_transform(a, inst).truncated(h);
    std::uint64_t gap = 0;
    const auto& e = out.elements();
    for (std::size_t i = 1; i < e.size(); ++i) gap = std::max(gap, e[i] - e[i - 1]);
    CHECK(gap <= k + s);
  }
}
