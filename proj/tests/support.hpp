#pragma once

// Brute-force oracles and hand-rolled generators shared by the test binaries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "recurlab/families.hpp"
#include "recurlab/index_window.hpp"
#include "recurlab/operators.hpp"

namespace testing_support {

using recur::IndexWindow;

inline std::vector<bool> bitmap(const IndexWindow& a) {
  std::vector<bool> b(a.horizon() + 1, false);
  for (auto e : a.elements()) b[e] = true;
  return b;
}

/// prefix[n] = card(A ∩ [0, n - 1]), counted from a bitmap.
inline std::vector<std::uint64_t> prefix_counts(const IndexWindow& a) {
  const auto b = bitmap(a);
  std::vector<std::uint64_t> p(b.size() + 1, 0);
  for (std::size_t i = 0; i < b.size(); ++i) p[i + 1] = p[i] + (b[i] ? 1 : 0);
  return p;
}

struct NaiveDensity {
  double lower = 0;
  double upper = 0;
  std::vector<double> banach;
};

/// Recounts c(N)/(N+1) for every N in [burn_in, H] and every window [m, m+L].
inline NaiveDensity naive_density(const IndexWindow& a, std::uint64_t burn_in, const std::vector<std::uint64_t>& lengths) {
  const auto p = prefix_counts(a);
  const std::uint64_t h = a.horizon();
  NaiveDensity d;
  d.lower = 2;
  d.upper = -1;
  for (std::uint64_t n = burn_in; n <= h; ++n) {
    const double v = static_cast<double>(p[n + 1]) / static_cast<double>(n + 1);
    d.lower = std::min(d.lower, v);
    d.upper = std::max(d.upper, v);
  }
  for (auto l : lengths) {
    std::uint64_t best = 0;
    for (std::uint64_t m = 0; m + l <= h; ++m) best = std::max(best, p[m + l + 1] - p[m]);
    d.banach.push_back(static_cast<double>(best) / static_cast<double>(l + 1));
  }
  return d;
}

/// Largest gap with the leading gap from 0; UINT64_MAX for an empty window.
inline std::uint64_t naive_max_gap(const IndexWindow& a) {
  const auto b = bitmap(a);
  std::uint64_t last = 0;
  std::uint64_t best = 0;
  bool seen = false;
  for (std::uint64_t n = 0; n < b.size(); ++n) {
    if (!b[n]) continue;
    best = std::max(best, seen ? n - last : n);
    last = n;
    seen = true;
  }
  return seen ? best : UINT64_MAX;
}

/// Every subset sum of at most `depth` generators, by subset enumeration.
inline std::set<std::uint64_t> naive_finite_sums(const std::vector<std::uint64_t>& g, std::uint64_t depth, std::uint64_t h) {
  std::set<std::uint64_t> out;
  const std::size_t m = g.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    if (static_cast<std::uint64_t>(__builtin_popcountll(mask)) > depth) continue;
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (std::uint64_t{1} << i)) s += g[i];
    }
    if (s <= h) out.insert(s);
  }
  return out;
}

/// Smallest k <= cap with k N0 ∩ [0, H] ⊆ A, by exhaustive scan.
inline std::uint64_t naive_progression(const IndexWindow& a, std::uint64_t cap) {
  const auto b = bitmap(a);
  for (std::uint64_t k = 1; k <= cap; ++k) {
    bool ok = true;
    for (std::uint64_t n = 0; n < b.size() && ok; n += k) ok = b[n];
    if (ok) return k;
  }
  return 0;
}

using Rng = std::mt19937_64;

inline std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

/// Random structured subsets of [0, H]: residue classes, Bernoulli sets,
/// interval unions, sparse powers and mixtures of them.
inline IndexWindow random_structured_set(Rng& rng, std::uint64_t h) {
  std::vector<std::uint64_t> e;
  switch (uniform(rng, 0, 5)) {
    case 0: {
      const auto k = uniform(rng, 1, 40);
      const auto r = uniform(rng, 0, k - 1);
      for (std::uint64_t n = r; n <= h; n += k) e.push_back(n);
      break;
    }
    case 1: {
      const double p = uniform_real(rng, 0.001, 0.9);
      std::bernoulli_distribution coin(p);
      for (std::uint64_t n = 0; n <= h; ++n) {
        if (coin(rng)) e.push_back(n);
      }
      break;
    }
    case 2: {
      std::uint64_t n = uniform(rng, 0, 50);
      while (n <= h) {
        const auto len = uniform(rng, 0, 60);
        for (std::uint64_t i = n; i <= std::min(h, n + len); ++i) e.push_back(i);
        n += len + 1 + uniform(rng, 1, 400);
      }
      break;
    }
    case 3: {
      const auto b = uniform(rng, 2, 5);
      for (std::uint64_t v = 1; v <= h; v *= b) e.push_back(v);
      for (std::uint64_t j = 0; j * j <= h; j += uniform(rng, 1, 3)) e.push_back(j * j);
      break;
    }
    case 4: {
      // Block densities that change with scale.
      std::uint64_t start = 0;
      std::uint64_t len = uniform(rng, 5, 50);
      bool on = uniform(rng, 0, 1) == 1;
      while (start <= h) {
        if (on) {
          for (std::uint64_t i = start; i <= std::min(h, start + len - 1); ++i) e.push_back(i);
        }
        start += len;
        len *= 2;
        on = !on;
      }
      break;
    }
    default: {
      const auto k = uniform(rng, 2, 12);
      const double p = uniform_real(rng, 0.0, 0.2);
      std::bernoulli_distribution coin(p);
      for (std::uint64_t n = 0; n <= h; ++n) {
        if (n % k == 0 || coin(rng)) e.push_back(n);
      }
    }
  }
  return IndexWindow::from_unsorted(std::move(e), h);
}

/// Finitely supported sequence of the given space with small Gaussian-rational entries.
inline recur::StateVector random_sparse_vector(Rng& rng, const recur::SpaceDescriptor& space, std::int64_t max_index,
                                              std::size_t max_terms) {
  recur::StateVector::Sparse coords;
  const auto terms = uniform(rng, 1, max_terms);
  const std::int64_t lo = space.kind == recur::SpaceDescriptor::Kind::PolynomialEntire ? 0 : 1;
  for (std::size_t t = 0; t < terms; ++t) {
    const auto i = static_cast<std::int64_t>(uniform(rng, static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(max_index)));
    const long re = static_cast<long>(uniform(rng, 0, 20)) - 10;
    const long im = static_cast<long>(uniform(rng, 0, 6)) - 3;
    const long den = static_cast<long>(uniform(rng, 1, 8));
    coords[i] = recur::Scalar::gaussian(recur::Rational(re, den), recur::Rational(im, den));
  }
  return recur::StateVector::sparse(space, std::move(coords));
}

/// Finitely supported row-rotation vector: rows 0..K with random entries.
inline recur::StateVector random_row_vector(Rng& rng, std::size_t max_rows) {
  recur::StateVector::Rows rows;
  const auto k = uniform(rng, 1, max_rows);
  rows.rows.resize(k);
  for (std::size_t r = 0; r < k; ++r) {
    const auto terms = uniform(rng, 0, 3);
    for (std::uint64_t t = 0; t < terms; ++t) {
      const auto j = uniform(rng, 0, (std::uint64_t{1} << r) - 1);
      const long num = static_cast<long>(uniform(rng, 0, 40)) - 20;
      rows.rows[r][j] = recur::Scalar(recur::Rational(num, static_cast<long>(uniform(rng, 1, 9))));
    }
  }
  return recur::StateVector::row_blocks(std::move(rows));
}

}  // namespace testing_support
