#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace recur {

using Rational = mpq_class;
using Integer = mpz_class;

/// 2^e as an exact rational, e may be negative.
Rational pow2(long e);

/// Parses "3", "-7/4", "0.125", "1e-3" exactly.
Rational parse_rational(std::string_view text);

/// Exact value of a finite double.
Rational from_double(double v);

std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

/// 2-adic valuation of a positive integer.
inline int two_adic_valuation(std::uint64_t v) { return v == 0 ? 64 : __builtin_ctzll(v); }

}  // namespace recur
