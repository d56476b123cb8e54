#pragma once

#include <string_view>
#include <vector>

#include "recurlab/operators.hpp"
#include "recurlab/text.hpp"

namespace recur {

/// Operator literals:
///   matrix([[0, -1], [1, 0]])
///   shift(weights=(n+1)/n, side=uni, space=l1)
///   diag(root(1/2^n), space=l2)      diag(values: i, 1/2)
///   blockcycle    blockcycle(space=l1)
///   rowrotation
///   comp(a=1, b=1, deg=3, radii=1,2)
///   scaled(lambda=root(1/3), op=...)    power(p=2, op=...)
/// Spaces default to l2; shifts default to l2 or l2_Z by side.
OperatorPtr parse_operator(std::string_view text);
OperatorPtr parse_operator(TextCursor& c);

/// Vector literals, read in `space`:
///   vec(sparse: 5:1, 7:-1/2)   vec(dense: 1, i, 0)   (first index 1, or 0 for polynomials)
///   rowvec(special)            rowvec(entries: 3:0:1; rows: 4; tail: 1@0)
///   gvec(20)                   x_{2^j} = 2/j for j = 1..20
StateVector parse_vector(std::string_view text, const SpaceDescriptor& space);

/// A constant expression.
Scalar parse_scalar(std::string_view text);
/// Comma-separated constant expressions.
std::vector<Scalar> parse_scalar_list(std::string_view text);

/// x_{2^j} = 2/j for j = 1..count.
StateVector block_cycle_test_vector(const SpaceDescriptor& space, std::uint64_t count);

}  // namespace recur
