#pragma once

#include "anosov/matrix.hpp"

#include <optional>
#include <vector>

namespace anosov {

/// U * A * V = D with U, V unimodular and D diagonal with d_1 | d_2 | ... ,
/// all d_i > 0 for i < rank.
struct SmithForm {
    RatMatrix left;     ///< U
    RatMatrix diagonal; ///< D
    RatMatrix right;    ///< V
    std::size_t rank = 0;

    std::vector<Integer> invariant_factors() const;
};

/// Requires an integral matrix.
SmithForm smith_normal_form(const RatMatrix& a);

/// Integer solution of a x = b (a, b integral), or nullopt.
std::optional<RatVector> solve_integer(const RatMatrix& a, const RatVector& b);

/// Columns form a basis of the saturated lattice {x in Z^k : a x = 0}.
RatMatrix integer_kernel(const RatMatrix& a);

/// Rational solution x of the congruence m x = b (mod (1/q)Z^rows), decided
/// exactly through the Smith form of the left null space. Returns nullopt when
/// inconsistent. With q = 1 the modulus lattice is Z^rows.
std::optional<RatVector> smith_solve(const RatMatrix& m, const RatVector& b, const Integer& q = 1);

/// Integer solution x of m x = b (mod (1/q)Z^rows) with m integral.
std::optional<RatVector> smith_solve_integer(const RatMatrix& m, const RatVector& b, const Integer& q = 1);

} // namespace anosov
