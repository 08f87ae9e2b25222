#pragma once

// Random inputs shared by the unit tests and the acceptance runner.

#include "anosov/crystal.hpp"

#include <ostream>
#include <random>

namespace anosov {

inline void PrintTo(const RatVector& v, std::ostream* os)
{
    *os << "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        *os << (i ? ", " : "") << to_string(v[i]);
    *os << ")";
}

inline void PrintTo(const RatMatrix& m, std::ostream* os)
{
    *os << "[";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        *os << (r ? "; " : "");
        for (std::size_t c = 0; c < m.cols(); ++c)
            *os << (c ? " " : "") << to_string(m(r, c));
    }
    *os << "]";
}

} // namespace anosov

namespace anosov::testing {

inline RatMatrix rotation_block(std::size_t order)
{
    switch (order) {
    case 2: return RatMatrix{{-1, 0}, {0, -1}};
    case 3: return RatMatrix{{0, -1}, {1, -1}};
    case 4: return RatMatrix{{0, -1}, {1, 0}};
    case 6: return RatMatrix{{1, -1}, {1, 0}};
    default: return RatMatrix::identity(2);
    }
}

/// Cyclic group of order q acting on Z^2 x Z by a rotation block, generated by
/// (R, (0, 0, shift)). With shift = 1/q this is a Bieberbach group; with shift
/// = 0 it has fixed points.
inline CrystalGroup screw_group(std::size_t q, const Rational& shift)
{
    const RatMatrix r = block_diagonal(rotation_block(q), RatMatrix::identity(1));
    std::vector<RatMatrix> hol;
    std::vector<RatVector> sec;
    RatMatrix g = RatMatrix::identity(3);
    for (std::size_t i = 0; i < q; ++i) {
        hol.push_back(g);
        RatVector u(3);
        u[2] = frac_of(shift * Rational(static_cast<long>(i)));
        sec.push_back(u);
        g = r * g;
    }
    return CrystalGroup(3, hol, sec);
}

inline CrystalGroup klein_with_shift(const Rational& shift)
{
    CrystalGroup k = CrystalGroup::klein_bottle();
    k.section[1][0] = shift;
    return k;
}

/// Unimodular matrix from random elementary operations.
inline RatMatrix random_unimodular(std::mt19937& rng, std::size_t n, int steps = 6)
{
    RatMatrix u = RatMatrix::identity(n);
    if (n < 2)
        return u;
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::uniform_int_distribution<int> coef(-2, 2);
    for (int s = 0; s < steps; ++s) {
        std::size_t i = idx(rng), j = idx(rng);
        if (i == j)
            continue;
        RatMatrix e = RatMatrix::identity(n);
        e(i, j) = coef(rng);
        u = e * u;
    }
    return u;
}

inline RatVector random_rational_vector(std::mt19937& rng, std::size_t n, long max_den = 7)
{
    std::uniform_int_distribution<long> num(-9, 9), den(1, max_den);
    RatVector v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = make_rational(num(rng), den(rng));
    return v;
}

/// A Bieberbach group (or, with torsion = true, a crystallographic group with
/// fixed points) of dimension <= 6 and holonomy order <= 6, moved by a random
/// affine change of coordinates with unimodular linear part.
inline CrystalGroup random_crystal_group(std::mt19937& rng, bool torsion = false)
{
    std::uniform_int_distribution<int> pick(0, 7);
    const Rational zero = 0;
    auto screw = [&](std::size_t q) { return screw_group(q, torsion ? zero : make_rational(1, static_cast<long>(q))); };
    CrystalGroup g;
    switch (pick(rng)) {
    case 0: g = klein_with_shift(torsion ? zero : make_rational(1, 2)); break;
    case 1: g = screw(2); break;
    case 2: g = screw(3); break;
    case 3: g = screw(4); break;
    case 4: g = screw(6); break;
    case 5: g = direct_product(klein_with_shift(torsion ? zero : make_rational(1, 2)), screw(3)); break;
    case 6: g = direct_product(screw(2), CrystalGroup::torus(1 + rng() % 3)); break;
    default: g = direct_product(CrystalGroup::torus(1 + rng() % 2), klein_with_shift(torsion ? zero : make_rational(1, 2))); break;
    }
    const AffineMap a(random_unimodular(rng, g.dim), random_rational_vector(rng, g.dim));
    return conjugate_group(g, a);
}

} // namespace anosov::testing
