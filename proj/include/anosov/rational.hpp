#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace anosov {

using Integer = mpz_class;
using Rational = mpq_class;

/// Rationals built from arbitrary numerator/denominator are canonicalized
/// on construction, so equality on Rational is structural equality.
inline Rational make_rational(const Integer& num, const Integer& den = 1)
{
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational make_rational(long num, long den = 1)
{
    return make_rational(Integer(num), Integer(den));
}

inline bool is_integral(const Rational& r) { return r.get_den() == 1; }

inline Integer floor_of(const Rational& r)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline Integer ceil_of(const Rational& r)
{
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

/// Fractional part in [0, 1).
inline Rational frac_of(const Rational& r) { return r - Rational(floor_of(r)); }

inline Rational abs_of(const Rational& r) { return r < 0 ? Rational(-r) : r; }

std::string to_string(const Rational& r);
std::string to_string(const Integer& z);

/// Parses "p", "-p" or "p/q".
Rational parse_rational(const std::string& text);

/// Rounds x to the dyadic grid 2^-bits (nearest, ties toward +inf).
Rational round_dyadic(const Rational& x, unsigned bits);

/// Certified enclosures of sqrt(x) for x >= 0 on the dyadic grid 2^-bits.
Rational sqrt_lower(const Rational& x, unsigned bits);
Rational sqrt_upper(const Rational& x, unsigned bits);

bool fits_int64(const Integer& z);

} // namespace anosov
