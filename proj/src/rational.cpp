#include "anosov/rational.hpp"

#include <stdexcept>

namespace anosov {

std::string to_string(const Rational& r) { return r.get_str(); }

std::string to_string(const Integer& z) { return z.get_str(); }

Rational parse_rational(const std::string& text)
{
    Rational r;
    if (text.empty() || r.set_str(text, 10) != 0) {
        throw std::invalid_argument("not a rational number: '" + text + "'");
    }
    if (r.get_den() == 0) {
        throw std::invalid_argument("zero denominator: '" + text + "'");
    }
    r.canonicalize();
    return r;
}

Rational round_dyadic(const Rational& x, unsigned bits)
{
    Integer scale = 1;
    scale <<= bits;
    Rational scaled = x * Rational(scale) + Rational(1, 2);
    return make_rational(floor_of(scaled), scale);
}

namespace {

// floor(sqrt(x) * 2^bits)
Integer scaled_isqrt(const Rational& x, unsigned bits)
{
    if (x < 0) {
        throw std::domain_error("sqrt of negative rational");
    }
    Integer scale = 1;
    scale <<= 2 * bits;
    Integer target = floor_of(x * Rational(scale));
    Integer root;
    mpz_sqrt(root.get_mpz_t(), target.get_mpz_t());
    return root;
}

} // namespace

Rational sqrt_lower(const Rational& x, unsigned bits)
{
    Integer den = 1;
    den <<= bits;
    return make_rational(scaled_isqrt(x, bits), den);
}

Rational sqrt_upper(const Rational& x, unsigned bits)
{
    Integer den = 1;
    den <<= bits;
    Integer root = scaled_isqrt(x, bits);
    Rational candidate = make_rational(root, den);
    if (candidate * candidate == x) {
        return candidate;
    }
    return make_rational(root + 1, den);
}

bool fits_int64(const Integer& z)
{
    static const Integer lo("-9223372036854775808");
    static const Integer hi("9223372036854775807");
    return z >= lo && z <= hi;
}

} // namespace anosov
