#pragma once

#include "anosov/rational.hpp"

#include <utility>
#include <vector>

namespace anosov {

/// Univariate polynomial over Q, coefficients stored constant term first.
/// The zero polynomial has no coefficients; trailing zeros are trimmed.
class RatPoly {
public:
    RatPoly() = default;
    explicit RatPoly(std::vector<Rational> coeffs);
    RatPoly(std::initializer_list<Rational> coeffs) : RatPoly(std::vector<Rational>(coeffs)) {}

    static RatPoly constant(const Rational& c) { return RatPoly({c}); }
    static RatPoly monomial(const Rational& c, std::size_t degree);
    static RatPoly x_minus(const Rational& root) { return RatPoly({-root, 1}); }

    bool is_zero() const { return coeffs_.empty(); }
    /// -1 for the zero polynomial.
    long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
    const Rational& leading() const { return coeffs_.back(); }
    Rational coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Rational(0); }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    bool is_integral() const;
    RatPoly monic() const;
    RatPoly derivative() const;
    /// x^deg p(1/x)
    RatPoly reverse() const;
    Rational operator()(const Rational& x) const;
    double eval_double(double x) const;

    friend bool operator==(const RatPoly& a, const RatPoly& b) { return a.coeffs_ == b.coeffs_; }

private:
    void trim();
    std::vector<Rational> coeffs_;
};

RatPoly operator+(const RatPoly& a, const RatPoly& b);
RatPoly operator-(const RatPoly& a, const RatPoly& b);
RatPoly operator*(const RatPoly& a, const RatPoly& b);
RatPoly operator*(const Rational& s, const RatPoly& p);

/// Euclidean division: a = q b + r with deg r < deg b.
std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b);
RatPoly exact_quotient(const RatPoly& a, const RatPoly& b);
/// Monic gcd; gcd(0, 0) = 0.
RatPoly gcd(RatPoly a, RatPoly b);

struct SquarefreeFactor {
    RatPoly factor; ///< monic, squarefree
    unsigned multiplicity;
};

/// Yun's algorithm; factors are pairwise coprime and multiply (with
/// multiplicities) to the monic part of p.
std::vector<SquarefreeFactor> squarefree_decomposition(const RatPoly& p);

/// Number of distinct real roots in the open interval (lo, hi) via a Sturm
/// sequence. Requires p(lo) != 0 and p(hi) != 0.
std::size_t count_real_roots(const RatPoly& p, const Rational& lo, const Rational& hi);

/// For a reciprocal polynomial g (g = x^deg g(1/x)) of even degree 2e,
/// returns h with g(x) = x^e h(x + 1/x).
RatPoly reciprocal_trace_polynomial(const RatPoly& g);

/// Monic polynomial with integer coefficients, constant term first.
RatPoly monic_from_integers(const std::vector<long>& lower_coeffs);

} // namespace anosov
