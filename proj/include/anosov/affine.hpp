#pragma once

#include "anosov/matrix.hpp"

namespace anosov {

/// x -> linear * x + translation
struct AffineMap {
    RatMatrix linear;
    RatVector translation;

    AffineMap() = default;
    AffineMap(RatMatrix a, RatVector t);

    static AffineMap identity(std::size_t n);
    static AffineMap translation_by(const RatVector& t);
    static AffineMap linear_map(const RatMatrix& a);

    std::size_t dim() const { return linear.rows(); }
    bool is_translation() const { return linear.is_identity(); }
    bool is_invertible() const;

    RatVector operator()(const RatVector& x) const;
    AffineMap inverse() const;

    friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

/// (a * b)(x) = a(b(x))
AffineMap operator*(const AffineMap& a, const AffineMap& b);
AffineMap power(const AffineMap& a, unsigned long exponent);
/// a * g * a^-1
AffineMap conjugate(const AffineMap& a, const AffineMap& g);

} // namespace anosov
