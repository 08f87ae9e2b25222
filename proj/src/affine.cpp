#include "anosov/affine.hpp"

#include <stdexcept>

namespace anosov {

AffineMap::AffineMap(RatMatrix a, RatVector t) : linear(std::move(a)), translation(std::move(t))
{
    if (!linear.is_square() || linear.rows() != translation.size()) {
        throw std::invalid_argument("affine map shape mismatch");
    }
}

AffineMap AffineMap::identity(std::size_t n) { return {RatMatrix::identity(n), RatVector(n)}; }

AffineMap AffineMap::translation_by(const RatVector& t) { return {RatMatrix::identity(t.size()), t}; }

AffineMap AffineMap::linear_map(const RatMatrix& a) { return {a, RatVector(a.rows())}; }

bool AffineMap::is_invertible() const { return determinant(linear) != 0; }

RatVector AffineMap::operator()(const RatVector& x) const { return linear * x + translation; }

AffineMap AffineMap::inverse() const
{
    RatMatrix inv = anosov::inverse(linear);
    RatVector t = -(inv * translation);
    return {std::move(inv), std::move(t)};
}

AffineMap operator*(const AffineMap& a, const AffineMap& b)
{
    return {a.linear * b.linear, a.linear * b.translation + a.translation};
}

AffineMap power(const AffineMap& a, unsigned long exponent)
{
    AffineMap result = AffineMap::identity(a.dim());
    AffineMap base = a;
    while (exponent > 0) {
        if (exponent & 1UL) {
            result = result * base;
        }
        base = base * base;
        exponent >>= 1;
    }
    return result;
}

AffineMap conjugate(const AffineMap& a, const AffineMap& g) { return a * g * a.inverse(); }

} // namespace anosov
