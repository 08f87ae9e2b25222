#pragma once

#include "anosov/matrix.hpp"
#include "anosov/polynomial.hpp"

#include <complex>
#include <vector>

namespace anosov {

struct SpectralClass {
    std::size_t unstable_dim = 0; ///< eigenvalues with |lambda| > 1
    std::size_t stable_dim = 0;   ///< eigenvalues with |lambda| < 1
    std::size_t unit_dim = 0;     ///< eigenvalues with |lambda| = 1
    std::size_t codimension = 0;  ///< min(stable_dim, unstable_dim)
    bool certified_exact = false;

    friend bool operator==(const SpectralClass&, const SpectralClass&) = default;
};

struct SpectrumOptions {
    unsigned precision_bits = 128; ///< starting dyadic precision of root refinement
    unsigned max_precision_bits = 1u << 14;
};

/// det(xI - m), monic, exact.
RatPoly char_poly(const RatMatrix& m);

/// Counts roots of p inside, on and outside the unit circle (with multiplicity).
/// The unit-circle count is exact (reciprocal gcd + Sturm); the inside/outside
/// split is certified by Weierstrass inclusion disks in exact arithmetic.
SpectralClass classify_polynomial(const RatPoly& p, const SpectrumOptions& opts = {});
SpectralClass classify_spectrum(const RatMatrix& m, const SpectrumOptions& opts = {});

/// Number of roots of p on the unit circle, with multiplicity, decided exactly.
std::size_t unit_circle_root_count(const RatPoly& p);

/// det = +-1, integral, and no eigenvalue on the unit circle.
bool is_anosov_matrix(const RatMatrix& m);
/// Every eigenvalue has modulus > 1.
bool is_expanding_matrix(const RatMatrix& m);

/// Companion matrix of a monic polynomial: ones on the subdiagonal, last
/// column -c_0 .. -c_{d-1}.
RatMatrix companion(const RatPoly& monic_poly);

/// An s x s integer companion matrix of a unimodular polynomial with exactly
/// one root outside the closed unit disk and none on the circle.
RatMatrix codim_one_anosov(std::size_t s);

/// Id_m (x) a1.
RatMatrix tensor_with_identity(const RatMatrix& a1, std::size_t m);

/// Floating-point root approximations (Aberth iteration), for reporting.
std::vector<std::complex<double>> approximate_roots(const RatPoly& p);

/// Certified root inclusion for a squarefree polynomial: disks D(center, radius)
/// that are pairwise disjoint, each containing exactly one root.
struct RootDisk {
    Rational re;
    Rational im;
    Rational radius; ///< upper bound
};
std::vector<RootDisk> isolate_roots(const RatPoly& squarefree, unsigned precision_bits,
                                    unsigned max_precision_bits);

} // namespace anosov
