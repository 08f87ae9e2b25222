#pragma once

#include "anosov/matrix.hpp"

#include <array>
#include <vector>

namespace anosov {

/// Two-step nilpotent group on Q^6 with coordinates (x1, y1, z1, x2, y2, z2):
/// (x, y, z) * (x', y', z') = (x + x', y + y', z + z' + m(x, y')), where x, y,
/// z in Q^2 and m is bilinear, m(x, y)_k = sum_ij t[k][i][j] x_i y_j.
struct NilStructure {
    std::array<std::array<std::array<Rational, 2>, 2>, 2> t;

    /// H3(R) x H3(R): m(x, y)_k = x_k y_k.
    static NilStructure split();
    /// H3 over Z[sqrt 3] in the basis (1, sqrt 3): m is multiplication in the ring.
    static NilStructure sqrt3();

    std::array<Rational, 2> bracket(const std::array<Rational, 2>& x, const std::array<Rational, 2>& y) const;
    friend bool operator==(const NilStructure&, const NilStructure&) = default;
};

struct HeisPoint {
    std::array<Rational, 6> c; ///< x1, y1, z1, x2, y2, z2

    static HeisPoint identity() { return {}; }
    static HeisPoint from_ints(std::array<long, 6> v);

    std::array<Rational, 2> x() const { return {c[0], c[3]}; }
    std::array<Rational, 2> y() const { return {c[1], c[4]}; }
    std::array<Rational, 2> z() const { return {c[2], c[5]}; }
    /// (x1, y1, x2, y2)
    RatVector horizontal() const;
    RatVector central() const;
    static HeisPoint assemble(const RatVector& horizontal, const RatVector& central);

    friend bool operator==(const HeisPoint&, const HeisPoint&) = default;
};

HeisPoint heis_mul(const NilStructure& g, const HeisPoint& a, const HeisPoint& b);
HeisPoint heis_mul(const HeisPoint& a, const HeisPoint& b); ///< split structure
HeisPoint heis_inverse(const NilStructure& g, const HeisPoint& a);
HeisPoint heis_power(const NilStructure& g, const HeisPoint& a, const Integer& e);
HeisPoint heis_commutator(const NilStructure& g, const HeisPoint& a, const HeisPoint& b);

/// Endomorphism (h, z) -> (P h, Q z + ell h + B(h)), h = (x1, y1, x2, y2) and
/// B(h)_k = sum_ij quad[k][i][j] h_i h_j with quad[k] symmetric. Any
/// endomorphism of the group has this form, so maps are compared by comparing
/// these coefficients.
struct NilAuto {
    NilStructure structure;
    RatMatrix p;    ///< 4 x 4 on horizontal coordinates
    RatMatrix q;    ///< 2 x 2 on the center
    RatMatrix ell;  ///< 2 x 4
    std::array<RatMatrix, 2> quad;

    NilAuto() = default;
    NilAuto(NilStructure s, RatMatrix p_, RatMatrix q_);

    HeisPoint operator()(const HeisPoint& a) const;
    /// 6 x 6 derivative at the identity on (X1, Y1, Z1, X2, Y2, Z2).
    RatMatrix derivative() const;
    /// Respects the group law; quad must equal half the defect form.
    bool is_homomorphism() const;
    friend bool operator==(const NilAuto&, const NilAuto&) = default;
};

/// Endomorphism with the given 6 x 6 derivative at the identity; the quadratic
/// part is forced by the group law. Throws std::invalid_argument when d is not
/// 6 x 6 or moves the center out of itself.
NilAuto nil_auto_from_derivative(const NilStructure& s, const RatMatrix& d);

/// (a * b)(p) = a(b(p))
NilAuto compose(const NilAuto& a, const NilAuto& b);
NilAuto nil_power(const NilAuto& a, unsigned exponent);
NilAuto nil_identity(const NilStructure& s);

/// x -> 2x, y -> 2y, z -> 4z on each factor.
NilAuto borel_smale_E1(const NilStructure& s = NilStructure::split());
/// The hyperbolic automorphism on H3 over Z[sqrt 3]: x -> lambda x,
/// y -> lambda^2 y, z -> lambda^3 z with lambda = 2 + sqrt 3.
NilAuto borel_smale_L1();
/// Exchanges the two factors of the split structure.
NilAuto factor_swap();

bool check_commuting_nil(const NilAuto& l, const NilAuto& e);

/// Standard generators: unit vectors in x1, y1, x2, y2, z1, z2.
std::vector<HeisPoint> standard_lattice();

/// True iff a is in the subgroup generated by gens (exact, via the horizontal
/// lattice and the central subgroup it forces).
bool lattice_contains(const NilStructure& s, const std::vector<HeisPoint>& gens, const HeisPoint& a);
/// L maps each generator into the subgroup generated by gens.
bool check_lattice_preserved(const NilAuto& l, const std::vector<HeisPoint>& gens);

struct RescaledLattice {
    unsigned m = 0;
    std::vector<HeisPoint> generators;
    /// r_m >= radius: half of a lower bound on the coordinate norm of every
    /// non-identity element of E^m(Gamma).
    Rational radius;
    Rational shortest_generator; ///< shortest generator coordinate norm, for reference
};

RescaledLattice rescale_lattice(const NilAuto& e, unsigned m,
                                const std::vector<HeisPoint>& gens = standard_lattice());

} // namespace anosov
