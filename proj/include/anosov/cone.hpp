#pragma once

#include "anosov/matrix.hpp"

#include <Eigen/Dense>

#include <limits>
#include <string>
#include <vector>

namespace anosov {

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;

/// Sentinel for "no return within the iteration cap".
inline constexpr long kNoReturn = std::numeric_limits<long>::max();

/// Axis-aligned box in eigen-coordinates.
struct Box {
    Vec lo;
    Vec hi;

    std::size_t dim() const { return static_cast<std::size_t>(lo.size()); }
    Vec center() const { return (lo + hi) / 2; }
    bool contains(const Vec& p, double tol = 0.0) const;
    bool intersects(const Box& other) const;
    Box inflated(double r) const;
    Box hull(const Box& other) const;
    friend bool operator==(const Box&, const Box&) = default;
};

/// Boxes of the construction, all in eigen-coordinates p = V^-1 z where L is
/// diagonal with the k contracting directions first.
struct RegionLayout {
    std::size_t n = 0;
    std::size_t k = 0;
    double scale = 0.0;
    RatMatrix matrix;
    Mat basis;         ///< V: eigen-coordinates to lattice coordinates
    Mat basis_inverse; ///< V^-1
    Vec eigenvalues;   ///< diagonal of L in eigen-coordinates
    Vec home;          ///< lattice-coordinate center of the fundamental domain used for reduction

    Box r0_plus, r0_minus, r0;
    Box u0_plus, u0_minus, u0;
    Box r1_plus, r1_minus, r2_plus;
    Box u1, u1_plus, u1_minus, u2, u2_plus;
    std::vector<Box> tube;
    std::vector<Box> v0; ///< U1-, U2+ and the tube
    std::vector<Box> w;  ///< U0, U1+ and V0
    std::vector<Box> p;  ///< V0 and U1+

    double min_unstable() const;  ///< min |lambda| over expanding directions
    double max_unstable() const;
    double max_stable() const;    ///< max |lambda| over contracting directions
    double min_stable() const;
    Box image(const Box& b, int power) const; ///< L^power(b)
};

/// Throws std::invalid_argument when L is not a hyperbolic integer matrix with
/// real diagonalizable spectrum and k contracting directions, and
/// std::domain_error when the boxes are not disjoint modulo Z^n at this scale.
RegionLayout layout_regions(const RatMatrix& l, std::size_t k, double scale);

/// Rotation of the first two expanding coordinates about the center of a box,
/// by an angle sign * strength * bump(p) that vanishes near the box boundary.
struct Twist {
    Box box;
    double sign = 1.0;
};

/// f = f1 o L o f2^-1 on R^n / s^m Z^n, with f1 twisting R1+ and R1- in
/// opposite senses and f2 twisting R1- and R2+.
class PerturbedMap {
public:
    PerturbedMap(RegionLayout layout, double strength, unsigned s, unsigned m);

    const RegionLayout& layout() const { return layout_; }
    double strength() const { return strength_; }
    unsigned cover_base() const { return s_; }
    unsigned m() const { return m_; }
    double period() const { return period_; }

    Vec reduce(const Vec& p) const;
    Vec apply(const Vec& p) const;
    Vec apply_inverse(const Vec& p) const;
    Mat derivative(const Vec& p) const;
    Mat inverse_derivative(const Vec& p) const;
    /// f(p) or f^-1(p), with the derivative at p written to d.
    Vec step(const Vec& p, bool forward, Mat& d) const;
    Vec linear(const Vec& p) const;

    /// p lies in one of the boxes modulo the lattice.
    bool in_set(const Vec& p, const std::vector<Box>& boxes) const;

    /// max |f - L| over a grid on the faces of the modified regions.
    double boundary_discrepancy(unsigned grid) const;

    const std::vector<Twist>& f1() const { return f1_; }
    const std::vector<Twist>& f2() const { return f2_; }

private:
    RegionLayout layout_;
    double strength_;
    unsigned s_;
    unsigned m_;
    double period_;
    std::vector<Twist> f1_;
    std::vector<Twist> f2_;

    Vec twist(const std::vector<Twist>& ts, double direction, const Vec& p, Mat* d) const;
    Vec evaluate(const Vec& p, bool forward, Mat* d) const;
};

PerturbedMap build_perturbed_map(const RegionLayout& layout, double strength, unsigned s, unsigned m);

/// Lattice vectors l (eigen-coordinates) of s^m Z^n with b + l meeting target.
std::vector<Vec> lattice_translates(const RegionLayout& layout, double period, const Box& b, const Box& target,
                                    bool first_only = false);

struct AlphaResult {
    double alpha = 0.0;
    double linear_bound = 0.0; ///< min |lambda_u|^3
    unsigned grid = 0;
    std::size_t samples = 0;
    Vec witness;
};

/// Grid infimum over W of the smallest singular value of Df^3 along the
/// expanding foliation.
AlphaResult measure_alpha(const PerturbedMap& f, unsigned grid);

struct ReturnBounds {
    long n1 = kNoReturn;
    long n2 = kNoReturn;
};

/// Outer-enclosure iteration of W forward and P backward.
ReturnBounds first_return_bounds(const PerturbedMap& f, long cap = 64);

/// Grid data for the cone conditions; independent of the cover exponent.
struct ConeSamples {
    double epsilon = 0.0;
    unsigned grid = 0;
    std::size_t samples = 0;
    AlphaResult alpha;
    double coupling = 0.0;  ///< worst (|H_yx| + t|H_yy|) / (t sigma_min(H_xx))
    Vec coupling_witness;
    double expansion = 0.0; ///< worst sigma_min(H_xx) / |B_xx|, growth of the stable component
    Vec expansion_witness;
    double stable_rate = 0.0; ///< min |Df^-1 v| / |v| over stable v
};

ConeSamples sample_cone_data(const PerturbedMap& f, double epsilon, unsigned grid);

struct ConeMargins {
    double no_return = 0.0;  ///< N2 - 1 - N
    double invariance = 0.0; ///< 1 - coupling / kappa^(N-2)
    double expansion = 0.0;  ///< lambda - 1
    double unstable = 0.0;   ///< log(alpha lambda_u^(N1-3))
};

struct ConeCertificate {
    double epsilon = 0.0;
    double alpha = 0.0;
    long n1 = kNoReturn;
    long n2 = kNoReturn;
    long n = 0;
    double lambda = 0.0;
    double mu = 0.0;
    double stable_rate = 0.0;
    double unstable_rate = 0.0; ///< min |lambda_u|
    unsigned m = 0;
    unsigned grid = 0;
    ConeMargins margins;
};

struct CertifyResult {
    bool valid = false;
    ConeCertificate certificate;
    std::vector<std::string> violations; ///< in order: unstable-expansion, no-return, invariance, expansion
    Vec witness;                         ///< for the first violation
};

CertifyResult certify_with(const PerturbedMap& f, const ConeSamples& samples, const ReturnBounds& returns,
                           long n_cap = 64);
CertifyResult certify(const PerturbedMap& f, double epsilon, unsigned grid);

struct PerturbationSpec {
    RatMatrix l;
    std::size_t k = 0;
    double scale = 0.002;
    double strength = 0.0;
    unsigned s = 2;
    unsigned m_cap = 6;
    double epsilon = 0.1;
    unsigned grid = 32;
};

struct GrowthRow {
    unsigned m = 0;
    long n1 = kNoReturn;
    long n2 = kNoReturn;
    bool valid = false;
};

struct MinimalMResult {
    bool found = false;
    unsigned m0 = 0;
    std::vector<GrowthRow> table; ///< m = 1 .. m_cap
    std::vector<unsigned> grids;  ///< grids used until the decisions agreed
    bool grid_stable = false;
    CertifyResult certificate;    ///< at m0, or at m_cap when none found
    std::vector<CertifyResult> runs; ///< final-grid result for every m in the table
};

/// Smallest m <= m_cap with a certificate, with grid doubling until two
/// consecutive grids give the same decisions.
MinimalMResult minimal_m(const PerturbationSpec& spec, unsigned max_doublings = 1);

} // namespace anosov
