#include "anosov/heisenberg.hpp"
#include "anosov/spectrum.hpp"
#include "support.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace anosov;

namespace {

HeisPoint random_point(std::mt19937& rng)
{
    std::uniform_int_distribution<long> num(-6, 6), den(1, 4);
    HeisPoint p;
    for (auto& c : p.c)
        c = make_rational(num(rng), den(rng));
    return p;
}

// Group law written out from the definition: z + z' + m(x, y').
HeisPoint reference_mul(const NilStructure& s, const HeisPoint& a, const HeisPoint& b)
{
    HeisPoint out;
    const Rational x[2] = {a.c[0], a.c[3]};
    const Rational y[2] = {b.c[1], b.c[4]};
    for (int k = 0; k < 2; ++k) {
        Rational m = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                m += s.t[k][i][j] * x[i] * y[j];
        const int off = 3 * k;
        out.c[off] = a.c[off] + b.c[off];
        out.c[off + 1] = a.c[off + 1] + b.c[off + 1];
        out.c[off + 2] = a.c[off + 2] + b.c[off + 2] + m;
    }
    return out;
}

double coordinate_norm(const HeisPoint& p)
{
    double s = 0;
    for (const auto& c : p.c)
        s += c.get_d() * c.get_d();
    return std::sqrt(s);
}

} // namespace

TEST(Heisenberg, GroupLaw)
{
    std::mt19937 rng(61);
    for (const NilStructure& s : {NilStructure::split(), NilStructure::sqrt3()}) {
        for (int t = 0; t < 100; ++t) {
            const HeisPoint a = random_point(rng), b = random_point(rng), c = random_point(rng);
            EXPECT_EQ(heis_mul(s, a, b), reference_mul(s, a, b));
            EXPECT_EQ(heis_mul(s, heis_mul(s, a, b), c), heis_mul(s, a, heis_mul(s, b, c)));
            EXPECT_EQ(heis_mul(s, a, heis_inverse(s, a)), HeisPoint::identity());
            EXPECT_EQ(heis_power(s, a, 3), heis_mul(s, a, heis_mul(s, a, a)));
            EXPECT_EQ(heis_power(s, a, -1), heis_inverse(s, a));
        }
    }
}

TEST(Heisenberg, CommutatorIsCentral)
{
    std::mt19937 rng(67);
    const NilStructure s = NilStructure::sqrt3();
    for (int t = 0; t < 50; ++t) {
        const HeisPoint c = heis_commutator(s, random_point(rng), random_point(rng));
        EXPECT_TRUE(c.horizontal().is_zero());
        const HeisPoint d = random_point(rng);
        EXPECT_EQ(heis_mul(s, c, d), heis_mul(s, d, c));
    }
}

TEST(Heisenberg, BorelSmaleExpandingMap)
{
    const NilAuto e = borel_smale_E1();
    EXPECT_EQ(e.derivative(), RatMatrix::diagonal({2, 2, 4, 2, 2, 4}));
    EXPECT_TRUE(e.is_homomorphism());
    EXPECT_TRUE(is_expanding_matrix(e.derivative()));
    EXPECT_TRUE(check_lattice_preserved(e, standard_lattice()));
    EXPECT_EQ(borel_smale_E1(NilStructure::sqrt3()).derivative(), RatMatrix::diagonal({2, 2, 4, 2, 2, 4}));
}

TEST(Heisenberg, MapsAreHomomorphismsPointwise)
{
    std::mt19937 rng(71);
    const NilStructure s = NilStructure::sqrt3();
    const NilAuto maps[] = {borel_smale_E1(s), borel_smale_L1(), compose(borel_smale_L1(), borel_smale_E1(s))};
    for (const auto& f : maps) {
        EXPECT_TRUE(f.is_homomorphism());
        for (int t = 0; t < 40; ++t) {
            const HeisPoint a = random_point(rng), b = random_point(rng);
            EXPECT_EQ(f(heis_mul(s, a, b)), heis_mul(s, f(a), f(b)));
        }
    }
}

TEST(Heisenberg, HyperbolicMapOverSqrt3)
{
    const NilAuto l = borel_smale_L1();
    const RatMatrix d = l.derivative();
    EXPECT_TRUE(is_anosov_matrix(d));
    const SpectralClass sc = classify_spectrum(d);
    EXPECT_EQ(sc.unstable_dim, 3u);
    EXPECT_EQ(sc.stable_dim, 3u);
    EXPECT_TRUE(check_lattice_preserved(l, standard_lattice()));

    // eigenvalues are (2 + sqrt 3)^{+-1, +-2, +-3}
    Eigen::MatrixXd m(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            m(i, j) = d(i, j).get_d();
    Eigen::VectorXcd ev = m.eigenvalues();
    std::vector<double> mods;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        mods.push_back(std::log(std::abs(ev[i])) / std::log(2 + std::sqrt(3.0)));
    std::sort(mods.begin(), mods.end());
    const double expected[] = {-3, -2, -1, 1, 2, 3};
    for (int i = 0; i < 6; ++i)
        EXPECT_NEAR(mods[i], expected[i], 1e-9);
}

TEST(Heisenberg, PowersOfExpandingMapCommuteWithL1)
{
    std::mt19937 rng(73);
    const NilStructure s = NilStructure::sqrt3();
    const NilAuto l = borel_smale_L1();
    for (unsigned k = 1; k <= 4; ++k) {
        const NilAuto ek = nil_power(borel_smale_E1(s), k);
        EXPECT_TRUE(check_commuting_nil(l, ek));
        for (int t = 0; t < 20; ++t) {
            const HeisPoint p = random_point(rng);
            EXPECT_EQ(l(ek(p)), ek(l(p)));
        }
    }
}

TEST(Heisenberg, SwapCommutesOnSplitStructure)
{
    const NilAuto sw = factor_swap();
    EXPECT_TRUE(sw.is_homomorphism());
    EXPECT_TRUE(check_commuting_nil(sw, borel_smale_E1()));
    EXPECT_EQ(nil_power(sw, 2), nil_identity(NilStructure::split()));
}

TEST(Heisenberg, DerivativeRoundTrip)
{
    const NilAuto l = borel_smale_L1();
    EXPECT_EQ(nil_auto_from_derivative(NilStructure::sqrt3(), l.derivative()), l);
    RatMatrix bad = l.derivative();
    bad(0, 2) = 1;
    EXPECT_THROW(nil_auto_from_derivative(NilStructure::sqrt3(), bad), std::invalid_argument);
}

TEST(Heisenberg, LatticeMembership)
{
    const NilStructure s = NilStructure::sqrt3();
    const auto gens = standard_lattice();
    EXPECT_TRUE(lattice_contains(s, gens, HeisPoint::from_ints({3, -1, 7, 2, 0, -5})));
    HeisPoint half = HeisPoint::identity();
    half.c[2] = make_rational(1, 2);
    EXPECT_FALSE(lattice_contains(s, gens, half));

    // The subgroup generated by 2x1, y1 and the central units has index 2 in
    // the z1 direction: [2x1, y1] = (0, 0, 2, 0, 0, 0).
    const std::vector<HeisPoint> sub{HeisPoint::from_ints({2, 0, 0, 0, 0, 0}), HeisPoint::from_ints({0, 1, 0, 0, 0, 0})};
    EXPECT_TRUE(lattice_contains(s, sub, HeisPoint::from_ints({0, 0, 2, 0, 0, 0})));
    EXPECT_FALSE(lattice_contains(s, sub, HeisPoint::from_ints({0, 0, 1, 0, 0, 0})));
    EXPECT_FALSE(lattice_contains(s, sub, HeisPoint::from_ints({1, 0, 0, 0, 0, 0})));
}

TEST(Heisenberg, RescaledRadiiAtLeastDouble)
{
    const NilAuto e = borel_smale_E1(NilStructure::sqrt3());
    Rational prev = rescale_lattice(e, 1).radius;
    for (unsigned m = 1; m <= 10; ++m) {
        const Rational next = rescale_lattice(e, m + 1).radius;
        EXPECT_GE(next, 2 * prev) << "m=" << m;
        prev = next;
    }
}

TEST(Heisenberg, RadiusIsALowerBound)
{
    // Images of small lattice elements never come closer to the identity
    // than twice the reported radius.
    const NilStructure s = NilStructure::sqrt3();
    const NilAuto e = borel_smale_E1(s);
    for (unsigned m = 0; m <= 3; ++m) {
        const RescaledLattice r = rescale_lattice(e, m);
        const NilAuto em = nil_power(e, m);
        double shortest = 1e300;
        std::array<long, 6> v{};
        for (long a = -2; a <= 2; ++a)
            for (long b = -2; b <= 2; ++b)
                for (long c = -2; c <= 2; ++c)
                    for (long d = -2; d <= 2; ++d)
                        for (long z1 = -1; z1 <= 1; ++z1)
                            for (long z2 = -1; z2 <= 1; ++z2) {
                                v = {a, b, z1, c, d, z2};
                                const HeisPoint p = HeisPoint::from_ints(v);
                                if (p == HeisPoint::identity())
                                    continue;
                                shortest = std::min(shortest, coordinate_norm(m == 0 ? p : em(p)));
                            }
        EXPECT_LE(2 * r.radius.get_d(), shortest + 1e-12) << "m=" << m;
        for (const auto& g : r.generators)
            EXPECT_TRUE(lattice_contains(s, standard_lattice(), g));
    }
}
