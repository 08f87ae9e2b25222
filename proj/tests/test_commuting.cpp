#include "anosov/commuting.hpp"
#include "anosov/errors.hpp"
#include "anosov/io.hpp"
#include "anosov/spectrum.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace anosov;

namespace {

const std::string kFixtures = ANOSOV_FIXTURE_DIR;

// Checks the conclusion of the construction directly in the input frame,
// without using any intermediate data of the pair.
void expect_commuting_in_original_frame(const CrystalGroup& gamma, const AffineMap& l, const CommutingPair& pair)
{
    const AffineMap& e = pair.expanding_original;
    const AffineMap& lp = pair.anosov_power_original;
    const std::size_t n = gamma.dim;

    EXPECT_EQ(lp, power(l, pair.exponent));
    Integer sq = 1;
    for (std::size_t i = 0; i < pair.q; ++i)
        sq *= pair.s;
    EXPECT_EQ(e.linear, RatMatrix::scalar(n, Rational(sq)));

    // E L^N = t L^N E with t a lattice translation of gamma
    const AffineMap lhs = e * lp;
    const AffineMap rhs = lp * e;
    EXPECT_EQ(lhs.linear, rhs.linear);
    EXPECT_TRUE(gamma.in_lattice(lhs.translation - rhs.translation));

    // E gamma E^-1 inside gamma, L^N gamma L^-N = gamma, on generators
    const AffineMap e_inv = e.inverse();
    for (std::size_t i = 0; i < gamma.order(); ++i)
        EXPECT_TRUE(gamma.contains(e * gamma.representative(i) * e_inv));
    for (std::size_t j = 0; j < n; ++j)
        EXPECT_TRUE(gamma.contains(e * AffineMap::translation_by(gamma.lattice.column(j)) * e_inv));
    EXPECT_TRUE(normalizes(lp, gamma));

    // a common fixed point on the quotient: both maps move x by lattice translations
    const RatVector x = pair.fixed_point_original;
    EXPECT_TRUE(gamma.in_lattice(e(x) - x));
    EXPECT_TRUE(gamma.in_lattice(lp(x) - x));
    EXPECT_TRUE(check_commuting_pair(pair).empty());
}

} // namespace

TEST(Commuting, DefaultScale)
{
    EXPECT_EQ(default_scale(1), 2);
    EXPECT_EQ(default_scale(2), 3);
    EXPECT_EQ(default_scale(6), 7);
}

TEST(Commuting, TorusCatMap)
{
    const CrystalGroup t = CrystalGroup::torus(2);
    const AffineMap cat = AffineMap::linear_map(RatMatrix{{2, 1}, {1, 1}});
    const CommutingPair pair = prop3_pipeline(t, cat);
    EXPECT_EQ(pair.s, 2);
    EXPECT_EQ(pair.reduction_exponent, 1u);
    EXPECT_EQ(pair.exponent, 1u);
    expect_commuting_in_original_frame(t, cat, pair);
}

TEST(Commuting, ThreeKleinCopiesFixture)
{
    const CrystalGroup g = group_from_json(read_json_file(kFixtures + "/klein3_group.json"));
    const AffineMap l = affine_from_json(read_json_file(kFixtures + "/klein3_anosov.json"));
    ASSERT_TRUE(validate_group(g).valid);
    ASSERT_TRUE(is_anosov_matrix(l.linear));
    const CommutingPair pair = prop3_pipeline(g, l);
    EXPECT_EQ(pair.q, 2u);
    EXPECT_EQ(pair.s, 3);
    // (A + I) w must be integral for the two-fold power
    EXPECT_TRUE(pair.w_hat.is_integral());
    for (std::size_t i = 0; i < pair.normalized.order(); ++i)
        EXPECT_TRUE(pair.normalized.section[i].in_scaled_lattice(2));
    expect_commuting_in_original_frame(g, l, pair);

    const CommutingPair five = prop3_pipeline(g, l, Integer(5));
    EXPECT_EQ(five.s, 5);
    expect_commuting_in_original_frame(g, l, five);
}

TEST(Commuting, PlantedConjugatedTorus)
{
    std::mt19937 rng(53);
    for (int t = 0; t < 10; ++t) {
        const AffineMap a(anosov::testing::random_unimodular(rng, 3), anosov::testing::random_rational_vector(rng, 3));
        const RatMatrix c = codim_one_anosov(3);
        const CrystalGroup g = conjugate_group(CrystalGroup::torus(3), a);
        const AffineMap l = a * AffineMap::linear_map(c) * a.inverse();
        const CommutingPair pair = prop3_pipeline(g, l);
        EXPECT_EQ(pair.q, 1u);
        expect_commuting_in_original_frame(g, l, pair);
    }
}

TEST(Commuting, NonNormalizingMapIsLabelled)
{
    const CrystalGroup k = CrystalGroup::klein_bottle();
    const AffineMap l = AffineMap::linear_map(RatMatrix{{2, 1}, {1, 1}});
    try {
        prop3_pipeline(k, l);
        FAIL() << "expected a verification error";
    } catch (const VerificationError& e) {
        EXPECT_EQ(e.stage(), "reduce_power");
    }
}

TEST(Commuting, InvalidGroupIsLabelled)
{
    CrystalGroup g(2, {RatMatrix::identity(2), RatMatrix{{0, -1}, {1, 0}}}, {RatVector(2), RatVector(2)});
    try {
        prop3_pipeline(g, AffineMap::identity(2));
        FAIL() << "expected a verification error";
    } catch (const VerificationError& e) {
        EXPECT_EQ(e.stage(), "validate");
    }
}

TEST(Commuting, ThetaAndExpanding)
{
    const CrystalGroup k = claim1_normalize(CrystalGroup::klein_bottle()).normalized;
    const CrossedHom theta = build_theta(k, 3);
    for (const auto& v : theta.values)
        EXPECT_TRUE(v.is_integral());
    EXPECT_THROW(build_theta(k, 4), std::invalid_argument);

    const ExpandingResult e = find_expanding(k, 3);
    EXPECT_EQ(e.map.linear, RatMatrix::scalar(2, 3));
    for (std::size_t i = 0; i < k.order(); ++i)
        EXPECT_TRUE(k.contains(e.map * k.representative(i) * e.map.inverse()));
}
