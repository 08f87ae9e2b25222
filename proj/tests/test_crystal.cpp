#include "anosov/crystal.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace anosov;
using anosov::testing::random_crystal_group;

namespace {

std::size_t linear_order(const RatMatrix& g)
{
    RatMatrix p = g;
    for (std::size_t k = 1; k <= 12; ++k, p = p * g)
        if (p.is_identity())
            return k;
    return 0;
}

// Searches elements (g, u_g + B z) with z in a small box for one of finite
// order other than the identity.
bool has_small_torsion(const CrystalGroup& gamma)
{
    const std::size_t n = gamma.dim;
    std::vector<int> z(n, -2);
    for (std::size_t i = 0; i < gamma.order(); ++i) {
        if (gamma.holonomy[i].is_identity())
            continue;
        const std::size_t k = linear_order(gamma.holonomy[i]);
        std::fill(z.begin(), z.end(), -2);
        while (true) {
            RatVector zv(n);
            for (std::size_t j = 0; j < n; ++j)
                zv[j] = z[j];
            AffineMap e(gamma.holonomy[i], gamma.section[i] + gamma.lattice * zv);
            if (power(e, k) == AffineMap::identity(n))
                return true;
            std::size_t j = 0;
            while (j < n && ++z[j] > 2)
                z[j++] = -2;
            if (j == n)
                break;
        }
    }
    return false;
}

} // namespace

TEST(Crystal, KleinBottle)
{
    const CrystalGroup k = CrystalGroup::klein_bottle();
    const ValidationReport r = validate_group(k);
    EXPECT_TRUE(r.valid);
    EXPECT_TRUE(r.torsion_free);
    EXPECT_TRUE(r.faithful);
    EXPECT_EQ(r.order, 2u);
    EXPECT_FALSE(has_small_torsion(k));
}

TEST(Crystal, RejectsNonClosedHolonomy)
{
    CrystalGroup g(2, {RatMatrix::identity(2), RatMatrix{{0, -1}, {1, 0}}}, {RatVector(2), RatVector(2)});
    const ValidationReport r = validate_group(g);
    EXPECT_FALSE(r.valid);
    EXPECT_FALSE(r.closed);
    EXPECT_FALSE(r.violation.empty());
}

TEST(Crystal, RejectsInconsistentTranslations)
{
    // The reflection squared must give a lattice translation; 1/3 twice does not.
    CrystalGroup g = CrystalGroup::klein_bottle();
    g.section[1][0] = make_rational(1, 3);
    EXPECT_FALSE(validate_group(g).valid);
}

TEST(Crystal, TorsionCriterionAgreesWithElementSearch)
{
    std::mt19937 rng(23);
    for (int t = 0; t < 40; ++t) {
        const bool torsion = t % 2 == 1;
        const CrystalGroup g = random_crystal_group(rng, torsion);
        const ValidationReport r = validate_group(g);
        ASSERT_TRUE(r.closed) << r.violation;
        EXPECT_EQ(r.torsion_free, !has_small_torsion(g)) << "trial " << t;
        EXPECT_EQ(r.torsion_free, !torsion);
    }
}

TEST(Crystal, AveragingNormalizesRandomGroups)
{
    std::mt19937 rng(29);
    for (int t = 0; t < 30; ++t) {
        const CrystalGroup g = random_crystal_group(rng);
        const Claim1Result c = claim1_normalize(g);
        const Integer q(static_cast<unsigned long>(g.order()));
        EXPECT_EQ(c.normalized, conjugate_group(g, AffineMap::translation_by(c.u0)));
        EXPECT_TRUE(validate_group(c.normalized).valid);
        for (std::size_t i = 0; i < c.normalized.order(); ++i) {
            const RatVector u = c.normalized.lattice_coords(c.normalized.section[i]);
            // q * u integral, checked entrywise
            for (const auto& x : u)
                EXPECT_TRUE(is_integral(Rational(x * Rational(q)))) << to_string(x);
        }
    }
}

TEST(Crystal, CocycleLawHolds)
{
    std::mt19937 rng(31);
    for (int t = 0; t < 20; ++t) {
        const CrystalGroup g = random_crystal_group(rng);
        const CrossedHom c = holonomy_cocycle(g);
        EXPECT_TRUE(c.satisfies_cocycle_law());
        // independent check of c(gh) = g c(h) + c(g) mod Z^n
        for (std::size_t a = 0; a < c.group.size(); ++a)
            for (std::size_t b = 0; b < c.group.size(); ++b) {
                const std::size_t ab = c.index_of(c.group[a] * c.group[b]);
                EXPECT_TRUE((c.values[ab] - c.group[a] * c.values[b] - c.values[a]).is_integral());
            }
    }
}

TEST(Crystal, PrincipalVectorPlantedExact)
{
    std::mt19937 rng(37);
    for (int t = 0; t < 100; ++t) {
        const CrystalGroup g = random_crystal_group(rng);
        const RatVector v = anosov::testing::random_rational_vector(rng, g.dim, 12);
        CrossedHom c;
        for (std::size_t i = 0; i < g.order(); ++i) {
            c.group.push_back(g.holonomy_in_lattice(i));
            c.values.push_back(c.group.back() * v - v);
        }
        const auto w = find_principal_vector(c, Integer(static_cast<unsigned long>(g.order())));
        ASSERT_TRUE(w);
        for (std::size_t i = 0; i < c.group.size(); ++i)
            EXPECT_EQ(c.values[i], c.group[i] * *w - *w);
    }
}

TEST(Crystal, PrincipalVectorPlantedModular)
{
    std::mt19937 rng(41);
    for (int t = 0; t < 50; ++t) {
        const CrystalGroup g = random_crystal_group(rng);
        const Integer q(static_cast<unsigned long>(g.order()));
        const RatVector v = anosov::testing::random_rational_vector(rng, g.dim, 12);
        CrossedHom c;
        c.modulus = q;
        std::uniform_int_distribution<int> noise(-3, 3);
        for (std::size_t i = 0; i < g.order(); ++i) {
            c.group.push_back(g.holonomy_in_lattice(i));
            RatVector n(g.dim);
            for (std::size_t j = 0; j < g.dim; ++j)
                n[j] = noise(rng);
            c.values.push_back(c.group.back() * v - v + n);
        }
        const auto w = find_principal_vector(c, q);
        ASSERT_TRUE(w);
        for (std::size_t i = 0; i < c.group.size(); ++i)
            EXPECT_TRUE((c.values[i] - (c.group[i] * *w - *w)).in_scaled_lattice(q));
    }
}

TEST(Crystal, NonPrincipalCocycleRejected)
{
    // Klein bottle: c(reflection) = (1/2, 0) is not g v - v modulo Z^2 since
    // g v - v = (0, -2 v_2) has vanishing first coordinate.
    const CrossedHom c = holonomy_cocycle(CrystalGroup::klein_bottle());
    EXPECT_FALSE(find_principal_vector(c, 1));
}

TEST(Crystal, NormalizersAndReduction)
{
    const CrystalGroup t = CrystalGroup::torus(2);
    EXPECT_TRUE(normalizes(AffineMap::linear_map(RatMatrix{{2, 1}, {1, 1}}), t));
    EXPECT_FALSE(normalizes(AffineMap::linear_map(RatMatrix{{2, 0}, {0, 1}}), t));

    const CrystalGroup k = CrystalGroup::klein_bottle();
    EXPECT_TRUE(normalizes(AffineMap::translation_by(RatVector{1, 0}), k));
    EXPECT_TRUE(normalizes(AffineMap::translation_by(RatVector{0, make_rational(1, 2)}), k));
    EXPECT_FALSE(normalizes(AffineMap::translation_by(RatVector{0, make_rational(1, 3)}), k));
    const auto induced = induced_holonomy_map(AffineMap::translation_by(RatVector{1, 0}), k);
    EXPECT_EQ(induced, (std::vector<std::size_t>{0, 1}));

    std::mt19937 rng(43);
    const CrystalGroup g = random_crystal_group(rng);
    const CrystalGroup r = reduce_section(g);
    for (std::size_t i = 0; i < r.order(); ++i)
        for (const auto& x : r.lattice_coords(r.section[i])) {
            EXPECT_GE(x, 0);
            EXPECT_LT(x, 1);
        }
    for (std::size_t i = 0; i < g.order(); ++i)
        EXPECT_TRUE(g.contains(r.representative(i)));
}
