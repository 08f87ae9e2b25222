#include "anosov/exotic.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace anosov;

TEST(Exotic, FourFamilies)
{
    const auto facts = gromoll_facts();
    ASSERT_EQ(facts.size(), 4u);
    std::set<std::string> families;
    for (const auto& f : facts)
        families.insert(f.family);
    EXPECT_EQ(families.size(), 4u);

    int bounds = 0;
    for (const auto& f : facts) {
        if (f.statement == GromollStatement::OrderLowerBound) {
            ++bounds;
            ASSERT_TRUE(f.bound);
            EXPECT_EQ(*f.bound, 508u);
            EXPECT_EQ(f.dimension, "21");
            EXPECT_EQ(f.index, "6");
        } else {
            EXPECT_FALSE(f.bound);
        }
    }
    EXPECT_EQ(bounds, 1);
}

TEST(Exotic, Queries)
{
    auto q = query_gromoll(21, 6);
    ASSERT_TRUE(q);
    EXPECT_EQ(q->statement, GromollStatement::OrderLowerBound);
    EXPECT_EQ(q->bound, 508u);

    for (std::uint64_t n = 6; n < 40; ++n) {
        auto c = query_gromoll(n, 2);
        ASSERT_TRUE(c) << n;
        EXPECT_EQ(c->statement, GromollStatement::EqualNext);
    }
    EXPECT_FALSE(query_gromoll(5, 2));

    auto m4 = query_gromoll(15, 6);
    ASSERT_TRUE(m4);
    EXPECT_EQ(m4->statement, GromollStatement::Nonvanishing);
    auto m5 = query_gromoll(19, 8);
    ASSERT_TRUE(m5);
    EXPECT_EQ(m5->statement, GromollStatement::Nonvanishing);
    EXPECT_FALSE(query_gromoll(11, 4)); // m = 3 is below the range
    EXPECT_FALSE(query_gromoll(15, 7));

    // the 4m+1 family depends on v(m), which is not tabulated
    EXPECT_FALSE(query_gromoll(17, 2 * 4));
}

TEST(Exotic, ObstructionMatchesDivisibility)
{
    for (std::uint64_t d = 1; d <= 2000; ++d)
        for (std::uint64_t q = 1; q <= 2000; ++q)
            ASSERT_EQ(prop1_distinct(d, q), q % d != 0) << d << " " << q;
    EXPECT_TRUE(prop1_distinct(7, 2));
    EXPECT_FALSE(prop1_distinct(2, 4));
    EXPECT_FALSE(prop1_distinct(1, 13));
    EXPECT_THROW(prop1_distinct(0, 3), std::invalid_argument);
}

TEST(Exotic, DimensionCongruence)
{
    EXPECT_EQ(dimension_congruence(3, 2), 3u);
    EXPECT_EQ(dimension_congruence(2, 2), 5u);
    for (std::size_t k = 2; k < 30; ++k)
        for (std::size_t s = 1; s < 30; ++s) {
            int hits = 0;
            for (std::size_t sigma = 2; sigma <= 5; ++sigma)
                hits += (s * (k - 1) + sigma) % 4 == 3;
            EXPECT_EQ(hits, 1);
            const std::size_t sigma = dimension_congruence(k, s);
            EXPECT_GE(sigma, 2u);
            EXPECT_LE(sigma, 5u);
            EXPECT_EQ((s * (k - 1) + sigma) % 4, 3u);
        }
}
