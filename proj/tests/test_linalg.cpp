#include "anosov/smith.hpp"
#include "anosov/spectrum.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace anosov;

namespace {

RatMatrix random_int_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi)
{
    std::uniform_int_distribution<int> d(lo, hi);
    RatMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m(i, j) = d(rng);
    return m;
}

// Leibniz expansion.
Rational leibniz_det(const RatMatrix& m)
{
    std::vector<std::size_t> perm(m.rows());
    std::iota(perm.begin(), perm.end(), 0);
    Rational total = 0;
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < perm.size(); ++i)
            for (std::size_t j = i + 1; j < perm.size(); ++j)
                inversions += perm[i] > perm[j];
        Rational term = inversions % 2 ? -1 : 1;
        for (std::size_t i = 0; i < perm.size(); ++i)
            term *= m(i, perm[i]);
        total += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

Eigen::MatrixXd to_eigen(const RatMatrix& m)
{
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            e(i, j) = m(i, j).get_d();
    return e;
}

// gcd of all k x k minors, computed by brute force over index subsets.
Integer determinantal_divisor(const RatMatrix& m, std::size_t k)
{
    std::vector<bool> rs(m.rows(), false), cs(m.cols(), false);
    std::fill(rs.end() - static_cast<long>(k), rs.end(), true);
    Integer g = 0;
    do {
        std::fill(cs.begin(), cs.end(), false);
        std::fill(cs.end() - static_cast<long>(k), cs.end(), true);
        do {
            RatMatrix sub(k, k);
            std::size_t a = 0;
            for (std::size_t i = 0; i < m.rows(); ++i) {
                if (!rs[i])
                    continue;
                std::size_t b = 0;
                for (std::size_t j = 0; j < m.cols(); ++j)
                    if (cs[j])
                        sub(a, b++) = m(i, j);
                ++a;
            }
            Integer d = leibniz_det(sub).get_num();
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
        } while (std::next_permutation(cs.begin(), cs.end()));
    } while (std::next_permutation(rs.begin(), rs.end()));
    return g;
}

} // namespace

TEST(Rational, ParseAndPrint)
{
    EXPECT_EQ(parse_rational("-6/4"), make_rational(-3, 2));
    EXPECT_EQ(to_string(make_rational(5, -10)), "-1/2");
    EXPECT_EQ(floor_of(make_rational(-7, 2)), -4);
    EXPECT_EQ(ceil_of(make_rational(-7, 2)), -3);
    EXPECT_EQ(frac_of(make_rational(-7, 2)), make_rational(1, 2));
}

TEST(Rational, SqrtEnclosure)
{
    for (long x : {0L, 1L, 2L, 3L, 10L, 12345L}) {
        Rational lo = sqrt_lower(x, 40), hi = sqrt_upper(x, 40);
        EXPECT_LE(lo * lo, Rational(x));
        EXPECT_GE(hi * hi, Rational(x));
        EXPECT_LE(hi - lo, make_rational(Integer(1), Integer(1) << 39));
    }
}

TEST(Matrix, DeterminantMatchesLeibniz)
{
    std::mt19937 rng(7);
    for (int t = 0; t < 200; ++t) {
        std::size_t n = 1 + t % 5;
        RatMatrix m = random_int_matrix(rng, n, n, -4, 4);
        EXPECT_EQ(determinant(m), leibniz_det(m));
    }
}

TEST(Matrix, InverseAndSolve)
{
    std::mt19937 rng(11);
    for (int t = 0; t < 100; ++t) {
        RatMatrix m = random_int_matrix(rng, 4, 4, -5, 5);
        if (determinant(m) == 0) {
            EXPECT_THROW(inverse(m), std::domain_error);
            continue;
        }
        EXPECT_TRUE((m * inverse(m)).is_identity());
        RatVector b{1, -2, make_rational(1, 3), 0};
        auto x = solve_linear(m, b);
        ASSERT_TRUE(x);
        EXPECT_EQ(m * *x, b);
    }
    EXPECT_FALSE(solve_linear(RatMatrix{{1, 1}, {2, 2}}, RatVector{1, 3}));
}

TEST(Matrix, KroneckerBlocks)
{
    RatMatrix a{{1, 2}, {3, 4}};
    RatMatrix k = kronecker(a, RatMatrix::identity(2));
    EXPECT_EQ(k(0, 2), 2);
    EXPECT_EQ(k(1, 3), 2);
    EXPECT_EQ(k(0, 1), 0);
    EXPECT_EQ(determinant(k), 4);
    EXPECT_EQ(block_diagonal(a, a), kronecker(RatMatrix::identity(2), a));
}

TEST(Smith, InvariantFactorsMatchDeterminantalDivisors)
{
    std::mt19937 rng(3);
    for (int t = 0; t < 60; ++t) {
        std::size_t r = 2 + t % 3, c = 2 + (t / 3) % 3;
        RatMatrix a = random_int_matrix(rng, r, c, -6, 6);
        SmithForm s = smith_normal_form(a);
        EXPECT_EQ(s.left * a * s.right, s.diagonal);
        EXPECT_EQ(std::abs(determinant(s.left).get_d()), 1.0);
        EXPECT_EQ(std::abs(determinant(s.right).get_d()), 1.0);
        Integer prev = 1;
        for (std::size_t k = 1; k <= std::min(r, c); ++k) {
            Integer dk = determinantal_divisor(a, k);
            Integer expected = dk == 0 ? Integer(0) : Integer(dk / prev);
            Integer got = k <= s.rank ? Integer(abs(s.diagonal(k - 1, k - 1).get_num())) : Integer(0);
            EXPECT_EQ(got, expected) << "k=" << k;
            if (dk == 0)
                break;
            prev = dk;
        }
    }
}

TEST(Smith, IntegerSolveAndKernel)
{
    RatMatrix a{{2, 4}, {6, 8}};
    EXPECT_FALSE(solve_integer(a, RatVector{1, 0}));
    auto x = solve_integer(a, RatVector{2, 2});
    ASSERT_TRUE(x);
    EXPECT_EQ(a * *x, (RatVector{2, 2}));
    EXPECT_TRUE(x->is_integral());

    RatMatrix k = integer_kernel(RatMatrix{{2, 4, 6}});
    EXPECT_EQ(k.cols(), 2u);
    EXPECT_TRUE((RatMatrix{{2, 4, 6}} * k).is_zero());
}

TEST(Smith, CongruenceSolve)
{
    // 2x = 1/2 mod Z has x = 1/4; over the integers it is unsolvable.
    auto x = smith_solve(RatMatrix{{2}}, RatVector{make_rational(1, 2)});
    ASSERT_TRUE(x);
    EXPECT_TRUE(((RatMatrix{{2}} * *x) - RatVector{make_rational(1, 2)}).is_integral());
    EXPECT_FALSE(smith_solve_integer(RatMatrix{{2}}, RatVector{make_rational(1, 2)}));
    EXPECT_TRUE(smith_solve_integer(RatMatrix{{2}}, RatVector{1}));
    // modulo (1/2)Z: 2x = 1/2 needs x in 1/4 + (1/4)Z
    auto y = smith_solve(RatMatrix{{2}}, RatVector{make_rational(1, 2)}, 2);
    ASSERT_TRUE(y);
    EXPECT_TRUE((RatVector{2 * (*y)[0] - make_rational(1, 2)}).in_scaled_lattice(2));
}

TEST(Polynomial, DivisionAndGcd)
{
    RatPoly a = monic_from_integers({-1, 0}) * monic_from_integers({2});  // (x^2 - 1)(x + 2)
    RatPoly b = monic_from_integers({-1});
    auto [q, r] = divmod(a, b);
    EXPECT_TRUE(r.is_zero());
    EXPECT_EQ(q * b, a);
    EXPECT_EQ(gcd(a, monic_from_integers({1}) * monic_from_integers({5})), monic_from_integers({1}));
}

TEST(Polynomial, SquarefreeReassembles)
{
    RatPoly p1 = monic_from_integers({-1});
    RatPoly p2 = monic_from_integers({1, 1});
    RatPoly p = p1 * p1 * p1 * p2 * p2 * monic_from_integers({7});
    auto parts = squarefree_decomposition(p);
    RatPoly prod = RatPoly::constant(1);
    for (const auto& f : parts) {
        EXPECT_EQ(gcd(f.factor, f.factor.derivative()), RatPoly::constant(1));
        for (unsigned i = 0; i < f.multiplicity; ++i)
            prod = prod * f.factor;
    }
    EXPECT_EQ(prod, p);
}

TEST(Polynomial, SturmCountsMatchKnownRoots)
{
    // (x - 1)(x - 2)(x + 3)
    RatPoly p = RatPoly::x_minus(1) * RatPoly::x_minus(2) * RatPoly::x_minus(-3);
    EXPECT_EQ(count_real_roots(p, make_rational(1, 2), make_rational(5, 2)), 2u);
    EXPECT_EQ(count_real_roots(p, -10, 0), 1u);
    EXPECT_EQ(count_real_roots(monic_from_integers({1, 0}), -10, 10), 0u);
}

TEST(CharPoly, CatMap)
{
    EXPECT_EQ(char_poly(RatMatrix{{2, 1}, {1, 1}}), monic_from_integers({1, -3}));
}

TEST(CharPoly, MatchesFaddeevLeVerrier)
{
    std::mt19937 rng(5);
    for (int t = 0; t < 50; ++t) {
        std::size_t n = 2 + t % 4;
        RatMatrix a = random_int_matrix(rng, n, n, -3, 3);
        // c_{n-k} = -(1/k) tr(A M_k), M_{k+1} = A M_k + c_{n-k} I
        std::vector<Rational> c(n + 1);
        c[n] = 1;
        RatMatrix mk = RatMatrix::identity(n);
        for (std::size_t k = 1; k <= n; ++k) {
            RatMatrix am = a * mk;
            c[n - k] = -trace(am) / Rational(static_cast<long>(k));
            mk = am + RatMatrix::scalar(n, c[n - k]);
        }
        EXPECT_EQ(char_poly(a), RatPoly(c));
    }
}

TEST(Classify, Plastic)
{
    auto sc = classify_spectrum(companion(monic_from_integers({-1, -1, 0})));
    EXPECT_EQ(sc.unstable_dim, 1u);
    EXPECT_EQ(sc.stable_dim, 2u);
    EXPECT_TRUE(sc.certified_exact);
}

TEST(Classify, UnitCircleCounts)
{
    // cyclotomic factors: (x^2 + 1)(x^2 + x + 1)(x - 1)^2 and a cat-map factor
    RatPoly p = monic_from_integers({1, 0}) * monic_from_integers({1, 1}) * RatPoly::x_minus(1) *
                RatPoly::x_minus(1) * monic_from_integers({1, -3});
    EXPECT_EQ(unit_circle_root_count(p), 6u);
    SpectralClass sc = classify_polynomial(p);
    EXPECT_EQ(sc.unit_dim, 6u);
    EXPECT_EQ(sc.unstable_dim, 1u);
    EXPECT_EQ(sc.stable_dim, 1u);
}

TEST(Classify, MatchesNumericEigenvaluesOnRandomMatrices)
{
    std::mt19937 rng(19);
    int checked = 0;
    for (int t = 0; t < 400; ++t) {
        std::size_t n = 2 + t % 4;
        RatMatrix a = random_int_matrix(rng, n, n, -4, 4);
        Eigen::VectorXcd ev = to_eigen(a).eigenvalues();
        std::size_t in = 0, on = 0, out = 0;
        bool ambiguous = false;
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            double r = std::abs(ev[i]);
            if (std::abs(r - 1) < 1e-4) {
                ++on;
                ambiguous = ambiguous || std::abs(r - 1) > 1e-9;
            } else if (r < 1) {
                ++in;
            } else {
                ++out;
            }
        }
        if (ambiguous)
            continue; // defective unit eigenvalues; exact count still checked below
        SpectralClass sc = classify_spectrum(a);
        EXPECT_EQ(sc.stable_dim, in);
        EXPECT_EQ(sc.unit_dim, on);
        EXPECT_EQ(sc.unstable_dim, out);
        ++checked;
    }
    EXPECT_GT(checked, 300);
}

TEST(Classify, IsolatedDisksContainNumericRoots)
{
    RatPoly p = monic_from_integers({-1, 2, 0, -3, 1}); // squarefree quintic
    ASSERT_EQ(gcd(p, p.derivative()), RatPoly::constant(1));
    auto disks = isolate_roots(p, 64, 1u << 12);
    auto roots = approximate_roots(p);
    ASSERT_EQ(disks.size(), 5u);
    for (const auto& z : roots) {
        int hits = 0;
        for (const auto& d : disks) {
            double dr = z.real() - d.re.get_d(), di = z.imag() - d.im.get_d();
            hits += std::hypot(dr, di) <= d.radius.get_d() + 1e-12;
        }
        EXPECT_EQ(hits, 1);
    }
}

TEST(Anosov, Predicates)
{
    EXPECT_TRUE(is_anosov_matrix(RatMatrix{{2, 1}, {1, 1}}));
    EXPECT_FALSE(is_anosov_matrix(RatMatrix{{1, 1}, {0, 1}}));
    EXPECT_FALSE(is_anosov_matrix(RatMatrix{{3, 0}, {0, 1}}));
    EXPECT_THROW(is_anosov_matrix(RatMatrix{{make_rational(1, 2), 0}, {0, 2}}), std::invalid_argument);
    EXPECT_TRUE(is_expanding_matrix(RatMatrix::scalar(3, 2)));
    EXPECT_FALSE(is_expanding_matrix(RatMatrix{{2, 1}, {1, 1}}));
}

TEST(Anosov, CodimOneFamily)
{
    for (std::size_t s = 2; s <= 9; ++s) {
        RatMatrix a = codim_one_anosov(s);
        ASSERT_EQ(a.rows(), s);
        EXPECT_TRUE(a.is_integral());
        EXPECT_TRUE(is_anosov_matrix(a));
        // Numeric oracle: exactly one eigenvalue outside the unit disk.
        Eigen::VectorXcd ev = to_eigen(a).eigenvalues();
        long outside = std::count_if(ev.data(), ev.data() + ev.size(), [](auto z) { return std::abs(z) > 1; });
        EXPECT_EQ(outside, 1) << "s=" << s;
        EXPECT_EQ(classify_spectrum(a).unstable_dim, 1u);
    }
}

TEST(Anosov, TensorWithIdentity)
{
    RatMatrix a = codim_one_anosov(3);
    SpectralClass sc = classify_spectrum(tensor_with_identity(a, 2));
    EXPECT_EQ(sc.unstable_dim, 2u);
    EXPECT_EQ(sc.stable_dim, 4u);
}
