#pragma once

// Brute-force H^2(F, M) from the inhomogeneous bar complex, sharing no code
// with the library: coboundaries are assembled by hand, ranks come from a
// floating-point LU, and invariant factors from gcds of minors.

#include "anosov/matrix.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <vector>

namespace anosov::testing {

struct H2Oracle {
    std::vector<long> torsion; ///< invariant factors > 1
    long free_rank = 0;
};

namespace detail {

using IntMat = std::vector<std::vector<long>>;

inline long det_int(IntMat a)
{
    // Bareiss elimination.
    const std::size_t n = a.size();
    long sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && a[p][k] == 0)
                ++p;
            if (p == n)
                return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return n == 0 ? 1 : sign * a[n - 1][n - 1];
}

// Zero rows and repeated rows (up to sign) do not change any minor gcd.
inline IntMat distinct_rows(const IntMat& m)
{
    IntMat out;
    for (const auto& row : m) {
        if (std::all_of(row.begin(), row.end(), [](long x) { return x == 0; }))
            continue;
        std::vector<long> neg(row.size());
        std::transform(row.begin(), row.end(), neg.begin(), [](long x) { return -x; });
        if (std::find(out.begin(), out.end(), row) == out.end() && std::find(out.begin(), out.end(), neg) == out.end())
            out.push_back(row);
    }
    return out;
}

inline long gcd_minors(const IntMat& m, std::size_t k)
{
    const std::size_t r = m.size(), c = m[0].size();
    std::vector<bool> rs(r, false), cs(c, false);
    std::fill(rs.end() - static_cast<long>(k), rs.end(), true);
    long g = 0;
    do {
        std::fill(cs.begin(), cs.end(), false);
        std::fill(cs.end() - static_cast<long>(k), cs.end(), true);
        do {
            IntMat sub;
            for (std::size_t i = 0; i < r; ++i) {
                if (!rs[i])
                    continue;
                std::vector<long> row;
                for (std::size_t j = 0; j < c; ++j)
                    if (cs[j])
                        row.push_back(m[i][j]);
                sub.push_back(row);
            }
            g = std::gcd(g, std::abs(det_int(sub)));
            if (g == 1)
                return 1;
        } while (std::next_permutation(cs.begin(), cs.end()));
    } while (std::next_permutation(rs.begin(), rs.end()));
    return g;
}

inline long rank_of(const IntMat& m)
{
    Eigen::MatrixXd e(m.size(), m[0].size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[0].size(); ++j)
            e(i, j) = static_cast<double>(m[i][j]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(e);
    lu.setThreshold(1e-9);
    return lu.rank();
}

} // namespace detail

/// group: the elements as matrices (closed under products); action[i]: the
/// r x r integer matrix by which group[i] acts on M = Z^r.
inline H2Oracle brute_force_h2(const std::vector<RatMatrix>& group, const std::vector<RatMatrix>& action)
{
    using detail::IntMat;
    const std::size_t q = group.size();
    const std::size_t r = action[0].rows();
    auto idx = [&](const RatMatrix& g) {
        for (std::size_t i = 0; i < q; ++i)
            if (group[i] == g)
                return i;
        return q;
    };
    std::vector<std::vector<std::size_t>> mul(q, std::vector<std::size_t>(q));
    for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = 0; b < q; ++b)
            mul[a][b] = idx(group[a] * group[b]);
    auto act = [&](std::size_t g, std::size_t i, std::size_t j) { return action[g](i, j).get_num().get_si(); };

    // (d1 f)(g, h) = g f(h) - f(gh) + f(g); cochain coordinate (g, i).
    IntMat d1(q * q * r, std::vector<long>(q * r, 0));
    for (std::size_t g = 0; g < q; ++g)
        for (std::size_t h = 0; h < q; ++h)
            for (std::size_t i = 0; i < r; ++i) {
                auto& row = d1[(g * q + h) * r + i];
                for (std::size_t j = 0; j < r; ++j)
                    row[h * r + j] += act(g, i, j);
                row[mul[g][h] * r + i] -= 1;
                row[g * r + i] += 1;
            }
    // (d2 f)(g, h, k) = g f(h, k) - f(gh, k) + f(g, hk) - f(g, h)
    IntMat d2(q * q * q * r, std::vector<long>(q * q * r, 0));
    for (std::size_t g = 0; g < q; ++g)
        for (std::size_t h = 0; h < q; ++h)
            for (std::size_t k = 0; k < q; ++k)
                for (std::size_t i = 0; i < r; ++i) {
                    auto& row = d2[((g * q + h) * q + k) * r + i];
                    for (std::size_t j = 0; j < r; ++j)
                        row[(h * q + k) * r + j] += act(g, i, j);
                    row[(mul[g][h] * q + k) * r + i] -= 1;
                    row[(g * q + mul[h][k]) * r + i] += 1;
                    row[(g * q + h) * r + i] -= 1;
                }

    // ker d2 is saturated, so torsion(H^2) = torsion(coker d1) and the free
    // rank is dim ker d2 - rank d1.
    H2Oracle out;
    const long rank1 = detail::rank_of(d1);
    const long rank2 = detail::rank_of(d2);
    out.free_rank = static_cast<long>(q * q * r) - rank2 - rank1;
    const IntMat reduced = detail::distinct_rows(d1);
    long prev = 1;
    for (long k = 1; k <= rank1; ++k) {
        const long dk = detail::gcd_minors(reduced, static_cast<std::size_t>(k));
        const long factor = dk / prev;
        if (factor > 1)
            out.torsion.push_back(factor);
        prev = dk;
    }
    return out;
}

} // namespace anosov::testing
