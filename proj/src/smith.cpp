#include "anosov/smith.hpp"

#include <stdexcept>
#include <utility>

namespace anosov {

namespace {

struct IntMat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Integer> a;

    IntMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, Integer(0)) {}
    Integer& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static IntMat identity(std::size_t n)
    {
        IntMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1;
        }
        return m;
    }

    void swap_rows(std::size_t i, std::size_t j)
    {
        for (std::size_t c = 0; c < cols; ++c) {
            std::swap((*this)(i, c), (*this)(j, c));
        }
    }
    void swap_cols(std::size_t i, std::size_t j)
    {
        for (std::size_t r = 0; r < rows; ++r) {
            std::swap((*this)(r, i), (*this)(r, j));
        }
    }
    // row_i += f * row_j
    void add_row(std::size_t i, std::size_t j, const Integer& f)
    {
        for (std::size_t c = 0; c < cols; ++c) {
            if ((*this)(j, c) != 0) {
                (*this)(i, c) += f * (*this)(j, c);
            }
        }
    }
    void add_col(std::size_t i, std::size_t j, const Integer& f)
    {
        for (std::size_t r = 0; r < rows; ++r) {
            if ((*this)(r, j) != 0) {
                (*this)(r, i) += f * (*this)(r, j);
            }
        }
    }
    void negate_row(std::size_t i)
    {
        for (std::size_t c = 0; c < cols; ++c) {
            (*this)(i, c) = -(*this)(i, c);
        }
    }
};

IntMat to_int(const RatMatrix& m)
{
    if (!m.is_integral()) {
        throw std::invalid_argument("Smith normal form needs an integral matrix");
    }
    IntMat out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out(i, j) = m(i, j).get_num();
        }
    }
    return out;
}

RatMatrix to_rat(const IntMat& m)
{
    RatMatrix out(m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            out(i, j) = Rational(m(i, j));
        }
    }
    return out;
}

Integer floor_div(const Integer& a, const Integer& b)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

} // namespace

std::vector<Integer> SmithForm::invariant_factors() const
{
    std::vector<Integer> out;
    for (std::size_t i = 0; i < rank; ++i) {
        out.push_back(diagonal(i, i).get_num());
    }
    return out;
}

SmithForm smith_normal_form(const RatMatrix& input)
{
    IntMat d = to_int(input);
    IntMat u = IntMat::identity(d.rows);
    IntMat v = IntMat::identity(d.cols);
    const std::size_t limit = std::min(d.rows, d.cols);
    std::size_t t = 0;
    for (; t < limit; ++t) {
        for (;;) {
            // Pivot: smallest nonzero magnitude in the trailing block.
            std::size_t pr = d.rows;
            std::size_t pc = d.cols;
            for (std::size_t i = t; i < d.rows; ++i) {
                for (std::size_t j = t; j < d.cols; ++j) {
                    if (d(i, j) != 0 && (pr == d.rows || abs(d(i, j)) < abs(d(pr, pc)))) {
                        pr = i;
                        pc = j;
                    }
                }
            }
            if (pr == d.rows) {
                goto done;
            }
            if (pr != t) {
                d.swap_rows(pr, t);
                u.swap_rows(pr, t);
            }
            if (pc != t) {
                d.swap_cols(pc, t);
                v.swap_cols(pc, t);
            }
            bool clean = true;
            for (std::size_t i = t + 1; i < d.rows; ++i) {
                if (d(i, t) != 0) {
                    const Integer f = -floor_div(d(i, t), d(t, t));
                    d.add_row(i, t, f);
                    u.add_row(i, t, f);
                    if (d(i, t) != 0) {
                        clean = false;
                    }
                }
            }
            for (std::size_t j = t + 1; j < d.cols; ++j) {
                if (d(t, j) != 0) {
                    const Integer f = -floor_div(d(t, j), d(t, t));
                    d.add_col(j, t, f);
                    v.add_col(j, t, f);
                    if (d(t, j) != 0) {
                        clean = false;
                    }
                }
            }
            if (!clean) {
                continue;
            }
            // Divisibility condition on the trailing block.
            bool divisible = true;
            for (std::size_t i = t + 1; i < d.rows && divisible; ++i) {
                for (std::size_t j = t + 1; j < d.cols; ++j) {
                    if (d(i, j) % d(t, t) != 0) {
                        d.add_row(t, i, 1);
                        u.add_row(t, i, 1);
                        divisible = false;
                        break;
                    }
                }
            }
            if (divisible) {
                break;
            }
        }
        if (d(t, t) < 0) {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
done:
    SmithForm out;
    out.rank = t;
    out.left = to_rat(u);
    out.diagonal = to_rat(d);
    out.right = to_rat(v);
    return out;
}

std::optional<RatVector> solve_integer(const RatMatrix& a, const RatVector& b)
{
    if (a.rows() != b.size()) {
        throw std::invalid_argument("solve_integer shape mismatch");
    }
    if (!b.is_integral()) {
        return std::nullopt;
    }
    const SmithForm s = smith_normal_form(a);
    const RatVector ub = s.left * b;
    RatVector y(a.cols());
    for (std::size_t i = 0; i < ub.size(); ++i) {
        if (i < s.rank) {
            const Rational yi = ub[i] / s.diagonal(i, i);
            if (!is_integral(yi)) {
                return std::nullopt;
            }
            y[i] = yi;
        } else if (ub[i] != 0) {
            return std::nullopt;
        }
    }
    return s.right * y;
}

RatMatrix integer_kernel(const RatMatrix& a)
{
    const SmithForm s = smith_normal_form(a);
    RatMatrix k(a.cols(), a.cols() - s.rank);
    for (std::size_t j = s.rank; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.cols(); ++i) {
            k(i, j - s.rank) = s.right(i, j);
        }
    }
    return k;
}

namespace {

RatMatrix clear_denominators(const RatMatrix& m)
{
    return Rational(common_denominator(m)) * m;
}

} // namespace

std::optional<RatVector> smith_solve(const RatMatrix& m, const RatVector& b, const Integer& q)
{
    if (m.rows() != b.size()) {
        throw std::invalid_argument("smith_solve shape mismatch");
    }
    if (q <= 0) {
        throw std::invalid_argument("smith_solve modulus must be positive");
    }
    const RatVector qb = Rational(q) * b;
    // Rows of `left_null` span {y : y^T m = 0}; the congruence is solvable iff
    // some integer z has left_null (z + qb) = 0.
    const RatMatrix left_null = integer_kernel(clear_denominators(m.transpose())).transpose();
    RatVector z(m.rows());
    if (left_null.rows() > 0) {
        auto sol = solve_integer(left_null, -(left_null * qb));
        if (!sol) {
            return std::nullopt;
        }
        z = *sol;
    }
    auto x = solve_linear(Rational(q) * m, z + qb);
    if (!x) {
        throw std::logic_error("smith_solve: reduced system unexpectedly inconsistent");
    }
    return x;
}

std::optional<RatVector> smith_solve_integer(const RatMatrix& m, const RatVector& b, const Integer& q)
{
    if (m.rows() != b.size()) {
        throw std::invalid_argument("smith_solve_integer shape mismatch");
    }
    const RatMatrix qm = Rational(q) * m;
    if (!qm.is_integral()) {
        throw std::invalid_argument("smith_solve_integer needs q*m integral");
    }
    RatMatrix aug(m.rows(), m.cols() + m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            aug(i, j) = qm(i, j);
        }
        aug(i, m.cols() + i) = -1;
    }
    auto sol = solve_integer(aug, Rational(q) * b);
    if (!sol) {
        return std::nullopt;
    }
    RatVector x(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) {
        x[j] = (*sol)[j];
    }
    return x;
}

} // namespace anosov
