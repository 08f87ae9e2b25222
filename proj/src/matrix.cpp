#include "anosov/matrix.hpp"

#include <stdexcept>
#include <utility>

namespace anosov {

bool RatVector::is_zero() const
{
    for (const auto& x : data_) {
        if (x != 0) {
            return false;
        }
    }
    return true;
}

bool RatVector::is_integral() const
{
    for (const auto& x : data_) {
        if (!anosov::is_integral(x)) {
            return false;
        }
    }
    return true;
}

bool RatVector::in_scaled_lattice(const Integer& q) const
{
    for (const auto& x : data_) {
        if (!anosov::is_integral(x * Rational(q))) {
            return false;
        }
    }
    return true;
}

RatVector& RatVector::operator+=(const RatVector& other)
{
    if (other.size() != size()) {
        throw std::invalid_argument("vector size mismatch");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += other.data_[i];
    }
    return *this;
}

RatVector& RatVector::operator-=(const RatVector& other)
{
    if (other.size() != size()) {
        throw std::invalid_argument("vector size mismatch");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] -= other.data_[i];
    }
    return *this;
}

RatVector& RatVector::operator*=(const Rational& s)
{
    for (auto& x : data_) {
        x *= s;
    }
    return *this;
}

RatVector operator+(RatVector a, const RatVector& b) { return a += b; }
RatVector operator-(RatVector a, const RatVector& b) { return a -= b; }
RatVector operator-(const RatVector& a) { return Rational(-1) * a; }
RatVector operator*(const Rational& s, RatVector v) { return v *= s; }

RatMatrix::RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows)
{
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw std::invalid_argument("ragged matrix literal");
        }
        for (const auto& x : row) {
            data_.push_back(x);
        }
    }
}

RatMatrix RatMatrix::identity(std::size_t n) { return scalar(n, 1); }

RatMatrix RatMatrix::scalar(std::size_t n, const Rational& s)
{
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = s;
    }
    return m;
}

RatMatrix RatMatrix::diagonal(const std::vector<Rational>& entries)
{
    RatMatrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        m(i, i) = entries[i];
    }
    return m;
}

RatMatrix RatMatrix::from_rows(const std::vector<std::vector<Rational>>& rows)
{
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    RatMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) {
            throw std::invalid_argument("ragged matrix");
        }
        for (std::size_t j = 0; j < c; ++j) {
            m(i, j) = rows[i][j];
        }
    }
    return m;
}

bool RatMatrix::is_integral() const
{
    for (const auto& x : data_) {
        if (!anosov::is_integral(x)) {
            return false;
        }
    }
    return true;
}

bool RatMatrix::is_identity() const
{
    if (!is_square()) {
        return false;
    }
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            if ((*this)(i, j) != (i == j ? 1 : 0)) {
                return false;
            }
        }
    }
    return true;
}

bool RatMatrix::is_zero() const
{
    for (const auto& x : data_) {
        if (x != 0) {
            return false;
        }
    }
    return true;
}

RatMatrix RatMatrix::transpose() const
{
    RatMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

RatVector RatMatrix::row(std::size_t r) const
{
    RatVector v(cols_);
    for (std::size_t j = 0; j < cols_; ++j) {
        v[j] = (*this)(r, j);
    }
    return v;
}

RatVector RatMatrix::column(std::size_t c) const
{
    RatVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        v[i] = (*this)(i, c);
    }
    return v;
}

RatMatrix& RatMatrix::operator+=(const RatMatrix& other)
{
    if (other.rows_ != rows_ || other.cols_ != cols_) {
        throw std::invalid_argument("matrix shape mismatch");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += other.data_[i];
    }
    return *this;
}

RatMatrix& RatMatrix::operator-=(const RatMatrix& other)
{
    if (other.rows_ != rows_ || other.cols_ != cols_) {
        throw std::invalid_argument("matrix shape mismatch");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] -= other.data_[i];
    }
    return *this;
}

RatMatrix& RatMatrix::operator*=(const Rational& s)
{
    for (auto& x : data_) {
        x *= s;
    }
    return *this;
}

RatMatrix operator+(RatMatrix a, const RatMatrix& b) { return a += b; }
RatMatrix operator-(RatMatrix a, const RatMatrix& b) { return a -= b; }
RatMatrix operator*(const Rational& s, RatMatrix m) { return m *= s; }

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b)
{
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matrix product shape mismatch");
    }
    RatMatrix c(a.rows(), b.cols());
    Rational tmp;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Rational& aik = a(i, k);
            if (aik == 0) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                tmp = aik * b(k, j);
                c(i, j) += tmp;
            }
        }
    }
    return c;
}

RatVector operator*(const RatMatrix& m, const RatVector& v)
{
    if (m.cols() != v.size()) {
        throw std::invalid_argument("matrix-vector shape mismatch");
    }
    RatVector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Rational acc = 0;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m(i, j) != 0) {
                acc += m(i, j) * v[j];
            }
        }
        out[i] = acc;
    }
    return out;
}

RatMatrix power(const RatMatrix& m, unsigned long exponent)
{
    if (!m.is_square()) {
        throw std::invalid_argument("power of non-square matrix");
    }
    RatMatrix result = RatMatrix::identity(m.rows());
    RatMatrix base = m;
    while (exponent > 0) {
        if (exponent & 1UL) {
            result = result * base;
        }
        exponent >>= 1;
        if (exponent > 0) {
            base = base * base;
        }
    }
    return result;
}

namespace {

// Row-reduces a copy of m in place; returns pivot columns. Tracks the
// determinant sign/scale when requested.
std::vector<std::size_t> row_echelon(RatMatrix& a, Rational* det_out)
{
    std::vector<std::size_t> pivots;
    Rational det = 1;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
        std::size_t pivot = row;
        while (pivot < a.rows() && a(pivot, col) == 0) {
            ++pivot;
        }
        if (pivot == a.rows()) {
            det = 0;
            continue;
        }
        if (pivot != row) {
            for (std::size_t j = 0; j < a.cols(); ++j) {
                std::swap(a(pivot, j), a(row, j));
            }
            det = -det;
        }
        const Rational p = a(row, col);
        det *= p;
        for (std::size_t j = col; j < a.cols(); ++j) {
            a(row, j) /= p;
        }
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == row || a(i, col) == 0) {
                continue;
            }
            const Rational factor = a(i, col);
            for (std::size_t j = col; j < a.cols(); ++j) {
                a(i, j) -= factor * a(row, j);
            }
        }
        pivots.push_back(col);
        ++row;
    }
    if (det_out != nullptr) {
        *det_out = pivots.size() == a.rows() ? det : Rational(0);
    }
    return pivots;
}

} // namespace

Rational determinant(const RatMatrix& m)
{
    if (!m.is_square()) {
        throw std::invalid_argument("determinant of non-square matrix");
    }
    if (m.rows() == 0) {
        return 1;
    }
    RatMatrix a = m;
    Rational det;
    row_echelon(a, &det);
    return det;
}

Rational trace(const RatMatrix& m)
{
    if (!m.is_square()) {
        throw std::invalid_argument("trace of non-square matrix");
    }
    Rational t = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        t += m(i, i);
    }
    return t;
}

std::size_t rank(const RatMatrix& m)
{
    RatMatrix a = m;
    return row_echelon(a, nullptr).size();
}

RatMatrix inverse(const RatMatrix& m)
{
    if (!m.is_square()) {
        throw std::invalid_argument("inverse of non-square matrix");
    }
    const std::size_t n = m.rows();
    RatMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            aug(i, j) = m(i, j);
        }
        aug(i, n + i) = 1;
    }
    auto pivots = row_echelon(aug, nullptr);
    if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1)) {
        throw std::domain_error("singular matrix");
    }
    RatMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            inv(i, j) = aug(i, n + j);
        }
    }
    return inv;
}

std::optional<RatVector> solve_linear(const RatMatrix& m, const RatVector& b)
{
    if (m.rows() != b.size()) {
        throw std::invalid_argument("solve_linear shape mismatch");
    }
    RatMatrix aug(m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            aug(i, j) = m(i, j);
        }
        aug(i, m.cols()) = b[i];
    }
    auto pivots = row_echelon(aug, nullptr);
    if (!pivots.empty() && pivots.back() == m.cols()) {
        return std::nullopt;
    }
    RatVector x(m.cols());
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        x[pivots[r]] = aug(r, m.cols());
    }
    return x;
}

RatMatrix kronecker(const RatMatrix& a, const RatMatrix& b)
{
    RatMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j) == 0) {
                continue;
            }
            for (std::size_t p = 0; p < b.rows(); ++p) {
                for (std::size_t q = 0; q < b.cols(); ++q) {
                    k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
                }
            }
        }
    }
    return k;
}

RatMatrix block_diagonal(const RatMatrix& a, const RatMatrix& b)
{
    RatMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            m(i, j) = a(i, j);
        }
    }
    for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            m(a.rows() + i, a.cols() + j) = b(i, j);
        }
    }
    return m;
}

RatMatrix reduce_mod(const RatMatrix& m, const Integer& q)
{
    if (!m.is_integral()) {
        throw std::invalid_argument("reduce_mod needs an integral matrix");
    }
    RatMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            Integer z;
            mpz_fdiv_r(z.get_mpz_t(), m(i, j).get_num_mpz_t(), q.get_mpz_t());
            r(i, j) = Rational(z);
        }
    }
    return r;
}

Integer common_denominator(const RatMatrix& m)
{
    Integer l = 1;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
        }
    }
    return l;
}

Integer common_denominator(const RatVector& v)
{
    Integer l = 1;
    for (const auto& x : v) {
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    }
    return l;
}

} // namespace anosov
