#pragma once

#include "anosov/rational.hpp"

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

namespace anosov {

class RatVector {
public:
    RatVector() = default;
    explicit RatVector(std::size_t n) : data_(n, Rational(0)) {}
    RatVector(std::initializer_list<Rational> values) : data_(values) {}
    explicit RatVector(std::vector<Rational> values) : data_(std::move(values)) {}

    static RatVector zero(std::size_t n) { return RatVector(n); }

    std::size_t size() const { return data_.size(); }
    Rational& operator[](std::size_t i) { return data_[i]; }
    const Rational& operator[](std::size_t i) const { return data_[i]; }
    const std::vector<Rational>& values() const { return data_; }

    auto begin() const { return data_.begin(); }
    auto end() const { return data_.end(); }

    bool is_zero() const;
    bool is_integral() const;
    /// True iff every entry lies in (1/q)Z.
    bool in_scaled_lattice(const Integer& q) const;

    RatVector& operator+=(const RatVector& other);
    RatVector& operator-=(const RatVector& other);
    RatVector& operator*=(const Rational& s);

    friend bool operator==(const RatVector& a, const RatVector& b) { return a.data_ == b.data_; }

private:
    std::vector<Rational> data_;
};

RatVector operator+(RatVector a, const RatVector& b);
RatVector operator-(RatVector a, const RatVector& b);
RatVector operator-(const RatVector& a);
RatVector operator*(const Rational& s, RatVector v);

/// Dense rectangular matrix of canonical rationals, row-major.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}
    RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

    static RatMatrix identity(std::size_t n);
    static RatMatrix zero(std::size_t rows, std::size_t cols) { return RatMatrix(rows, cols); }
    static RatMatrix scalar(std::size_t n, const Rational& s);
    static RatMatrix diagonal(const std::vector<Rational>& entries);
    static RatMatrix from_rows(const std::vector<std::vector<Rational>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    /// An integer-matrix view exists iff every denominator is 1.
    bool is_integral() const;
    bool is_identity() const;
    bool is_zero() const;

    RatMatrix transpose() const;
    RatVector row(std::size_t r) const;
    RatVector column(std::size_t c) const;

    RatMatrix& operator+=(const RatMatrix& other);
    RatMatrix& operator-=(const RatMatrix& other);
    RatMatrix& operator*=(const Rational& s);

    friend bool operator==(const RatMatrix& a, const RatMatrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

RatMatrix operator+(RatMatrix a, const RatMatrix& b);
RatMatrix operator-(RatMatrix a, const RatMatrix& b);
RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
RatMatrix operator*(const Rational& s, RatMatrix m);
RatVector operator*(const RatMatrix& m, const RatVector& v);

RatMatrix power(const RatMatrix& m, unsigned long exponent);
Rational determinant(const RatMatrix& m);
Rational trace(const RatMatrix& m);
std::size_t rank(const RatMatrix& m);
/// Throws std::domain_error when singular.
RatMatrix inverse(const RatMatrix& m);
/// Solves m x = b exactly; nullopt when inconsistent. Free variables are set to 0.
std::optional<RatVector> solve_linear(const RatMatrix& m, const RatVector& b);

/// Kronecker product a (x) b.
RatMatrix kronecker(const RatMatrix& a, const RatMatrix& b);
RatMatrix block_diagonal(const RatMatrix& a, const RatMatrix& b);

/// Entrywise reduction mod q of an integral matrix into [0, q).
RatMatrix reduce_mod(const RatMatrix& m, const Integer& q);

/// Least common multiple of all denominators.
Integer common_denominator(const RatMatrix& m);
Integer common_denominator(const RatVector& v);

} // namespace anosov
