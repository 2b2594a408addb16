#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "carnot/rational.hpp"

namespace carnot {

/// Dense row-major matrix over an exact ring.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw InputError("ragged matrix initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<T> row(std::size_t i) const {
        return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                              data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (aik.is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }
    friend Matrix operator+(Matrix a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum shape mismatch");
        for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] += b.data_[k];
        return a;
    }
    friend Matrix operator-(Matrix a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix difference shape mismatch");
        for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] -= b.data_[k];
        return a;
    }
    template <class S>
    friend Matrix operator*(const S& s, Matrix a) {
        for (auto& v : a.data_) v = v * s;
        return a;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const T& v) { return v.is_zero(); });
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RationalMatrix = Matrix<Rational>;

/// Reduced row echelon form. Pivots are taken on the smallest-index column
/// that still has a nonzero entry, using the first row holding it.
struct RowEchelon {
    RationalMatrix reduced;             // nonzero rows only, pivot entries 1
    std::vector<std::size_t> pivots;    // pivot column of each row
    std::size_t rank() const { return pivots.size(); }
};

inline RowEchelon row_reduce(RationalMatrix m) {
    std::size_t r = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c).is_zero()) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(p, r);
        Rational inv = m(r, c).inverse();
        for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c).is_zero()) continue;
            Rational f = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    RationalMatrix reduced(r, m.cols());
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) reduced(i, j) = m(i, j);
    return {std::move(reduced), std::move(pivots)};
}

inline std::size_t rank(const RationalMatrix& m) { return row_reduce(m).rank(); }

/// Determinant by fraction-exact Gaussian elimination.
inline Rational determinant(RationalMatrix m) {
    if (!m.is_square()) throw std::invalid_argument("determinant of non-square matrix");
    const std::size_t n = m.rows();
    Rational det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c).is_zero()) ++p;
        if (p == n) return Rational(0);
        if (p != c) {
            m.swap_rows(p, c);
            det = -det;
        }
        det *= m(c, c);
        Rational inv = m(c, c).inverse();
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c).is_zero()) continue;
            Rational f = m(i, c) * inv;
            for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return det;
}

/// Determinant by cofactor expansion along the first row. Works over any
/// commutative ring (used for symbolic matrices); exponential cost, small n only.
template <class T>
T cofactor_determinant(const Matrix<T>& m) {
    if (!m.is_square()) throw std::invalid_argument("determinant of non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return T(1);
    if (n == 1) return m(0, 0);
    T det(0);
    for (std::size_t j = 0; j < n; ++j) {
        if (m(0, j).is_zero()) continue;
        Matrix<T> minor(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t k = 0, kk = 0; k < n; ++k) {
                if (k == j) continue;
                minor(i - 1, kk++) = m(i, k);
            }
        T term = m(0, j) * cofactor_determinant(minor);
        if (j % 2 == 0)
            det += term;
        else
            det -= term;
    }
    return det;
}

inline std::optional<RationalMatrix> inverse(const RationalMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("inverse of non-square matrix");
    const std::size_t n = m.rows();
    RationalMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = Rational(1);
    }
    auto ech = row_reduce(aug);
    if (ech.rank() < n || ech.pivots[n - 1] != n - 1) return std::nullopt;
    RationalMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = ech.reduced(i, n + j);
    return inv;
}

/// Solves A x = b; returns one solution (free variables zero) or nullopt.
inline std::optional<std::vector<Rational>> solve(const RationalMatrix& a, const std::vector<Rational>& b) {
    if (b.size() != a.rows()) throw std::invalid_argument("solve: rhs size mismatch");
    RationalMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    auto ech = row_reduce(aug);
    std::vector<Rational> x(a.cols(), Rational(0));
    for (std::size_t r = 0; r < ech.rank(); ++r) {
        if (ech.pivots[r] == a.cols()) return std::nullopt;
        x[ech.pivots[r]] = ech.reduced(r, a.cols());
    }
    return x;
}

}  // namespace carnot
