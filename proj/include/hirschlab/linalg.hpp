#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hirschlab/error.hpp"
#include "hirschlab/rational.hpp"

namespace hirschlab {

using QVector = std::vector<Rational>;

inline Rational dot(std::span<const Rational> a, std::span<const Rational> b)
{
    if (a.size() != b.size())
        throw DimensionError("dot product of vectors with lengths " + std::to_string(a.size()) +
                             " and " + std::to_string(b.size()));
    Rational acc;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero() && !b[i].is_zero())
            acc.add_product(a[i], b[i]);
    return acc;
}

inline QVector scaled(const QVector& v, const Rational& s)
{
    QVector out(v);
    for (auto& x : out)
        x *= s;
    return out;
}

inline bool is_zero(std::span<const Rational> v)
{
    for (const auto& x : v)
        if (!x.is_zero())
            return false;
    return true;
}

inline QVector unit_vector(std::size_t dim, std::size_t i, const Rational& value = 1)
{
    QVector e(dim);
    e.at(i) = value;
    return e;
}

/// Dense row-major matrix of rationals.
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    /// All rows must have the same length.
    static QMatrix from_rows(const std::vector<QVector>& rows)
    {
        QMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_)
                throw DimensionError("ragged matrix rows");
            for (std::size_t j = 0; j < m.cols_; ++j)
                m(i, j) = rows[i][j];
        }
        return m;
    }

    static QMatrix identity(std::size_t n)
    {
        QMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const Rational> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<Rational> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

    QMatrix transposed() const
    {
        QMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    QVector operator*(const QVector& v) const
    {
        if (v.size() != cols_)
            throw DimensionError("matrix-vector size mismatch");
        QVector out(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            out[i] = dot(row(i), v);
        return out;
    }

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t j = 0; j < cols_; ++j)
            std::swap((*this)(a, j), (*this)(b, j));
    }

    friend bool operator==(const QMatrix&, const QMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

namespace detail {

// Row-reduce `m` in place (rational Gauss-Jordan, first nonzero pivot in each
// column). Returns the pivot column of every pivot row, in order.
inline std::vector<std::size_t> row_reduce(QMatrix& m, std::size_t pivot_cols)
{
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < pivot_cols && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c).is_zero())
            ++p;
        if (p == m.rows())
            continue;
        m.swap_rows(r, p);
        Rational inv = m(r, c).inverse();
        for (std::size_t j = c; j < m.cols(); ++j)
            m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c).is_zero())
                continue;
            Rational f = -m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                if (!m(r, j).is_zero())
                    m(i, j).add_product(f, m(r, j));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace detail

inline std::size_t rank(QMatrix m)
{
    return detail::row_reduce(m, m.cols()).size();
}

inline std::size_t rank(const std::vector<QVector>& rows)
{
    return rank(QMatrix::from_rows(rows));
}

/**
 * Solve M x = rhs for square M. Returns std::nullopt when M is singular;
 * throws DimensionError when M is not square or rhs has the wrong length.
 */
inline std::optional<QVector> solve_square(const QMatrix& m, const QVector& rhs)
{
    if (m.rows() != m.cols())
        throw DimensionError("solve_square needs a square matrix");
    if (rhs.size() != m.rows())
        throw DimensionError("right-hand side length does not match matrix");
    const std::size_t n = m.rows();
    QMatrix aug(n, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            aug(i, j) = m(i, j);
        aug(i, n) = rhs[i];
    }
    if (detail::row_reduce(aug, n).size() < n)
        return std::nullopt;
    QVector x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = aug(i, n);
    return x;
}

}  // namespace hirschlab
