#pragma once

// Dense matrices and exact elimination over a field.
//
// Over Q the elimination is fraction-free: rows are scaled to integers, combined
// by cross-multiplication and divided by their content, and only the final
// reduced echelon form is turned back into rationals. Other fields (cyclotomic,
// small prime fields) use plain Gauss-Jordan.

#include <cstddef>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "zbrng/error.hpp"
#include "zbrng/exact.hpp"

namespace zbrng {

inline bool is_zero(std::int64_t v) { return v == 0; }

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
        Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != m.cols_) throw InputError("ragged matrix: row " + std::to_string(r) + " has wrong length");
            for (std::size_t c = 0; c < m.cols_; ++c) m(r, c) = rows[r][c];
        }
        return m;
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n, T(0));
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<T> row(std::size_t r) const {
        return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                              data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
    }

    std::vector<T> column(std::size_t c) const {
        std::vector<T> out;
        out.reserve(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out.push_back((*this)(r, c));
        return out;
    }

    std::vector<std::vector<T>> to_rows() const {
        std::vector<std::vector<T>> out;
        out.reserve(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
        return out;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    /// Columns `cols` (in the given order) of this matrix.
    Matrix select_columns(const std::vector<std::size_t>& cols) const {
        Matrix out(rows_, cols.size());
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t j = 0; j < cols.size(); ++j) out(r, j) = (*this)(r, cols[j]);
        return out;
    }

    template <class F>
    auto map(F&& f) const {
        using U = std::decay_t<decltype(f(std::declval<const T&>()))>;
        Matrix<U> out(rows_, cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) out(r, c) = f((*this)(r, c));
        return out;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RatMatrix = Matrix<Rat>;
using IntMatrix = Matrix<std::int64_t>;

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) throw InputError("matrix product shape mismatch");
    Matrix<T> out(a.rows(), b.cols(), T(0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T& aik = a(i, k);
            if (is_zero(aik)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

template <class T>
std::vector<T> operator*(const Matrix<T>& a, const std::vector<T>& x) {
    if (a.cols() != x.size()) throw InputError("matrix-vector shape mismatch");
    std::vector<T> out(a.rows(), T(0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
            if (!is_zero(x[k])) out[i] += a(i, k) * x[k];
    return out;
}

template <class T>
struct Echelon {
    Matrix<T> reduced;                // reduced row echelon form, pivots equal to 1
    std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

namespace detail {

inline Echelon<Rat> rref_fraction_free(const RatMatrix& a) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    const std::size_t rows = a.rows(), cols = a.cols();
    std::vector<std::vector<BigInt>> m(rows, std::vector<BigInt>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        BigInt l = 1;
        for (std::size_t c = 0; c < cols; ++c) l = boost::multiprecision::lcm(l, BigInt(denominator(a(r, c))));
        for (std::size_t c = 0; c < cols; ++c) m[r][c] = numerator(a(r, c)) * (l / denominator(a(r, c)));
    }
    auto reduce_content = [&](std::vector<BigInt>& row) {
        BigInt g = 0;
        for (const auto& v : row)
            if (v != 0) g = boost::multiprecision::gcd(g, BigInt(abs(v)));
        if (g > 1)
            for (auto& v : row) v /= g;
    };
    std::vector<std::size_t> pivots;
    std::size_t pr = 0;
    for (std::size_t c = 0; c < cols && pr < rows; ++c) {
        std::size_t p = pr;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[pr]);
        const BigInt piv = m[pr][c];
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == pr || m[r][c] == 0) continue;
            const BigInt f = m[r][c];
            for (std::size_t j = 0; j < cols; ++j) {
                if (m[pr][j] == 0) {
                    if (m[r][j] != 0) m[r][j] *= piv;
                    continue;
                }
                m[r][j] = piv * m[r][j] - f * m[pr][j];
            }
            reduce_content(m[r]);
        }
        pivots.push_back(c);
        ++pr;
    }
    Echelon<Rat> out{RatMatrix(rows, cols, Rat(0)), pivots};
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        // Rat(n, d) rejects negative d for unbounded integers.
        const bool flip = m[r][pivots[r]] < 0;
        const BigInt piv = flip ? BigInt(-m[r][pivots[r]]) : m[r][pivots[r]];
        for (std::size_t c = 0; c < cols; ++c)
            if (m[r][c] != 0) out.reduced(r, c) = Rat(flip ? BigInt(-m[r][c]) : m[r][c], piv);
    }
    return out;
}

template <class T>
Echelon<T> rref_gauss_jordan(Matrix<T> m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::size_t> pivots;
    std::size_t pr = 0;
    for (std::size_t c = 0; c < cols && pr < rows; ++c) {
        std::size_t p = pr;
        while (p < rows && is_zero(m(p, c))) ++p;
        if (p == rows) continue;
        if (p != pr)
            for (std::size_t j = 0; j < cols; ++j) std::swap(m(p, j), m(pr, j));
        const T inv = T(1) / m(pr, c);
        for (std::size_t j = c; j < cols; ++j) m(pr, j) = m(pr, j) * inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == pr || is_zero(m(r, c))) continue;
            const T f = m(r, c);
            for (std::size_t j = c; j < cols; ++j)
                if (!is_zero(m(pr, j))) m(r, j) = m(r, j) - f * m(pr, j);
        }
        pivots.push_back(c);
        ++pr;
    }
    return {std::move(m), std::move(pivots)};
}

} // namespace detail

template <class T>
Echelon<T> rref(const Matrix<T>& a) {
    if constexpr (std::is_same_v<T, Rat>) return detail::rref_fraction_free(a);
    else return detail::rref_gauss_jordan(a);
}

template <class T>
std::size_t rank(const Matrix<T>& a) {
    return rref(a).pivots.size();
}

/// Basis of the right kernel {x : a x = 0}; empty iff `a` is injective.
template <class T>
std::vector<std::vector<T>> kernel(const Matrix<T>& a) {
    const Echelon<T> e = rref(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<std::vector<T>> basis;
    for (std::size_t f = 0; f < a.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<T> v(a.cols(), T(0));
        v[f] = T(1);
        for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = T(0) - e.reduced(r, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

inline std::vector<std::vector<Rat>> rat_kernel(const RatMatrix& m) { return kernel(m); }

enum class SolveStatus { unique, inconsistent, underdetermined };

template <class T>
struct Solution {
    SolveStatus status;
    std::vector<T> x; // valid when status == unique
};

/// Solve a x = b exactly (a may be rectangular).
template <class T>
Solution<T> solve(const Matrix<T>& a, const std::vector<T>& b) {
    if (b.size() != a.rows()) throw InputError("solve: right-hand side has wrong length");
    Matrix<T> aug(a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
        aug(r, a.cols()) = b[r];
    }
    const Echelon<T> e = rref(aug);
    if (!e.pivots.empty() && e.pivots.back() == a.cols()) return {SolveStatus::inconsistent, {}};
    if (e.pivots.size() < a.cols()) return {SolveStatus::underdetermined, {}};
    std::vector<T> x(a.cols(), T(0));
    for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(r, a.cols());
    return {SolveStatus::unique, std::move(x)};
}

/// Exact inverse, or nullopt if singular.
template <class T>
std::optional<Matrix<T>> inverse(const Matrix<T>& a) {
    if (a.rows() != a.cols()) throw InputError("inverse of a non-square matrix");
    const std::size_t n = a.rows();
    Matrix<T> aug(n, 2 * n, T(0));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
        aug(r, n + r) = T(1);
    }
    const Echelon<T> e = rref(aug);
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
    Matrix<T> inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) inv(r, c) = e.reduced(r, n + c);
    return inv;
}

} // namespace zbrng
