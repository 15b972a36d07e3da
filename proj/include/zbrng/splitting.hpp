#pragma once

// Simultaneous eigenspace splitting of commuting matrices.
//
// The regular representation matrices of a commutative semisimple algebra share
// a basis of eigenvectors; each common eigenvector is a one-dimensional
// character and its eigenvalue tuple is a row of the s-matrix. Both paths
// below return those eigenvalue tuples.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "zbrng/error.hpp"
#include "zbrng/matrix.hpp"

namespace zbrng {

/// Exact splitting over a field T. `candidates(i)` lists the possible
/// eigenvalues of ops[i]; an eigenvalue outside that list, or a subspace that
/// no operator splits, raises AlgebraError ("splitting stalls").
/// Operators are processed in index order and the loop stops as soon as every
/// piece is one-dimensional.
template <class T>
std::vector<std::vector<T>> split_exact(const std::vector<Matrix<T>>& ops,
                                        const std::function<std::vector<T>(std::size_t)>& candidates) {
    if (ops.empty()) throw InputError("no operators to split by");
    const std::size_t n = ops[0].rows();
    std::vector<Matrix<T>> parts{Matrix<T>::identity(n)};
    auto all_lines = [&] {
        return std::all_of(parts.begin(), parts.end(), [](const Matrix<T>& p) { return p.cols() == 1; });
    };
    for (std::size_t i = 0; i < ops.size() && !all_lines(); ++i) {
        const std::vector<T> lambdas = candidates(i);
        std::vector<Matrix<T>> next;
        for (const Matrix<T>& basis : parts) {
            if (basis.cols() == 1) {
                next.push_back(basis);
                continue;
            }
            const Matrix<T> image = ops[i] * basis;
            std::size_t found = 0;
            for (const T& lambda : lambdas) {
                Matrix<T> shifted = image;
                for (std::size_t r = 0; r < n; ++r)
                    for (std::size_t c = 0; c < basis.cols(); ++c)
                        if (!is_zero(basis(r, c))) shifted(r, c) = shifted(r, c) - lambda * basis(r, c);
                const auto ker = kernel(shifted);
                if (ker.empty()) continue;
                Matrix<T> coords(basis.cols(), ker.size());
                for (std::size_t c = 0; c < ker.size(); ++c)
                    for (std::size_t r = 0; r < basis.cols(); ++r) coords(r, c) = ker[c][r];
                next.push_back(basis * coords);
                found += ker.size();
            }
            if (found != basis.cols())
                throw AlgebraError("splitting stalls: operator " + std::to_string(i) + " has an eigenvalue outside the expected set");
        }
        parts = std::move(next);
    }
    if (!all_lines()) throw AlgebraError("splitting stalls: a subspace of dimension > 1 survives all operators");

    std::vector<std::vector<T>> rows;
    rows.reserve(parts.size());
    for (const Matrix<T>& p : parts) {
        const std::vector<T> v = p.column(0);
        std::size_t pivot = 0;
        while (is_zero(v[pivot])) ++pivot;
        std::vector<T> tuple(ops.size());
        for (std::size_t i = 0; i < ops.size(); ++i) {
            const std::vector<T> w = ops[i] * v;
            tuple[i] = w[pivot] / v[pivot];
            for (std::size_t r = 0; r < n; ++r)
                if (!(w[r] == tuple[i] * v[r]))
                    throw AlgebraError("splitting stalls: vector is not a common eigenvector of operator " + std::to_string(i));
        }
        rows.push_back(std::move(tuple));
    }
    return rows;
}

struct NumericTolerances {
    double kernel = 1e-8;  // relative singular-value cutoff
    double integer = 1e-6; // rounding window for structure constants
};

/// Numeric splitting with Eigen. Each invariant subspace is represented by an
/// orthonormal basis Q; the eigenvalues of Q^H A Q are clustered and every
/// cluster is cut out as the numeric kernel of (A - lambda) Q.
inline std::vector<std::vector<std::complex<double>>> split_numeric(const std::vector<Eigen::MatrixXcd>& ops,
                                                                    const NumericTolerances& tol = {}) {
    using Eigen::MatrixXcd;
    if (ops.empty()) throw InputError("no operators to split by");
    const Eigen::Index n = ops[0].rows();
    std::vector<MatrixXcd> parts{MatrixXcd::Identity(n, n)};
    auto all_lines = [&] {
        return std::all_of(parts.begin(), parts.end(), [](const MatrixXcd& p) { return p.cols() == 1; });
    };
    for (std::size_t i = 0; i < ops.size() && !all_lines(); ++i) {
        const MatrixXcd& a = ops[i];
        const double scale = std::max(1.0, a.norm());
        std::vector<MatrixXcd> next;
        for (const MatrixXcd& q : parts) {
            if (q.cols() == 1) {
                next.push_back(q);
                continue;
            }
            const MatrixXcd aq = a * q;
            const MatrixXcd restricted = q.adjoint() * aq;
            Eigen::ComplexEigenSolver<MatrixXcd> solver(restricted, false);
            if (solver.info() != Eigen::Success) throw AlgebraError("splitting failed: eigenvalue solver did not converge");
            std::vector<std::complex<double>> clusters;
            for (Eigen::Index k = 0; k < restricted.rows(); ++k) {
                const std::complex<double> ev = solver.eigenvalues()(k);
                const bool known = std::any_of(clusters.begin(), clusters.end(),
                                               [&](const std::complex<double>& c) { return std::abs(c - ev) < 1e-6 * scale; });
                if (!known) clusters.push_back(ev);
            }
            Eigen::Index found = 0;
            for (const auto& lambda : clusters) {
                const MatrixXcd shifted = aq - lambda * q;
                Eigen::JacobiSVD<MatrixXcd> svd(shifted, Eigen::ComputeFullV);
                const auto& sv = svd.singularValues();
                Eigen::Index null_dim = 0;
                for (Eigen::Index k = 0; k < sv.size(); ++k)
                    if (sv(k) < tol.kernel * scale) ++null_dim;
                null_dim += q.cols() - sv.size();
                if (null_dim == 0) continue;
                const MatrixXcd coords = svd.matrixV().rightCols(null_dim);
                const MatrixXcd piece = q * coords;
                Eigen::HouseholderQR<MatrixXcd> qr(piece);
                next.push_back(qr.householderQ() * MatrixXcd::Identity(n, null_dim));
                found += null_dim;
            }
            if (found != q.cols()) throw AlgebraError("splitting failed: eigenspaces of operator " + std::to_string(i) + " do not fill the subspace");
        }
        parts = std::move(next);
    }
    if (!all_lines()) throw AlgebraError("splitting failed: a subspace of dimension > 1 survives all operators");

    std::vector<std::vector<std::complex<double>>> rows;
    rows.reserve(parts.size());
    for (const MatrixXcd& p : parts) {
        const Eigen::VectorXcd v = p.col(0);
        const double norm2 = v.squaredNorm();
        std::vector<std::complex<double>> tuple(ops.size());
        for (std::size_t i = 0; i < ops.size(); ++i) tuple[i] = v.dot(ops[i] * v) / norm2;
        rows.push_back(std::move(tuple));
    }
    return rows;
}

} // namespace zbrng
