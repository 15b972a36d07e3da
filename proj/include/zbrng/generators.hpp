#pragma once

// Constructors for example objects: Hadamard families, character tables of
// finite abelian groups, exterior squares, A1 affine (Kac-Peterson) matrices
// and a few fixed matrices.

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "zbrng/error.hpp"
#include "zbrng/exact.hpp"
#include "zbrng/hadamard.hpp"
#include "zbrng/matrix.hpp"
#include "zbrng/rng_core.hpp"
#include "zbrng/spectra.hpp"

namespace zbrng {

// ---------------------------------------------------------------------------
// Hadamard matrices

/// Order 2^m by repeated doubling with [[1,1],[1,-1]].
inline HadamardMatrix gen_sylvester(int m) {
    if (m < 2) throw InputError("Sylvester construction needs m >= 2");
    if (m > 12) throw InputError("Sylvester construction limited to m <= 12");
    const std::size_t n = std::size_t{1} << m;
    IntMatrix h(n, n, 1);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) h(r, c) = (std::popcount(r & c) % 2 == 0) ? 1 : -1;
    return HadamardMatrix(std::move(h));
}

inline bool is_prime(long long q) {
    if (q < 2) return false;
    for (long long d = 2; d * d <= q; ++d)
        if (q % d == 0) return false;
    return true;
}

/// Paley I for a prime q = 3 (mod 4): Q the quadratic-residue matrix of order
/// q, S = [[0, 1^T], [-1, Q]], H = I + S, then normalized.
inline HadamardMatrix gen_paley(long long q) {
    if (!is_prime(q) || q % 4 != 3) throw InputError("Paley construction needs a prime q = 3 (mod 4)");
    if (q > 4095) throw InputError("Paley construction limited to q < 4096");
    const auto n = static_cast<std::size_t>(q + 1);
    std::vector<int> chi(static_cast<std::size_t>(q), -1);
    chi[0] = 0;
    for (long long x = 1; x < q; ++x) chi[static_cast<std::size_t>(x * x % q)] = 1;
    IntMatrix h(n, n, 0);
    for (std::size_t c = 1; c < n; ++c) h(0, c) = 1;
    for (std::size_t r = 1; r < n; ++r) h(r, 0) = -1;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const long long d = ((static_cast<long long>(i) - static_cast<long long>(j)) % q + q) % q;
            h(i + 1, j + 1) = chi[static_cast<std::size_t>(d)];
        }
    for (std::size_t r = 0; r < n; ++r) h(r, r) += 1;
    return normalize_hadamard(h);
}

/// Kronecker product, renormalized.
inline HadamardMatrix gen_kronecker(const IntMatrix& a, const IntMatrix& b) {
    HadamardMatrix::validate_sign_orthogonal(a);
    HadamardMatrix::validate_sign_orthogonal(b);
    const std::size_t na = a.rows(), nb = b.rows();
    IntMatrix out(na * nb, na * nb, 0);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j)
            for (std::size_t k = 0; k < nb; ++k)
                for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = a(i, j) * b(k, l);
    return normalize_hadamard(out);
}

inline HadamardMatrix gen_kronecker(const HadamardMatrix& a, const HadamardMatrix& b) {
    return gen_kronecker(a.matrix(), b.matrix());
}

inline IntMatrix sylvester2() { return IntMatrix::from_rows({{1, 1}, {1, -1}}); }

// ---------------------------------------------------------------------------
// Finite abelian groups

/// Z/m_1 x ... x Z/m_r; elements are mixed-radix tuples with the first factor
/// most significant.
struct GroupSpec {
    std::vector<int> orders;

    explicit GroupSpec(std::vector<int> o) : orders(std::move(o)) {
        if (orders.empty()) throw InputError("group needs at least one cyclic factor");
        std::size_t size = 1;
        for (int m : orders) {
            if (m < 2) throw InputError("cyclic orders must be >= 2");
            size *= static_cast<std::size_t>(m);
            if (size > 4096) throw InputError("group too large");
        }
    }

    std::size_t size() const {
        std::size_t s = 1;
        for (int m : orders) s *= static_cast<std::size_t>(m);
        return s;
    }

    std::vector<int> digits(std::size_t x) const {
        std::vector<int> d(orders.size());
        for (std::size_t t = orders.size(); t-- > 0;) {
            d[t] = static_cast<int>(x % static_cast<std::size_t>(orders[t]));
            x /= static_cast<std::size_t>(orders[t]);
        }
        return d;
    }

    std::size_t index(const std::vector<int>& d) const {
        std::size_t x = 0;
        for (std::size_t t = 0; t < orders.size(); ++t) x = x * static_cast<std::size_t>(orders[t]) + static_cast<std::size_t>(d[t]);
        return x;
    }

    std::size_t add(std::size_t a, std::size_t b) const {
        auto da = digits(a);
        const auto db = digits(b);
        for (std::size_t t = 0; t < orders.size(); ++t) da[t] = (da[t] + db[t]) % orders[t];
        return index(da);
    }

    std::size_t negate(std::size_t a) const {
        auto d = digits(a);
        for (std::size_t t = 0; t < orders.size(); ++t) d[t] = (orders[t] - d[t]) % orders[t];
        return index(d);
    }
};

/// The group ring: N_ij^m = 1 iff m = i + j, involution = inversion.
inline FusionRing group_ring(const GroupSpec& g) {
    const std::size_t n = g.size();
    StructureTensor N(n);
    Permutation tilde(n);
    for (Index i = 0; i < n; ++i) {
        tilde[i] = g.negate(i);
        for (Index j = 0; j < n; ++j) N(i, j, g.add(i, j)) = 1;
    }
    return FusionRing(std::move(N), std::move(tilde));
}

/// Character table: entry (a, b) = prod_t zeta_{m_t}^{a_t b_t}.
inline SMatrix group_ring_smatrix(const GroupSpec& g) {
    const std::size_t n = g.size();
    int order = 1;
    for (int m : g.orders) order = std::lcm(order, m);
    CycMatrix s(n, n);
    for (Index a = 0; a < n; ++a) {
        const auto da = g.digits(a);
        for (Index b = 0; b < n; ++b) {
            const auto db = g.digits(b);
            long long e = 0;
            for (std::size_t t = 0; t < g.orders.size(); ++t) e += static_cast<long long>(da[t]) * db[t] * (order / g.orders[t]);
            s(a, b) = CycNum::zeta(order, e % order);
        }
    }
    return SMatrix(std::move(s));
}

// ---------------------------------------------------------------------------
// Exterior square

/// Lambda^2(M)_{(i<j),(k<l)} = M_ik M_jl - M_il M_jk with pairs in
/// lexicographic order.
template <class T>
Matrix<T> exterior_square(const Matrix<T>& m) {
    if (m.rows() != m.cols()) throw InputError("exterior square needs a square matrix");
    const std::size_t n = m.rows();
    if (n < 2) throw InputError("exterior square needs n >= 2");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    Matrix<T> out(pairs.size(), pairs.size());
    for (std::size_t r = 0; r < pairs.size(); ++r)
        for (std::size_t c = 0; c < pairs.size(); ++c) {
            const auto [i, j] = pairs[r];
            const auto [k, l] = pairs[c];
            out(r, c) = m(i, k) * m(j, l) - m(i, l) * m(j, k);
        }
    return out;
}

inline SMatrix exterior_square(const SMatrix& s) {
    if (s.is_exact()) return SMatrix(exterior_square(s.exact()));
    const Eigen::MatrixXcd& c = s.numeric();
    Matrix<Complex> m(static_cast<std::size_t>(c.rows()), static_cast<std::size_t>(c.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t k = 0; k < m.cols(); ++k) m(r, k) = c(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k));
    const Matrix<Complex> e = exterior_square(m);
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(e.rows()), static_cast<Eigen::Index>(e.cols()));
    for (std::size_t r = 0; r < e.rows(); ++r)
        for (std::size_t k = 0; k < e.cols(); ++k) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = e(r, k);
    return SMatrix(std::move(out));
}

// ---------------------------------------------------------------------------
// A1 at level k

/// Character-normalized s-matrix of the affine algebra of type A1 at level k:
/// s_ab = S_ab / S_a0 with S_ab proportional to sin(pi (a+1)(b+1) / (k+2)), so
/// column 0 is all ones and the Verlinde formula gives the fusion rules.
inline SMatrix kac_peterson_a1(int level) {
    if (level < 1) throw InputError("level must be >= 1");
    if (level > 1000) throw InputError("level too large");
    const auto n = static_cast<Eigen::Index>(level + 1);
    const double h = level + 2;
    Eigen::MatrixXcd s(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        const double row0 = std::sin(std::numbers::pi * static_cast<double>(a + 1) / h);
        for (Eigen::Index b = 0; b < n; ++b)
            s(a, b) = std::sin(std::numbers::pi * static_cast<double>((a + 1) * (b + 1)) / h) / row0;
    }
    return SMatrix(std::move(s));
}

// ---------------------------------------------------------------------------
// Fixed matrices

/// s-matrix of the quotient of the representation ring of D(S3) by the ideal
/// generated by 1 - (sign character).
inline SMatrix fixture_ds3() {
    return SMatrix::from_integers({{1, 2, 3, 2, 2, 2},
                                   {1, 2, -3, 2, 2, 2},
                                   {1, 2, 0, -1, -1, -1},
                                   {1, -1, 0, -1, -1, 2},
                                   {1, -1, 0, -1, 2, -1},
                                   {1, -1, 0, 2, -1, -1}});
}

/// "s-matrix" of the monoid ring of ({0,1}^2, componentwise product).
inline SMatrix fixture_monoid() {
    return SMatrix::from_integers({{1, 1, 1, 1}, {1, 0, 1, 0}, {1, 1, 0, 0}, {1, 0, 0, 0}});
}

/// The exterior square of the (Z/2)^2 character table as it is usually printed
/// (a different basis order from exterior_square's lexicographic pairs).
inline SMatrix fixture_ext2_printed() {
    return SMatrix::from_integers({{-2, 0, 2, -2, 0, -2},
                                   {0, -2, -2, -2, -2, 0},
                                   {2, -2, 0, 0, 2, -2},
                                   {-2, -2, 0, 0, 2, 2},
                                   {0, -2, 2, 2, -2, 0},
                                   {-2, 0, -2, 2, 0, -2}});
}

/// Ring defined by an exact s-matrix through the Verlinde formula, with the
/// involution read off the conjugate columns.
inline FusionRing ring_from_smatrix(const SMatrix& s, const Tolerances& tol = {}) {
    StructureTensor N = verlinde_tensor(s, tol).tensor;
    return FusionRing(std::move(N), involution_from_smatrix(s));
}

} // namespace zbrng
