#pragma once

// s-matrices: Verlinde structure constants, orthogonality, Fourier
// normalization, involution recovery, s-matrices computed from a tensor, and
// closed subsets read off the s-matrix.
//
// Convention: rows of s are the one-dimensional characters, columns are the
// images of the basis, so s_{ki} s_{kj} = sum_m N_ij^m s_{km}.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "zbrng/error.hpp"
#include "zbrng/exact.hpp"
#include "zbrng/matrix.hpp"
#include "zbrng/rng_core.hpp"
#include "zbrng/splitting.hpp"

namespace zbrng {

using CycMatrix = Matrix<CycNum>;
using Complex = std::complex<double>;

class SMatrix {
public:
    enum class Mode { exact, numeric };

    SMatrix() = default;
    explicit SMatrix(CycMatrix m) : data_(std::move(m)) { check_shape(); }
    explicit SMatrix(Eigen::MatrixXcd m) : data_(std::move(m)) { check_shape(); }

    static SMatrix from_integers(const std::vector<std::vector<long long>>& rows) {
        std::vector<std::vector<CycNum>> r;
        for (const auto& row : rows) r.emplace_back(row.begin(), row.end());
        return SMatrix(CycMatrix::from_rows(r));
    }

    Mode mode() const noexcept { return std::holds_alternative<CycMatrix>(data_) ? Mode::exact : Mode::numeric; }
    bool is_exact() const noexcept { return mode() == Mode::exact; }

    std::size_t rows() const {
        return is_exact() ? exact().rows() : static_cast<std::size_t>(numeric().rows());
    }
    std::size_t cols() const {
        return is_exact() ? exact().cols() : static_cast<std::size_t>(numeric().cols());
    }

    const CycMatrix& exact() const {
        if (!is_exact()) throw Error("s-matrix is numeric");
        return std::get<CycMatrix>(data_);
    }
    const Eigen::MatrixXcd& numeric() const { return std::get<Eigen::MatrixXcd>(data_); }

    /// Complex values of the entries in either mode.
    Eigen::MatrixXcd to_complex() const {
        if (!is_exact()) return numeric();
        const CycMatrix& m = exact();
        Eigen::MatrixXcd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c).to_complex();
        return out;
    }

    /// True when every entry is rational.
    bool is_rational() const {
        if (!is_exact()) return false;
        const CycMatrix& m = exact();
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c)
                if (!m(r, c).is_rational()) return false;
        return true;
    }

private:
    void check_shape() const {
        if (rows() == 0 || cols() == 0) throw InputError("s-matrix must be nonempty");
    }

    std::variant<CycMatrix, Eigen::MatrixXcd> data_;
};

struct Tolerances {
    double kernel = 1e-8;
    double integer = 1e-6;
};

// ---------------------------------------------------------------------------
// Verlinde formula

struct VerlindeResult {
    StructureTensor tensor;
    bool integral = true;
    bool nonnegative = true;
};

namespace detail {

inline std::string triple(std::size_t i, std::size_t j, std::size_t m) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(m) + ")";
}

inline void require_square(const SMatrix& s) {
    if (s.rows() != s.cols()) throw InputError("s-matrix must be square");
}

inline std::int64_t rat_to_int64(const Rat& r, std::size_t i, std::size_t j, std::size_t m) {
    if (!is_integer(r)) throw AlgebraError("non-integral structure constant at " + triple(i, j, m));
    const BigInt v = boost::multiprecision::numerator(r);
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw AlgebraError("structure constant out of 64-bit range at " + triple(i, j, m));
    return static_cast<std::int64_t>(v);
}

/// N_ij^m = sum_l s_li s_lj t_ml for rational s, with t = s^{-1}. Both
/// matrices are scaled to integers so the inner loop runs in BigInt without
/// gcd normalization.
inline StructureTensor verlinde_rational(const RatMatrix& s, const RatMatrix& t) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    const std::size_t n = s.rows();
    auto scale = [n](const RatMatrix& a, std::vector<BigInt>& ints) {
        BigInt d = 1;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) d = boost::multiprecision::lcm(d, BigInt(denominator(a(r, c))));
        ints.resize(n * n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) ints[r * n + c] = numerator(a(r, c)) * (d / denominator(a(r, c)));
        return d;
    };
    std::vector<BigInt> si, ti;
    const BigInt ds = scale(s, si);
    const BigInt dt = scale(t, ti);
    const BigInt denom = ds * ds * dt;
    StructureTensor N(n);
    std::vector<BigInt> prod(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            for (std::size_t l = 0; l < n; ++l) prod[l] = si[l * n + i] * si[l * n + j];
            for (std::size_t m = 0; m < n; ++m) {
                BigInt acc = 0;
                for (std::size_t l = 0; l < n; ++l)
                    if (prod[l] != 0 && ti[m * n + l] != 0) acc += prod[l] * ti[m * n + l];
                const Rat v(acc, denom);
                N(i, j, m) = N(j, i, m) = rat_to_int64(v, i, j, m);
            }
        }
    return N;
}

inline StructureTensor verlinde_cyclotomic(const CycMatrix& s, const CycMatrix& t) {
    const std::size_t n = s.rows();
    StructureTensor N(n);
    std::vector<CycNum> prod(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            for (std::size_t l = 0; l < n; ++l) prod[l] = s(l, i) * s(l, j);
            for (std::size_t m = 0; m < n; ++m) {
                CycNum acc;
                for (std::size_t l = 0; l < n; ++l)
                    if (!prod[l].is_zero() && !t(m, l).is_zero()) acc += prod[l] * t(m, l);
                if (!acc.is_rational()) throw AlgebraError("non-integral structure constant at " + triple(i, j, m));
                N(i, j, m) = N(j, i, m) = rat_to_int64(acc.to_rational(), i, j, m);
            }
        }
    return N;
}

inline StructureTensor verlinde_numeric(const Eigen::MatrixXcd& s, const Tolerances& tol) {
    const Eigen::Index n = s.rows();
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(s);
    lu.setThreshold(tol.kernel);
    if (!lu.isInvertible()) throw AlgebraError("singular matrix");
    const Eigen::MatrixXcd t = lu.inverse();
    StructureTensor N(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) {
            const Eigen::VectorXcd prod = s.col(i).cwiseProduct(s.col(j));
            const Eigen::VectorXcd coeffs = t * prod;
            for (Eigen::Index m = 0; m < n; ++m) {
                const Complex v = coeffs(m);
                const double r = std::round(v.real());
                const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j), um = static_cast<std::size_t>(m);
                if (std::abs(v - Complex(r, 0.0)) > tol.integer) throw AlgebraError("non-integral structure constant at " + triple(ui, uj, um));
                N(ui, uj, um) = N(uj, ui, um) = static_cast<std::int64_t>(r);
            }
        }
    return N;
}

} // namespace detail

/// Exact inverse of an exact s-matrix; AlgebraError when singular.
inline CycMatrix exact_inverse(const CycMatrix& s) {
    bool rational = true;
    for (std::size_t r = 0; r < s.rows() && rational; ++r)
        for (std::size_t c = 0; c < s.cols(); ++c)
            if (!s(r, c).is_rational()) {
                rational = false;
                break;
            }
    if (rational) {
        const auto inv = inverse(s.map([](const CycNum& x) { return x.to_rational(); }));
        if (!inv) throw AlgebraError("singular matrix");
        return inv->map([](const Rat& x) { return CycNum(x); });
    }
    const auto inv = inverse(s);
    if (!inv) throw AlgebraError("singular matrix");
    return *inv;
}

/// N_ij^m = sum_l s_li s_lj s'_ml with s' = s^{-1}. Exact in exact mode;
/// numeric mode rounds and requires every entry within tol.integer of an integer.
inline VerlindeResult verlinde_tensor(const SMatrix& s, const Tolerances& tol = {}) {
    detail::require_square(s);
    VerlindeResult out;
    if (s.is_exact()) {
        const CycMatrix& m = s.exact();
        if (s.is_rational()) {
            const RatMatrix q = m.map([](const CycNum& x) { return x.to_rational(); });
            const auto inv = inverse(q);
            if (!inv) throw AlgebraError("singular matrix");
            out.tensor = detail::verlinde_rational(q, *inv);
        } else {
            out.tensor = detail::verlinde_cyclotomic(m, exact_inverse(m));
        }
    } else {
        out.tensor = detail::verlinde_numeric(s.numeric(), tol);
    }
    out.nonnegative = out.tensor.all_nonnegative();
    return out;
}

// ---------------------------------------------------------------------------
// Orthogonality, Fourier matrix, involution

struct OrthogonalityReport {
    bool orthogonal = true;
    double max_deviation = 0.0; // largest |<row_l, row_m>| / (|row_l| |row_m|), l != m
    std::optional<std::pair<std::size_t, std::size_t>> witness;
};

/// Checks sum_i s_{l,i} s_{m,~i} = 0 for l != m. For an s-matrix of a rng the
/// column ~i is the conjugate of column i, so this is hermitian orthogonality.
inline OrthogonalityReport row_orthogonality_check(const SMatrix& s, const Permutation& tilde, double tol = 1e-9) {
    detail::require_square(s);
    const std::size_t n = s.cols();
    if (tilde.size() != n || !is_permutation_of_range(tilde)) throw InputError("involution is not a permutation of the columns");
    OrthogonalityReport rep;
    const Eigen::MatrixXcd c = s.to_complex();
    std::vector<double> norms(s.rows());
    for (std::size_t l = 0; l < s.rows(); ++l) norms[l] = c.row(static_cast<Eigen::Index>(l)).norm();
    for (std::size_t l = 0; l < s.rows(); ++l)
        for (std::size_t m = l + 1; m < s.rows(); ++m) {
            double dev = 0.0;
            bool zero = true;
            if (s.is_exact()) {
                const CycMatrix& e = s.exact();
                CycNum acc;
                for (std::size_t i = 0; i < n; ++i) acc += e(l, i) * e(m, tilde[i]);
                zero = acc.is_zero();
                dev = std::abs(acc.to_complex()) / std::max(1e-300, norms[l] * norms[m]);
            } else {
                Complex acc = 0;
                for (std::size_t i = 0; i < n; ++i)
                    acc += c(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(i)) *
                           c(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(tilde[i]));
                dev = std::abs(acc) / std::max(1e-300, norms[l] * norms[m]);
                zero = dev <= tol;
            }
            rep.max_deviation = std::max(rep.max_deviation, dev);
            if (!zero && rep.orthogonal) {
                rep.orthogonal = false;
                rep.witness = std::make_pair(l, m);
            }
        }
    return rep;
}

/// Hermitian inner products of rows (used for the Fourier normalization).
inline OrthogonalityReport hermitian_orthogonality(const SMatrix& s, double tol = 1e-9) {
    OrthogonalityReport rep;
    const Eigen::MatrixXcd c = s.to_complex();
    for (Eigen::Index l = 0; l < c.rows(); ++l)
        for (Eigen::Index m = l + 1; m < c.rows(); ++m) {
            const double dev = std::abs(c.row(m).dot(c.row(l))) / std::max(1e-300, c.row(l).norm() * c.row(m).norm());
            rep.max_deviation = std::max(rep.max_deviation, dev);
            if (dev > tol && rep.orthogonal) {
                rep.orthogonal = false;
                rep.witness = std::make_pair(static_cast<std::size_t>(l), static_cast<std::size_t>(m));
            }
        }
    return rep;
}

/// Rows divided by the positive square roots of their hermitian norms.
inline Eigen::MatrixXcd fourier_matrix(const SMatrix& s, double tol = 1e-9) {
    detail::require_square(s);
    const Eigen::MatrixXcd c = s.to_complex();
    for (Eigen::Index r = 0; r < c.rows(); ++r)
        if (c.row(r).norm() == 0.0) throw AlgebraError("zero row " + std::to_string(r));
    const OrthogonalityReport rep = hermitian_orthogonality(s, tol);
    if (!rep.orthogonal)
        throw AlgebraError("rows not orthogonal: rows " + std::to_string(rep.witness->first) + " and " + std::to_string(rep.witness->second));
    Eigen::MatrixXcd f = c;
    for (Eigen::Index r = 0; r < f.rows(); ++r) f.row(r) /= c.row(r).norm();
    return f;
}

/// The permutation with column ~i equal to the conjugate of column i. It must
/// also make the rows orthogonal, otherwise it is not an involution of a rng.
inline Permutation involution_from_smatrix(const SMatrix& s, double tol = 1e-9) {
    detail::require_square(s);
    const std::size_t n = s.cols();
    Permutation p(n, n);
    if (s.is_exact()) {
        const CycMatrix& e = s.exact();
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<CycNum> conj_col(n);
            for (std::size_t r = 0; r < n; ++r) conj_col[r] = e(r, i).conj();
            for (std::size_t j = 0; j < n && p[i] == n; ++j) {
                bool same = true;
                for (std::size_t r = 0; r < n && same; ++r) same = e(r, j) == conj_col[r];
                if (same) p[i] = j;
            }
        }
    } else {
        const Eigen::MatrixXcd& c = s.numeric();
        for (std::size_t i = 0; i < n; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            const double scale = std::max(1.0, c.col(ii).norm());
            for (std::size_t j = 0; j < n && p[i] == n; ++j)
                if ((c.col(static_cast<Eigen::Index>(j)) - c.col(ii).conjugate()).norm() <= tol * scale) p[i] = j;
        }
    }
    if (std::find(p.begin(), p.end(), n) != p.end() || !is_permutation_of_range(p)) throw AlgebraError("no conjugation permutation exists");
    // An s-matrix of a rng has orthogonal rows with respect to its involution;
    // without that the permutation is not an admissible involution.
    if (!row_orthogonality_check(s, p, tol).orthogonal)
        throw AlgebraError("no conjugation permutation exists: rows are not orthogonal for the conjugation permutation");
    return p;
}

// ---------------------------------------------------------------------------
// s-matrix from a tensor

namespace detail {

/// Rows sorted lexicographically by real parts rounded to 1e-6, then by
/// rounded imaginary parts.
inline std::vector<std::vector<Complex>> sort_rows(std::vector<std::vector<Complex>> rows) {
    auto key = [](double x) { return std::round(x * 1e6); };
    std::sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (key(a[i].real()) != key(b[i].real())) return key(a[i].real()) < key(b[i].real());
        for (std::size_t i = 0; i < a.size(); ++i)
            if (key(a[i].imag()) != key(b[i].imag())) return key(a[i].imag()) < key(b[i].imag());
        return false;
    });
    return rows;
}

/// Regular representation: (L_i)_{j,m} = N_ij^m, so L_i phi = phi_i phi for a
/// character phi written as the vector (phi(b_m))_m.
inline std::vector<IntMatrix> regular_matrices(const StructureTensor& N) {
    const std::size_t n = N.size();
    std::vector<IntMatrix> out(n, IntMatrix(n, n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t m = 0; m < n; ++m) out[i](j, m) = N(i, j, m);
    return out;
}

inline std::optional<std::int64_t> exact_sqrt(std::int64_t v) {
    if (v < 0) return std::nullopt;
    auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<long double>(v))));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    if (r * r != v) return std::nullopt;
    return r;
}

/// If every L_i squares to c_i I with c_i a perfect square, returns the roots.
inline std::optional<std::vector<std::int64_t>> integer_eigenvalue_bounds(const std::vector<IntMatrix>& L) {
    std::vector<std::int64_t> roots;
    for (const IntMatrix& a : L) {
        const IntMatrix sq = a * a;
        const std::int64_t c = sq(0, 0);
        if (!(sq == IntMatrix::identity(a.rows()).map([c](std::int64_t v) { return v * c; }))) return std::nullopt;
        const auto r = exact_sqrt(c);
        if (!r) return std::nullopt;
        roots.push_back(*r);
    }
    return roots;
}

} // namespace detail

/// The characters of R (x) C found by common-eigenspace splitting of the
/// regular-representation matrices. When every N_i squares to a perfect-square
/// scalar (Hadamard rings) the split is exact over Q; otherwise it is numeric.
inline SMatrix smatrix_from_tensor(const FusionRing& R, const Tolerances& tol = {}) {
    const auto L = detail::regular_matrices(R.tensor());
    const std::size_t n = R.size();
    if (const auto roots = detail::integer_eigenvalue_bounds(L)) {
        std::vector<RatMatrix> ops;
        for (const auto& a : L) ops.push_back(a.map([](std::int64_t v) { return Rat(v); }));
        auto rows = split_exact<Rat>(ops, [&](std::size_t i) {
            const Rat r((*roots)[i]);
            return r == 0 ? std::vector<Rat>{r} : std::vector<Rat>{r, -r};
        });
        std::sort(rows.begin(), rows.end());
        CycMatrix m(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) m(r, c) = CycNum(rows[r][c]);
        return SMatrix(std::move(m));
    }
    std::vector<Eigen::MatrixXcd> ops;
    for (const auto& a : L) {
        Eigen::MatrixXcd c(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t k = 0; k < n; ++k) c(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = static_cast<double>(a(r, k));
        ops.push_back(std::move(c));
    }
    const auto rows = detail::sort_rows(split_numeric(ops, {tol.kernel, tol.integer}));
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return SMatrix(std::move(m));
}

/// Largest |s_{ki} s_{kj} - sum_m N_ij^m s_{km}| over all rows and pairs.
inline double character_residual(const SMatrix& s, const StructureTensor& N) {
    const Eigen::MatrixXcd c = s.to_complex();
    const std::size_t n = N.size();
    double worst = 0.0;
    for (Eigen::Index k = 0; k < c.rows(); ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Complex rhs = 0;
                const std::int64_t* p = N.product(i, j);
                for (std::size_t m = 0; m < n; ++m)
                    if (p[m] != 0) rhs += static_cast<double>(p[m]) * c(k, static_cast<Eigen::Index>(m));
                worst = std::max(worst, std::abs(c(k, static_cast<Eigen::Index>(i)) * c(k, static_cast<Eigen::Index>(j)) - rhs));
            }
    return worst;
}

// ---------------------------------------------------------------------------
// Closed subsets from the s-matrix

namespace detail {

/// Entry equality, exact or within tol.
struct EntryComparer {
    const SMatrix& s;
    Eigen::MatrixXcd c;
    double tol;

    EntryComparer(const SMatrix& m, double t) : s(m), c(m.to_complex()), tol(t) {}

    bool equal(std::size_t r1, std::size_t c1, std::size_t r2, std::size_t c2) const {
        if (s.is_exact()) return s.exact()(r1, c1) == s.exact()(r2, c2);
        const Complex a = c(static_cast<Eigen::Index>(r1), static_cast<Eigen::Index>(c1));
        const Complex b = c(static_cast<Eigen::Index>(r2), static_cast<Eigen::Index>(c2));
        return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
    }

    bool is_zero(std::size_t r, std::size_t col) const {
        if (s.is_exact()) return s.exact()(r, col).is_zero();
        return std::abs(c(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col))) <= tol;
    }

    /// Indices of the distinct nonzero rows of the column submatrix, first
    /// occurrence of each.
    std::vector<std::size_t> distinct_rows(const IndexSet& cols) const {
        std::vector<std::size_t> reps;
        for (std::size_t r = 0; r < s.rows(); ++r) {
            const bool zero = std::all_of(cols.begin(), cols.end(), [&](std::size_t k) { return is_zero(r, k); });
            if (zero) continue;
            const bool seen = std::any_of(reps.begin(), reps.end(), [&](std::size_t q) {
                return std::all_of(cols.begin(), cols.end(), [&](std::size_t k) { return equal(r, k, q, k); });
            });
            if (!seen) reps.push_back(r);
        }
        return reps;
    }
};

} // namespace detail

struct ClosedSubsetResult {
    std::vector<IndexSet> sets;      // sorted by size, then lexicographically
    std::vector<bool> verified;      // parallel to sets; always true for returned sets
    std::size_t rejected = 0;        // candidates dropped because the tensor check failed
};

/// Row-pair heuristic: for rows l < m take B' = columns where they agree and
/// accept B' if the column submatrix has exactly |B'| distinct nonzero rows.
/// The accepted family (seeded with the full basis) is closed under pairwise
/// intersection, re-testing every intersection, until it is stable. Every
/// candidate is then checked against the Verlinde tensor and kept only if closed.
inline ClosedSubsetResult closed_subset_heuristic(const SMatrix& s, const Tolerances& tol = {}) {
    detail::require_square(s);
    const std::size_t n = s.cols();
    const detail::EntryComparer cmp(s, tol.kernel);
    auto accepted = [&](const IndexSet& b) { return !b.empty() && cmp.distinct_rows(b).size() == b.size(); };

    std::set<IndexSet> family;
    family.insert(identity_permutation(n));
    for (std::size_t l = 0; l < s.rows(); ++l)
        for (std::size_t m = l + 1; m < s.rows(); ++m) {
            IndexSet b;
            for (std::size_t c = 0; c < n; ++c)
                if (cmp.equal(l, c, m, c)) b.push_back(c);
            if (accepted(b)) family.insert(b);
        }

    std::set<IndexSet> tested = family;
    bool grew = true;
    while (grew) {
        grew = false;
        const std::vector<IndexSet> current(family.begin(), family.end());
        for (std::size_t a = 0; a < current.size(); ++a)
            for (std::size_t b = a + 1; b < current.size(); ++b) {
                IndexSet meet;
                std::set_intersection(current[a].begin(), current[a].end(), current[b].begin(), current[b].end(), std::back_inserter(meet));
                if (!tested.insert(meet).second) continue;
                if (accepted(meet)) {
                    family.insert(meet);
                    grew = true;
                }
            }
    }

    const StructureTensor N = verlinde_tensor(s, tol).tensor;
    ClosedSubsetResult out;
    std::vector<IndexSet> sorted(family.begin(), family.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const IndexSet& a, const IndexSet& b) { return a.size() < b.size(); });
    for (const IndexSet& b : sorted) {
        if (is_closed_subset(N, b)) {
            out.sets.push_back(b);
            out.verified.push_back(true);
        } else {
            ++out.rejected;
        }
    }
    return out;
}

/// s-matrix of the subring spanned by a closed subset: the distinct nonzero
/// rows of the column submatrix, in order of first appearance.
inline SMatrix subring_smatrix(const SMatrix& s, const IndexSet& S, const Tolerances& tol = {}) {
    detail::require_square(s);
    const IndexSet cols = normalize_index_set(S, s.cols());
    if (cols.empty() || !is_closed_subset(verlinde_tensor(s, tol).tensor, cols)) throw AlgebraError("subset is not closed");
    const detail::EntryComparer cmp(s, tol.kernel);
    const std::vector<std::size_t> reps = cmp.distinct_rows(cols);
    if (reps.size() != cols.size()) throw AlgebraError("subset is not closed: column submatrix has " + std::to_string(reps.size()) + " distinct nonzero rows");
    if (s.is_exact()) {
        CycMatrix out(reps.size(), cols.size());
        for (std::size_t r = 0; r < reps.size(); ++r)
            for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = s.exact()(reps[r], cols[c]);
        return SMatrix(std::move(out));
    }
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(reps.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < reps.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = s.numeric()(static_cast<Eigen::Index>(reps[r]), static_cast<Eigen::Index>(cols[c]));
    return SMatrix(std::move(out));
}

// ---------------------------------------------------------------------------
// Column moduli

namespace detail {

/// True if y is a root of unity: exactly y^L = 1 with L = lcm(2, order(y)).
inline bool is_root_of_unity(const CycNum& y) {
    const int L = std::lcm(2, y.order());
    CycNum p(1);
    for (int e = 0; e < L; ++e) p *= y;
    return p == CycNum(1);
}

inline bool is_root_of_unity(Complex y, double tol) {
    if (std::abs(std::abs(y) - 1.0) > tol) return false;
    Complex p = 1.0;
    for (int e = 1; e <= kMaxCyclotomicOrder; ++e) {
        p *= y;
        if (std::abs(p - 1.0) <= tol * e) return true;
    }
    return false;
}

} // namespace detail

/// Writes every column as mu_i v_i with v_i a vector of roots of unity and
/// returns the common modulus |mu_i|.
inline double mu_uniformity_check(const SMatrix& s, const Tolerances& tol = {}) {
    const Eigen::MatrixXcd c = s.to_complex();
    const double rel = std::max(tol.kernel, 1e-9);
    std::optional<double> common;
    for (Eigen::Index col = 0; col < c.cols(); ++col) {
        const double mod = std::abs(c(0, col));
        for (Eigen::Index r = 0; r < c.rows(); ++r) {
            const double a = std::abs(c(r, col));
            if (a <= rel || std::abs(a - mod) > rel * std::max(1.0, mod))
                throw AlgebraError("column not of root-of-unity type: column " + std::to_string(col));
            bool unit;
            if (s.is_exact()) {
                const auto ur = static_cast<std::size_t>(r), uc = static_cast<std::size_t>(col);
                unit = detail::is_root_of_unity(s.exact()(ur, uc) / s.exact()(0, uc));
            } else {
                unit = detail::is_root_of_unity(c(r, col) / c(0, col), 1e-7);
            }
            if (!unit) throw AlgebraError("column not of root-of-unity type: column " + std::to_string(col));
        }
        if (!common) common = mod;
        else if (std::abs(*common - mod) > rel * std::max(1.0, mod)) throw AlgebraError("moduli differ: column " + std::to_string(col));
    }
    return *common;
}

} // namespace zbrng
