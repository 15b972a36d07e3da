#pragma once

// The ring of a Hadamard matrix and the invariants computed from it.
//
// For a normalized Hadamard matrix s of order 4k (first column all +1) the
// columns of k*s span a ring with N_ij^m = (1/4) sum_l s_li s_lj s_lm. Indices
// are 0-based throughout; the all-ones column is column 0.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "zbrng/error.hpp"
#include "zbrng/matrix.hpp"
#include "zbrng/prime_field.hpp"
#include "zbrng/rng_core.hpp"
#include "zbrng/splitting.hpp"

namespace zbrng {

class HadamardMatrix {
public:
    HadamardMatrix() = default;

    /// Validates entries, orthogonality and the normalized first column.
    explicit HadamardMatrix(IntMatrix m) : m_(std::move(m)) {
        validate_sign_orthogonal(m_);
        for (std::size_t r = 0; r < m_.rows(); ++r)
            if (m_(r, 0) != 1) throw InputError("not normalized: first column has -1 in row " + std::to_string(r));
    }

    std::size_t order() const noexcept { return m_.rows(); }
    std::size_t k() const noexcept { return m_.rows() / 4; }
    int operator()(std::size_t r, std::size_t c) const { return static_cast<int>(m_(r, c)); }
    const IntMatrix& matrix() const noexcept { return m_; }

    friend bool operator==(const HadamardMatrix& a, const HadamardMatrix& b) { return a.m_ == b.m_; }

    /// Throws InputError unless m is a square +-1 matrix with m m^T = n I and n
    /// divisible by 4 (n > 2).
    static void validate_sign_orthogonal(const IntMatrix& m) {
        const std::size_t n = m.rows();
        if (n == 0 || m.cols() != n) throw InputError("Hadamard matrix must be square and nonempty");
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                if (m(r, c) != 1 && m(r, c) != -1) throw InputError("entry (" + std::to_string(r) + "," + std::to_string(c) + ") is not +-1");
        if (n > 2 && n % 4 != 0) throw InputError("order " + std::to_string(n) + " is not divisible by 4");
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) {
                std::int64_t dot = 0;
                for (std::size_t c = 0; c < n; ++c) dot += m(a, c) * m(b, c);
                if (dot != 0) throw InputError("rows " + std::to_string(a) + " and " + std::to_string(b) + " are not orthogonal");
            }
    }

private:
    IntMatrix m_;
};

/// Negates the rows with -1 in `column` so that column becomes all +1. With the
/// default column 0 the column order is preserved; any other column is swapped
/// into position 0.
inline HadamardMatrix normalize_hadamard(const IntMatrix& m, std::size_t column = 0) {
    HadamardMatrix::validate_sign_orthogonal(m);
    if (column >= m.cols()) throw InputError("normalizing column out of range");
    IntMatrix out = m;
    for (std::size_t r = 0; r < out.rows(); ++r)
        if (out(r, column) == -1)
            for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) = -out(r, c);
    if (column != 0)
        for (std::size_t r = 0; r < out.rows(); ++r) std::swap(out(r, 0), out(r, column));
    return HadamardMatrix(std::move(out));
}

/// Same rows in sorted (lexicographically decreasing) order; the canonical
/// representative for comparisons up to row permutation.
inline IntMatrix sorted_rows(const IntMatrix& m) {
    auto rows = m.to_rows();
    std::sort(rows.begin(), rows.end(), std::greater<>());
    return IntMatrix::from_rows(rows);
}

// ---------------------------------------------------------------------------
// Ring

inline StructureTensor hadamard_tensor(const HadamardMatrix& h) {
    const std::size_t n = h.order();
    StructureTensor N(n);
    for (Index i = 0; i < n; ++i)
        for (Index j = i; j < n; ++j)
            for (Index m = 0; m < n; ++m) {
                std::int64_t sum = 0;
                for (Index l = 0; l < n; ++l) sum += h(l, i) * h(l, j) * h(l, m);
                if (sum % 4 != 0) throw AlgebraError("non-integral structure constant at (" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(m) + ")");
                N(i, j, m) = N(j, i, m) = sum / 4;
            }
    return N;
}

/// Ring spanned by the columns of k*s; trivial involution, e = (1/k) b_0.
inline FusionRing ring_from_hadamard(const HadamardMatrix& h) {
    FusionRing R(hadamard_tensor(h), identity_permutation(h.order()));
    identity_coefficients(R);
    return R;
}

/// k read off b_1^2 = k b_0 (or b_0^2 = k b_0 for order 1).
inline std::int64_t ring_k(const FusionRing& R) {
    return R(R.size() > 1 ? 1 : 0, R.size() > 1 ? 1 : 0, 0);
}

// ---------------------------------------------------------------------------
// xi-sets

inline std::vector<IndexSet> xi_sets(const HadamardMatrix& h) {
    std::vector<IndexSet> xi(h.order());
    for (Index i = 0; i < h.order(); ++i)
        for (Index j = 0; j < h.order(); ++j)
            if (h(j, i) == -1) xi[i].push_back(j);
    return xi;
}

inline std::size_t intersection_size(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out.size();
}

inline IndexSet set_intersection_of(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline IndexSet symmetric_difference_of(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

/// |xi_0| = 0 and |xi_i| = |xi_i D xi_j| = 2 |xi_i n xi_j| = 2k for distinct nonzero i, j.
inline bool xi_pair_lemma_holds(const HadamardMatrix& h) {
    const auto xi = xi_sets(h);
    const std::size_t k = h.k();
    if (!xi[0].empty()) return false;
    for (Index i = 1; i < h.order(); ++i) {
        if (xi[i].size() != 2 * k) return false;
        for (Index j = i + 1; j < h.order(); ++j) {
            if (intersection_size(xi[i], xi[j]) != k) return false;
            if (symmetric_difference_of(xi[i], xi[j]).size() != 2 * k) return false;
        }
    }
    return true;
}

/// For |{0,i,j,m}| = 4: |xi_i D xi_j D xi_m| = 4 |xi_i n xi_j n xi_m|,
/// |xi_i n xi_j n xi_m| = |xi_i \ (xi_j u xi_m)|, and
/// N_ij^m = k - (1/2)|xi_i D xi_j D xi_m| = k - 2 |xi_i n xi_j n xi_m|.
inline bool xi_tensor_agreement(const HadamardMatrix& h, const StructureTensor& N) {
    const auto xi = xi_sets(h);
    const auto k = static_cast<std::int64_t>(h.k());
    const std::size_t n = h.order();
    for (Index i = 1; i < n; ++i)
        for (Index j = 1; j < n; ++j)
            for (Index m = 1; m < n; ++m) {
                if (i == j || j == m || i == m) continue;
                const auto triple = static_cast<std::int64_t>(set_intersection_of(set_intersection_of(xi[i], xi[j]), xi[m]).size());
                const auto delta = static_cast<std::int64_t>(symmetric_difference_of(symmetric_difference_of(xi[i], xi[j]), xi[m]).size());
                IndexSet uni;
                std::set_union(xi[j].begin(), xi[j].end(), xi[m].begin(), xi[m].end(), std::back_inserter(uni));
                IndexSet diff;
                std::set_difference(xi[i].begin(), xi[i].end(), uni.begin(), uni.end(), std::back_inserter(diff));
                if (delta != 4 * triple || static_cast<std::int64_t>(diff.size()) != triple) return false;
                if (2 * N(i, j, m) != 2 * k - delta || N(i, j, m) != k - 2 * triple) return false;
            }
    return true;
}

/// Odd k > 1: N_ij^m odd and in {-k+2, ..., k-2} whenever |{0,i,j,m}| = 4.
/// (k = 1 is the Klein group ring, where b_1 b_2 = b_3.)
inline bool odd_k_parity_holds(const StructureTensor& N, std::int64_t k) {
    if (k % 2 == 0 || k < 3) throw InputError("parity check needs odd k >= 3");
    const std::size_t n = N.size();
    for (Index i = 1; i < n; ++i)
        for (Index j = 1; j < n; ++j)
            for (Index m = 1; m < n; ++m) {
                if (i == j || j == m || i == m) continue;
                const std::int64_t v = N(i, j, m);
                if (v % 2 == 0 || v < -k + 2 || v > k - 2) return false;
            }
    return true;
}

/// No b_i b_j = k b_l with i, j, l all nonzero; holds for odd k.
inline bool no_klein_subring(const StructureTensor& N, std::int64_t k) {
    const std::size_t n = N.size();
    for (Index i = 1; i < n; ++i)
        for (Index j = 1; j < n; ++j)
            for (Index l = 1; l < n; ++l) {
                bool single = true;
                for (Index m = 0; m < n && single; ++m) single = N(i, j, m) == (m == l ? k : 0);
                if (single) return false;
            }
    return true;
}

// ---------------------------------------------------------------------------
// Profile and census

using Profile = std::map<std::int64_t, std::uint64_t>;

/// p_{ijlm} = |sum_q s_qi s_qj s_ql s_qm| tallied over all 4-subsets of columns.
/// Every value must be congruent to 4k mod 8.
inline Profile profile(const HadamardMatrix& h) {
    const std::size_t n = h.order();
    const auto k4 = static_cast<std::int64_t>(4 * h.k());
    Profile p;
    std::vector<int> ij(n), ijl(n);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) {
            for (Index q = 0; q < n; ++q) ij[q] = h(q, i) * h(q, j);
            for (Index l = j + 1; l < n; ++l) {
                for (Index q = 0; q < n; ++q) ijl[q] = ij[q] * h(q, l);
                for (Index m = l + 1; m < n; ++m) {
                    std::int64_t sum = 0;
                    for (Index q = 0; q < n; ++q) sum += ijl[q] * h(q, m);
                    sum = sum < 0 ? -sum : sum;
                    if (((sum - k4) % 8 + 8) % 8 != 0)
                        throw AlgebraError("profile congruence violated at columns {" + std::to_string(i) + "," + std::to_string(j) + "," +
                                           std::to_string(l) + "," + std::to_string(m) + "}");
                    ++p[sum];
                }
            }
        }
    return p;
}

/// sum_m (N_ij^m)^2 = k^2.
inline bool sum_squares_check(const FusionRing& R, Index i, Index j) {
    const std::int64_t k = ring_k(R);
    std::int64_t sum = 0;
    for (Index m = 0; m < R.size(); ++m) sum += R(i, j, m) * R(i, j, m);
    return sum == k * k;
}

/// Partitions of the ((k-3)/2)-th triangular number into nonzero triangular numbers.
inline std::uint64_t triangular_bound(std::int64_t k) {
    if (k % 2 == 0) throw InputError("triangular bound needs odd k");
    if (k < 3) throw InputError("triangular bound needs k >= 3");
    const std::int64_t r = (k - 3) / 2;
    const auto target = static_cast<std::size_t>(r * (r + 1) / 2);
    std::vector<std::uint64_t> ways(target + 1, 0);
    ways[0] = 1;
    for (std::size_t t = 1, tri = 1; tri <= target; ++t, tri = t * (t + 1) / 2)
        for (std::size_t v = tri; v <= target; ++v) ways[v] += ways[v - tri];
    return ways[target];
}

/// Multiset of |N_ij^m|, m outside {0,i,j}, as (value -> multiplicity).
using AbsMultiset = std::map<std::int64_t, std::size_t>;

/// Distinct multisets over all pairs with |{0,i,j}| = 3, with the number of
/// unordered pairs producing each.
inline std::map<AbsMultiset, std::size_t> multiset_census(const FusionRing& R) {
    const std::size_t n = R.size();
    std::map<AbsMultiset, std::size_t> census;
    for (Index i = 1; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) {
            AbsMultiset ms;
            for (Index m = 1; m < n; ++m) {
                if (m == i || m == j) continue;
                const std::int64_t v = R(i, j, m);
                ++ms[v < 0 ? -v : v];
            }
            ++census[ms];
        }
    return census;
}

/// The closed subsets for odd k: {0, i} for every i (i = 0 gives {0}) and the
/// full basis. Each is re-verified, and no {0, i, j} with distinct nonzero i, j
/// may be closed.
inline std::vector<IndexSet> had_closed_subsets(const FusionRing& R) {
    const std::int64_t k = ring_k(R);
    if (k % 2 == 0) throw InputError("closed-subset classification needs odd k");
    const std::size_t n = R.size();
    std::vector<IndexSet> out;
    for (Index i = 0; i < n; ++i) out.push_back(i == 0 ? IndexSet{0} : IndexSet{0, i});
    out.push_back(identity_permutation(n));
    for (const auto& s : out)
        if (!is_closed_subset(R, s)) throw AlgebraError("verification failure: expected closed subset is not closed");
    for (Index i = 1; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            if (n > 3 && is_closed_subset(R, {0, i, j})) throw AlgebraError("verification failure: {0," + std::to_string(i) + "," + std::to_string(j) + "} is closed");
    return out;
}

// ---------------------------------------------------------------------------
// W-matrices

/// N^_i: the matrix (N_ij^m)_{j,m} with rows and columns 0 and i removed.
inline IntMatrix n_hat(const FusionRing& R, Index i) {
    const std::size_t n = R.size();
    if (i == 0 || i >= n) throw InputError("n_hat needs 0 < i < n");
    std::vector<Index> keep;
    for (Index t = 1; t < n; ++t)
        if (t != i) keep.push_back(t);
    IntMatrix out(keep.size(), keep.size(), 0);
    for (Index a = 0; a < keep.size(); ++a)
        for (Index b = 0; b < keep.size(); ++b) out(a, b) = R(i, keep[a], keep[b]);
    return out;
}

/// W_i = [[N^+I, N^-I], [N^-I, -N^-I]], of size 8k-4, with W W^T = (2k^2+2) I
/// and no zero entries.
inline IntMatrix wmatrix(const FusionRing& R, Index i) {
    const IntMatrix nh = n_hat(R, i);
    const std::size_t d = nh.rows();
    const std::int64_t k = ring_k(R);
    IntMatrix w(2 * d, 2 * d, 0);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            const std::int64_t id = a == b ? 1 : 0;
            w(a, b) = nh(a, b) + id;
            w(a, d + b) = nh(a, b) - id;
            w(d + a, b) = nh(a, b) - id;
            w(d + a, d + b) = -nh(a, b) - id;
        }
    const IntMatrix gram = w * w.transpose();
    const std::int64_t c = 2 * k * k + 2;
    for (std::size_t a = 0; a < 2 * d; ++a)
        for (std::size_t b = 0; b < 2 * d; ++b) {
            if (gram(a, b) != (a == b ? c : 0)) throw AlgebraError("orthogonality failure in W_" + std::to_string(i));
            if (w(a, b) == 0) throw AlgebraError("zero entry in W_" + std::to_string(i));
        }
    return w;
}

// ---------------------------------------------------------------------------
// Reconstruction

namespace detail {

inline void require_hadamard_shape(const StructureTensor& N, std::int64_t k) {
    const std::size_t n = N.size();
    if (k <= 0 || n != static_cast<std::size_t>(4 * k)) throw InputError("tensor size must be 4k");
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (N(i, i, j) != (j == 0 ? k : 0)) throw InputError("tensor does not satisfy N_ii^j = k delta_0j");
}

} // namespace detail

/// Recovers the Hadamard matrix from its ring by exact common-eigenspace
/// splitting over Q with eigenvalues +-k. Rows come back sorted.
inline HadamardMatrix reconstruct_exact(const FusionRing& R, std::int64_t k) {
    const auto& N = R.tensor();
    detail::require_hadamard_shape(N, k);
    if (R.tilde() != identity_permutation(R.size())) throw InputError("reconstruction needs the trivial involution");
    const std::size_t n = N.size();
    std::vector<RatMatrix> ops(n, RatMatrix(n, n, Rat(0)));
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            for (Index m = 0; m < n; ++m) ops[i](j, m) = N(i, j, m);
    const auto rows = split_exact<Rat>(ops, [k](std::size_t) { return std::vector<Rat>{Rat(k), Rat(-k)}; });
    IntMatrix out(n, n, 0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            const Rat v = rows[r][c] / k;
            if (v != 1 && v != -1) throw AlgebraError("splitting stalls: eigenvalue " + to_string(rows[r][c]) + " is not +-k");
            out(r, c) = v == 1 ? 1 : -1;
        }
    return HadamardMatrix(sorted_rows(out));
}

using F3Matrix = Matrix<F3>;

/// Tensor reduced mod 3.
inline std::vector<F3Matrix> reduce_mod3(const StructureTensor& N) {
    const std::size_t n = N.size();
    std::vector<F3Matrix> ops(n, F3Matrix(n, n, F3(0)));
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            for (Index m = 0; m < n; ++m) ops[i](j, m) = F3(N(i, j, m));
    return ops;
}

/// Same splitting over F3, where N_i^2 = I and the eigenvalues are +-1.
/// Requires k = 1 mod 3 so that +-k = +-1. Rows are sorted by centered value.
inline F3Matrix reconstruct_mod3(const std::vector<F3Matrix>& ops, std::int64_t k) {
    if (k % 3 != 1) throw InputError("mod-3 reconstruction needs k = 1 (mod 3)");
    const std::size_t n = ops.size();
    if (n != static_cast<std::size_t>(4 * k)) throw InputError("tensor size must be 4k");
    for (const auto& a : ops)
        if (a.rows() != n || a.cols() != n) throw InputError("operator has wrong shape");
    const auto rows = split_exact<F3>(ops, [](std::size_t) { return std::vector<F3>{F3(1), F3(-1)}; });
    std::vector<std::vector<int>> centered;
    for (const auto& r : rows) {
        std::vector<int> c;
        for (F3 v : r) {
            if (is_zero(v)) throw AlgebraError("splitting stalls: zero eigenvalue mod 3");
            c.push_back(v.centered());
        }
        centered.push_back(std::move(c));
    }
    std::sort(centered.begin(), centered.end(), std::greater<>());
    F3Matrix out(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out(r, c) = F3(centered[r][c]);
    return out;
}

/// H mod 3 with rows in the same canonical order as reconstruct_mod3.
inline F3Matrix hadamard_mod3(const HadamardMatrix& h) {
    const IntMatrix s = sorted_rows(h.matrix());
    return s.map([](std::int64_t v) { return F3(v); });
}

// ---------------------------------------------------------------------------
// F2 algebra, v-matrix

/// Table t[i][j][m] of a 4k-dimensional F2 algebra.
using F2Table = std::vector<std::vector<std::vector<std::uint8_t>>>;

/// N_ij^0 = N_0i^j = N_i0^j = delta_ij and N_ij^m = 1 for |{0,i,j,m}| = 4.
inline F2Table f2_table(std::int64_t k) {
    if (k < 1) throw InputError("k must be positive");
    const auto n = static_cast<std::size_t>(4 * k);
    F2Table t(n, std::vector<std::vector<std::uint8_t>>(n, std::vector<std::uint8_t>(n, 0)));
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            for (Index m = 0; m < n; ++m) {
                if (m == 0) t[i][j][m] = i == j;
                else if (i == 0) t[i][j][m] = j == m;
                else if (j == 0) t[i][j][m] = i == m;
                else t[i][j][m] = (i != j && j != m && i != m);
            }
    return t;
}

inline bool f2_commutative_associative(const F2Table& t) {
    const std::size_t n = t.size();
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (t[i][j] != t[j][i]) return false;
    std::vector<std::uint8_t> left(n), right(n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            for (Index k = 0; k < n; ++k) {
                std::fill(left.begin(), left.end(), 0);
                std::fill(right.begin(), right.end(), 0);
                for (Index m = 0; m < n; ++m) {
                    if (t[j][k][m])
                        for (Index l = 0; l < n; ++l) left[l] ^= t[i][m][l];
                    if (t[i][j][m])
                        for (Index l = 0; l < n; ++l) right[l] ^= t[m][k][l];
                }
                if (left != right) return false;
            }
    return true;
}

inline bool f2_algebra_check(std::int64_t k) { return f2_commutative_associative(f2_table(k)); }

/// Rank over F2 of v_ij = (1 - s_ij) / 2; at most 4k - 2.
inline std::size_t v_rank(const HadamardMatrix& h) {
    const Matrix<F2> v = h.matrix().map([](std::int64_t x) { return F2(x == -1 ? 1 : 0); });
    const std::size_t r = rank(v);
    if (h.order() >= 4 && r > h.order() - 2) throw AlgebraError("v-matrix rank exceeds 4k-2");
    return r;
}

// ---------------------------------------------------------------------------
// Equivalence screen

struct HadamardInvariants {
    Profile profile;
    std::vector<std::map<AbsMultiset, std::size_t>> census;    // one per normalizing column, sorted
    std::vector<std::vector<std::int64_t>> abs_row_sums;       // one per normalizing column, sorted

    friend bool operator==(const HadamardInvariants&, const HadamardInvariants&) = default;
};

/// Invariants under row/column permutations and sign changes. The ring depends
/// on the column chosen to be all +1, so census and |N| row sums are collected
/// for every choice and sorted.
inline HadamardInvariants hadamard_invariants(const HadamardMatrix& h) {
    HadamardInvariants inv;
    inv.profile = profile(h);
    for (Index c = 0; c < h.order(); ++c) {
        const FusionRing R(hadamard_tensor(normalize_hadamard(h.matrix(), c)), identity_permutation(h.order()));
        inv.census.push_back(multiset_census(R));
        std::vector<std::int64_t> sums;
        for (Index i = 0; i < R.size(); ++i) {
            std::int64_t s = 0;
            for (Index j = 0; j < R.size(); ++j)
                for (Index m = 0; m < R.size(); ++m) s += R(i, j, m) < 0 ? -R(i, j, m) : R(i, j, m);
            sums.push_back(s);
        }
        std::sort(sums.begin(), sums.end());
        inv.abs_row_sums.push_back(std::move(sums));
    }
    std::sort(inv.census.begin(), inv.census.end());
    std::sort(inv.abs_row_sums.begin(), inv.abs_row_sums.end());
    return inv;
}

enum class EquivVerdict { inequivalent, indistinguishable };

inline const char* to_string(EquivVerdict v) { return v == EquivVerdict::inequivalent ? "inequivalent" : "indistinguishable"; }

/// A mismatch in any invariant proves inequivalence; a match proves nothing.
inline EquivVerdict equiv_screen(const HadamardMatrix& a, const HadamardMatrix& b) {
    if (a.order() != b.order()) throw InputError("order mismatch");
    if (profile(a) != profile(b)) return EquivVerdict::inequivalent;
    return hadamard_invariants(a) == hadamard_invariants(b) ? EquivVerdict::indistinguishable : EquivVerdict::inequivalent;
}

} // namespace zbrng
