#pragma once

// Z-based rngs given by structure constants: b_i b_j = sum_m N_ij^m b_m.
//
// Everything here works from the integer tensor alone: recovering the identity
// e of R (x) C, the trace tau = sum_i conj(e_i) tau_i, checking the axioms,
// products and powers, closed subsets and restriction to them.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zbrng/error.hpp"
#include "zbrng/exact.hpp"
#include "zbrng/matrix.hpp"

namespace zbrng {

using Index = std::size_t;
using Permutation = std::vector<Index>;
using IndexSet = std::vector<Index>; // sorted, no duplicates

/// Dense n x n x n integer tensor N(i, j, m) = N_ij^m.
class StructureTensor {
public:
    StructureTensor() = default;
    explicit StructureTensor(std::size_t n) : n_(n), data_(n * n * n, 0) {}

    std::size_t size() const noexcept { return n_; }

    std::int64_t& operator()(Index i, Index j, Index m) { return data_[(i * n_ + j) * n_ + m]; }
    std::int64_t operator()(Index i, Index j, Index m) const { return data_[(i * n_ + j) * n_ + m]; }

    /// Row i*n + j holds the coefficients of b_i b_j.
    const std::int64_t* product(Index i, Index j) const { return data_.data() + (i * n_ + j) * n_; }

    bool all_nonnegative() const {
        return std::all_of(data_.begin(), data_.end(), [](std::int64_t v) { return v >= 0; });
    }

    friend bool operator==(const StructureTensor& a, const StructureTensor& b) { return a.n_ == b.n_ && a.data_ == b.data_; }

private:
    std::size_t n_ = 0;
    std::vector<std::int64_t> data_;
};

struct RingElement {
    std::vector<CycNum> coeffs;

    static RingElement basis(std::size_t n, Index i) {
        RingElement r{std::vector<CycNum>(n)};
        r.coeffs.at(i) = CycNum(1);
        return r;
    }

    static RingElement from_integers(const std::vector<std::int64_t>& v) {
        RingElement r;
        for (auto x : v) r.coeffs.emplace_back(static_cast<long long>(x));
        return r;
    }

    std::size_t size() const noexcept { return coeffs.size(); }
    friend bool operator==(const RingElement&, const RingElement&) = default;
};

inline bool is_permutation_of_range(const Permutation& p) {
    std::vector<bool> seen(p.size(), false);
    for (Index v : p) {
        if (v >= p.size() || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

class FusionRing {
public:
    FusionRing() = default;

    /// Validates shape, that `tilde` is a permutation and that N is commutative.
    FusionRing(StructureTensor tensor, Permutation tilde) : tensor_(std::move(tensor)), tilde_(std::move(tilde)) {
        const std::size_t n = tensor_.size();
        if (n == 0) throw InputError("ring must have a nonempty basis");
        if (tilde_.size() != n) throw InputError("involution has length " + std::to_string(tilde_.size()) + ", expected " + std::to_string(n));
        if (!is_permutation_of_range(tilde_)) throw InputError("involution is not a permutation");
        for (Index i = 0; i < n; ++i)
            for (Index j = i + 1; j < n; ++j)
                for (Index m = 0; m < n; ++m)
                    if (tensor_(i, j, m) != tensor_(j, i, m))
                        throw InputError("not commutative: N(" + std::to_string(i) + "," + std::to_string(j) + ";" + std::to_string(m) + ")");
    }

    std::size_t size() const noexcept { return tensor_.size(); }
    const StructureTensor& tensor() const noexcept { return tensor_; }
    const Permutation& tilde() const noexcept { return tilde_; }
    std::int64_t operator()(Index i, Index j, Index m) const { return tensor_(i, j, m); }

    /// Identity coefficients e_i, once computed by identity_coefficients().
    const std::optional<std::vector<CycNum>>& identity() const noexcept { return identity_; }
    void set_identity(std::vector<CycNum> e) {
        if (e.size() != size()) throw InputError("identity vector has wrong length");
        identity_ = std::move(e);
    }

private:
    StructureTensor tensor_;
    Permutation tilde_;
    std::optional<std::vector<CycNum>> identity_;
};

inline FusionRing ring_from_tensor(std::size_t n, StructureTensor tensor, Permutation tilde) {
    if (tensor.size() != n) throw InputError("tensor shape mismatch: expected " + std::to_string(n));
    return FusionRing(std::move(tensor), std::move(tilde));
}

inline Permutation identity_permutation(std::size_t n) {
    Permutation p(n);
    for (Index i = 0; i < n; ++i) p[i] = i;
    return p;
}

// ---------------------------------------------------------------------------
// Identity and trace

/// Solves sum_i e_i N_ij^m = delta_jm. The system has integer coefficients, so a
/// unique solution is rational.
inline std::vector<CycNum> solve_identity(const StructureTensor& N) {
    const std::size_t n = N.size();
    RatMatrix a(n * n, n, Rat(0));
    std::vector<Rat> b(n * n, Rat(0));
    for (Index j = 0; j < n; ++j)
        for (Index m = 0; m < n; ++m) {
            for (Index i = 0; i < n; ++i) a(j * n + m, i) = N(i, j, m);
            if (j == m) b[j * n + m] = 1;
        }
    const Solution<Rat> sol = solve(a, b);
    if (sol.status == SolveStatus::inconsistent) throw AlgebraError("no identity in R⊗ℂ");
    if (sol.status == SolveStatus::underdetermined) throw AlgebraError("identity not unique");
    std::vector<CycNum> e;
    e.reserve(n);
    for (const Rat& v : sol.x) e.emplace_back(v);
    return e;
}

/// Computes e, stores it in the ring and returns it.
inline const std::vector<CycNum>& identity_coefficients(FusionRing& R) {
    if (!R.identity()) R.set_identity(solve_identity(R.tensor()));
    return *R.identity();
}

inline CycNum trace_eval(const FusionRing& R, const RingElement& r) {
    if (!R.identity()) throw Error("eCoeffs missing; call identity_coefficients first");
    if (r.size() != R.size()) throw InputError("element has wrong length");
    const auto& e = *R.identity();
    CycNum t;
    for (Index i = 0; i < R.size(); ++i)
        if (!e[i].is_zero() && !r.coeffs[i].is_zero()) t += e[i].conj() * r.coeffs[i];
    return t;
}

inline RingElement multiply(const StructureTensor& N, const RingElement& x, const RingElement& y) {
    const std::size_t n = N.size();
    if (x.size() != n || y.size() != n) throw InputError("element has wrong length");
    RingElement out{std::vector<CycNum>(n)};
    for (Index i = 0; i < n; ++i) {
        if (x.coeffs[i].is_zero()) continue;
        for (Index j = 0; j < n; ++j) {
            if (y.coeffs[j].is_zero()) continue;
            const CycNum c = x.coeffs[i] * y.coeffs[j];
            const std::int64_t* p = N.product(i, j);
            for (Index m = 0; m < n; ++m)
                if (p[m] != 0) out.coeffs[m] += c * CycNum(static_cast<long long>(p[m]));
        }
    }
    return out;
}

inline RingElement multiply(const FusionRing& R, const RingElement& x, const RingElement& y) { return multiply(R.tensor(), x, y); }

/// Integer-coefficient product, used by the hot verification loops.
inline std::vector<std::int64_t> multiply_integral(const StructureTensor& N, const std::vector<std::int64_t>& x,
                                                   const std::vector<std::int64_t>& y) {
    const std::size_t n = N.size();
    std::vector<std::int64_t> out(n, 0);
    for (Index i = 0; i < n; ++i) {
        if (x[i] == 0) continue;
        for (Index j = 0; j < n; ++j) {
            if (y[j] == 0) continue;
            const std::int64_t c = detail::checked_mul(x[i], y[j]);
            const std::int64_t* p = N.product(i, j);
            for (Index m = 0; m < n; ++m)
                if (p[m] != 0) out[m] = detail::checked_add(out[m], detail::checked_mul(c, p[m]));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Axioms

struct AxiomCheck {
    std::string name;
    bool passed = true;
    std::vector<Index> witness; // first failing indices, empty on success
    std::string detail;
};

struct VerifyReport {
    std::vector<AxiomCheck> checks;

    bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.passed; });
    }

    const AxiomCheck& at(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return c;
        throw Error("no axiom check named " + name);
    }
};

namespace detail {

inline AxiomCheck check_commutativity(const StructureTensor& N) {
    AxiomCheck c{"commutativity", true, {}, {}};
    const std::size_t n = N.size();
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            for (Index m = 0; m < n; ++m)
                if (N(i, j, m) != N(j, i, m)) return {"commutativity", false, {i, j, m}, "N_ij^m != N_ji^m"};
    return c;
}

/// b_i (b_j b_k) == (b_i b_j) b_k, i.e. L_i L_j = sum_m N_ij^m L_m in the
/// regular representation.
inline AxiomCheck check_associativity(const StructureTensor& N) {
    const std::size_t n = N.size();
    std::vector<std::int64_t> left(n), right(n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            for (Index k = 0; k < n; ++k) {
                std::fill(left.begin(), left.end(), 0);
                std::fill(right.begin(), right.end(), 0);
                const std::int64_t* jk = N.product(j, k);
                const std::int64_t* ij = N.product(i, j);
                for (Index m = 0; m < n; ++m) {
                    if (jk[m] != 0) {
                        const std::int64_t* im = N.product(i, m);
                        for (Index l = 0; l < n; ++l) left[l] += jk[m] * im[l];
                    }
                    if (ij[m] != 0) {
                        const std::int64_t* mk = N.product(m, k);
                        for (Index l = 0; l < n; ++l) right[l] += ij[m] * mk[l];
                    }
                }
                if (left != right) return {"associativity", false, {i, j, k}, "b_i(b_j b_k) != (b_i b_j)b_k"};
            }
    return {"associativity", true, {}, {}};
}

inline AxiomCheck check_involution(const StructureTensor& N, const Permutation& t) {
    const std::size_t n = N.size();
    for (Index i = 0; i < n; ++i)
        if (t[t[i]] != i) return {"involution", false, {i}, "tilde is not an involution"};
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            for (Index m = 0; m < n; ++m)
                if (N(t[i], t[j], m) != N(i, j, t[m])) return {"involution", false, {i, j, m}, "N_{~i ~j}^m != N_ij^{~m}"};
    return {"involution", true, {}, {}};
}

inline AxiomCheck check_self_dual_identity(const std::vector<CycNum>& e, const Permutation& t) {
    for (Index i = 0; i < e.size(); ++i)
        if (!(e[i].conj() == e[t[i]])) return {"identity_self_dual", false, {i}, "conj(e_i) != e_{~i}"};
    return {"identity_self_dual", true, {}, {}};
}

inline AxiomCheck check_duality(const StructureTensor& N, const Permutation& t, const std::vector<CycNum>& e) {
    const std::size_t n = N.size();
    std::vector<CycNum> ebar(n);
    for (Index m = 0; m < n; ++m) ebar[m] = e[m].conj();
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            CycNum tau;
            const std::int64_t* p = N.product(t[i], j);
            for (Index m = 0; m < n; ++m)
                if (p[m] != 0 && !ebar[m].is_zero()) tau += ebar[m] * CycNum(static_cast<long long>(p[m]));
            if (!(tau == CycNum(i == j ? 1 : 0))) return {"duality", false, {i, j}, "tau(~b_i b_j) = " + tau.str()};
        }
    return {"duality", true, {}, {}};
}

} // namespace detail

/// Runs, in order: commutativity, associativity, involution compatibility,
/// identity existence, e~ = e, and duality tau(~b_i b_j) = delta_ij.
inline VerifyReport verify_axioms(const FusionRing& R) {
    VerifyReport report;
    const auto& N = R.tensor();
    report.checks.push_back(detail::check_commutativity(N));
    report.checks.push_back(detail::check_associativity(N));
    report.checks.push_back(detail::check_involution(N, R.tilde()));

    std::optional<std::vector<CycNum>> e = R.identity();
    AxiomCheck id{"identity", true, {}, {}};
    if (!e) {
        try {
            e = solve_identity(N);
        } catch (const AlgebraError& err) {
            id = {"identity", false, {}, err.what()};
        }
    }
    report.checks.push_back(id);
    if (e) {
        report.checks.push_back(detail::check_self_dual_identity(*e, R.tilde()));
        report.checks.push_back(detail::check_duality(N, R.tilde(), *e));
    } else {
        report.checks.push_back({"identity_self_dual", false, {}, "no identity"});
        report.checks.push_back({"duality", false, {}, "no identity"});
    }
    return report;
}

/// All involutive permutations of {0..n-1} for which every axiom holds.
/// Exhaustive, so limited to n <= 12.
inline std::vector<Permutation> admissible_involutions(const StructureTensor& N) {
    const std::size_t n = N.size();
    if (n > 12) throw InputError("involution search limited to n <= 12");
    std::vector<Permutation> found;
    if (!detail::check_commutativity(N).passed || !detail::check_associativity(N).passed) return found;
    std::vector<CycNum> e;
    try {
        e = solve_identity(N);
    } catch (const AlgebraError&) {
        return found;
    }
    Permutation p(n, n);
    auto recurse = [&](auto&& self, Index i) -> void {
        while (i < n && p[i] != n) ++i;
        if (i == n) {
            if (detail::check_involution(N, p).passed && detail::check_self_dual_identity(e, p).passed &&
                detail::check_duality(N, p, e).passed)
                found.push_back(p);
            return;
        }
        p[i] = i;
        self(self, i + 1);
        for (Index j = i + 1; j < n; ++j) {
            if (p[j] != n) continue;
            p[i] = j;
            p[j] = i;
            self(self, i + 1);
            p[j] = n;
        }
        p[i] = n;
    };
    recurse(recurse, 0);
    return found;
}

// ---------------------------------------------------------------------------
// Powers and closed subsets

/// Smallest m >= 1 with tau(b_i^m) != 0, searching m <= 2n + 2.
inline std::size_t tau_power_search(FusionRing& R, Index i) {
    const std::size_t n = R.size();
    if (i >= n) throw InputError("basis index out of range");
    identity_coefficients(R);
    const RingElement b = RingElement::basis(n, i);
    RingElement power = b;
    for (std::size_t m = 1; m <= 2 * n + 2; ++m) {
        if (!trace_eval(R, power).is_zero()) return m;
        power = multiply(R, power, b);
    }
    throw AlgebraError("bound exceeded: tau(b_" + std::to_string(i) + "^m) = 0 for all m <= " + std::to_string(2 * n + 2));
}

inline IndexSet normalize_index_set(IndexSet s, std::size_t n) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (Index v : s)
        if (v >= n) throw InputError("index " + std::to_string(v) + " out of range");
    return s;
}

/// N_ij^m = 0 for all i, j in S and m outside S.
inline bool is_closed_subset(const StructureTensor& N, const IndexSet& S) {
    const std::size_t n = N.size();
    const IndexSet s = normalize_index_set(S, n);
    if (s.empty()) throw InputError("closed-subset test needs a nonempty set");
    std::vector<bool> in(n, false);
    for (Index v : s) in[v] = true;
    for (Index i : s)
        for (Index j : s) {
            const std::int64_t* p = N.product(i, j);
            for (Index m = 0; m < n; ++m)
                if (!in[m] && p[m] != 0) return false;
        }
    return true;
}

inline bool is_closed_subset(const FusionRing& R, const IndexSet& S) { return is_closed_subset(R.tensor(), S); }

/// The rng spanned by a closed subset, basis renumbered in increasing order.
inline FusionRing subring_restrict(const FusionRing& R, const IndexSet& S) {
    const IndexSet s = normalize_index_set(S, R.size());
    if (s.empty() || !is_closed_subset(R, s)) throw AlgebraError("subset is not closed");
    std::vector<Index> pos(R.size(), R.size());
    for (Index a = 0; a < s.size(); ++a) pos[s[a]] = a;
    Permutation t(s.size());
    for (Index a = 0; a < s.size(); ++a) {
        const Index img = R.tilde()[s[a]];
        if (pos[img] == R.size()) throw AlgebraError("closed subset is not stable under the involution");
        t[a] = pos[img];
    }
    StructureTensor N(s.size());
    for (Index a = 0; a < s.size(); ++a)
        for (Index b = 0; b < s.size(); ++b)
            for (Index c = 0; c < s.size(); ++c) N(a, b, c) = R(s[a], s[b], s[c]);
    FusionRing sub(std::move(N), std::move(t));
    identity_coefficients(sub);
    return sub;
}

} // namespace zbrng
