#pragma once

// Pointed Z-algebras and factor rings: the quotient by <1 - d> for a basis
// element d of order 2, and the lift of a rng to a pointed algebra with
// nonnegative structure constants built from the column semigroup of s.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "zbrng/error.hpp"
#include "zbrng/exact.hpp"
#include "zbrng/rng_core.hpp"
#include "zbrng/spectra.hpp"

namespace zbrng {

/// Commutative, associative algebra free over Z with a distinguished basis.
/// Products are stored sparsely so rank in the thousands stays cheap.
class PointedAlgebra {
public:
    using Term = std::pair<Index, std::int64_t>;

    PointedAlgebra() = default;
    explicit PointedAlgebra(std::size_t m, std::vector<std::string> labels = {})
        : m_(m), offsets_(m * m + 1, 0), labels_(std::move(labels)) {
        if (labels_.empty())
            for (std::size_t i = 0; i < m; ++i) labels_.push_back(std::to_string(i));
        if (labels_.size() != m) throw InputError("label count does not match basis size");
    }

    static PointedAlgebra from_tensor(const StructureTensor& N, std::vector<std::string> labels = {}) {
        const std::size_t m = N.size();
        std::vector<std::vector<Term>> products(m * m);
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < m; ++j)
                for (Index k = 0; k < m; ++k)
                    if (N(i, j, k) != 0) products[i * m + j].emplace_back(k, N(i, j, k));
        return from_products(m, products, std::move(labels));
    }

    /// products[i * m + j] lists the nonzero terms of x_i x_j.
    static PointedAlgebra from_products(std::size_t m, const std::vector<std::vector<Term>>& products,
                                        std::vector<std::string> labels = {}) {
        if (products.size() != m * m) throw InputError("product table has wrong size");
        PointedAlgebra a(m, std::move(labels));
        for (std::size_t p = 0; p < m * m; ++p) {
            auto terms = products[p];
            std::sort(terms.begin(), terms.end());
            for (const Term& t : terms) {
                if (t.first >= m) throw InputError("product term index out of range");
                if (t.second != 0) a.terms_.push_back(t);
            }
            a.offsets_[p + 1] = a.terms_.size();
        }
        return a;
    }

    std::size_t size() const noexcept { return m_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    std::span<const Term> product(Index i, Index j) const {
        const std::size_t p = i * m_ + j;
        return {terms_.data() + offsets_[p], offsets_[p + 1] - offsets_[p]};
    }

    std::int64_t coefficient(Index i, Index j, Index k) const {
        for (const Term& t : product(i, j))
            if (t.first == k) return t.second;
        return 0;
    }

    bool all_nonnegative() const {
        return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.second >= 0; });
    }

    bool is_commutative() const {
        for (Index i = 0; i < m_; ++i)
            for (Index j = i + 1; j < m_; ++j) {
                const auto a = product(i, j), b = product(j, i);
                if (!std::equal(a.begin(), a.end(), b.begin(), b.end())) return false;
            }
        return true;
    }

    bool is_associative() const {
        std::vector<std::int64_t> left(m_), right(m_);
        for (Index i = 0; i < m_; ++i)
            for (Index j = 0; j < m_; ++j)
                for (Index k = 0; k < m_; ++k) {
                    std::fill(left.begin(), left.end(), 0);
                    std::fill(right.begin(), right.end(), 0);
                    for (const Term& t : product(j, k))
                        for (const Term& u : product(i, t.first))
                            left[u.first] = detail::checked_add(left[u.first], detail::checked_mul(t.second, u.second));
                    for (const Term& t : product(i, j))
                        for (const Term& u : product(t.first, k))
                            right[u.first] = detail::checked_add(right[u.first], detail::checked_mul(t.second, u.second));
                    if (left != right) return false;
                }
        return true;
    }

    /// Dense tensor; only sensible for small rank.
    StructureTensor to_tensor() const {
        StructureTensor N(m_);
        for (Index i = 0; i < m_; ++i)
            for (Index j = 0; j < m_; ++j)
                for (const Term& t : product(i, j)) N(i, j, t.first) = t.second;
        return N;
    }

private:
    std::size_t m_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<Term> terms_;
    std::vector<std::string> labels_;
};

// ---------------------------------------------------------------------------
// Quotient by <1 - d>

struct Order2Quotient {
    PointedAlgebra algebra;
    std::vector<Index> representatives; // smallest index of each class, increasing
    std::vector<Index> class_of;        // basis index of R -> quotient basis index
    std::vector<Index> partner;         // i -> index of b_d b_i
};

/// Requires b_d^2 = e (the identity of R (x) C) and b_d b_i = b_{p(i)} for a
/// permutation p. Classes {b_i, b_d b_i} become the quotient basis and
/// N~_ij^K = sum over members k of class K of N_ij^k.
inline Order2Quotient order2_quotient(FusionRing& R, Index d) {
    const std::size_t n = R.size();
    if (d >= n) throw InputError("basis index out of range");
    const auto& e = identity_coefficients(R);
    const auto& N = R.tensor();
    for (Index m = 0; m < n; ++m)
        if (!(CycNum(static_cast<long long>(N(d, d, m))) == e[m])) throw AlgebraError("d not of order 2: b_d^2 != 1");

    std::vector<Index> partner(n, n);
    for (Index i = 0; i < n; ++i) {
        const std::int64_t* p = N.product(d, i);
        for (Index m = 0; m < n; ++m) {
            if (p[m] == 0) continue;
            if (p[m] != 1 || partner[i] != n) throw AlgebraError("d does not permute the basis: b_d b_" + std::to_string(i) + " is not a basis element");
            partner[i] = m;
        }
        if (partner[i] == n) throw AlgebraError("d does not permute the basis: b_d b_" + std::to_string(i) + " = 0");
    }
    if (!is_permutation_of_range(partner)) throw AlgebraError("d does not permute the basis");

    Order2Quotient q;
    q.partner = partner;
    q.class_of.assign(n, n);
    for (Index i = 0; i < n; ++i) {
        if (q.class_of[i] != n) continue;
        q.class_of[i] = q.class_of[partner[i]] = q.representatives.size();
        q.representatives.push_back(i);
    }
    const std::size_t r = q.representatives.size();
    std::vector<std::vector<PointedAlgebra::Term>> products(r * r);
    std::vector<std::string> labels;
    for (Index a = 0; a < r; ++a) labels.push_back(std::to_string(q.representatives[a]));
    for (Index a = 0; a < r; ++a)
        for (Index b = 0; b < r; ++b) {
            std::vector<std::int64_t> coeff(r, 0);
            const std::int64_t* p = N.product(q.representatives[a], q.representatives[b]);
            for (Index m = 0; m < n; ++m) coeff[q.class_of[m]] = detail::checked_add(coeff[q.class_of[m]], p[m]);
            for (Index c = 0; c < r; ++c)
                if (coeff[c] != 0) products[a * r + b].emplace_back(c, coeff[c]);
        }
    q.algebra = PointedAlgebra::from_products(r, products, std::move(labels));
    return q;
}

// ---------------------------------------------------------------------------
// Nonnegative lift

/// A pointed algebra together with an embedding of its basis into R: the basis
/// element x_w maps to sum_i mu_{w,i} b_i. The ideal generators are
/// x_w - sum_i mu_{w,i} x_{distinguished[i]}.
struct LiftPresentation {
    PointedAlgebra lifted;
    std::vector<std::vector<std::int64_t>> embedding; // per lifted basis element, coefficients over R's basis
    std::vector<Index> distinguished;                 // distinguished[i] = lifted index mapping to b_i
    std::vector<BigInt> scale;                        // x_w = scale[w] * (root-of-unity pattern w)
    std::vector<std::size_t> word_length;             // shortest word in the column generators
    std::size_t relaxation_passes = 0;
    bool iteration_cap_hit = false;
};

namespace detail {

/// Exponent pattern of a vector of roots of unity and zeros; -1 marks a zero.
using Pattern = std::vector<int>;

struct PatternHash {
    std::size_t operator()(const Pattern& p) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (int v : p) h = (h ^ static_cast<std::size_t>(v + 1)) * 1099511628211ull;
        return h;
    }
};

/// Writes x = r * zeta_q^t with rational r > 0, if possible.
inline std::optional<std::pair<Rat, int>> polar_rational(const CycNum& x, int q) {
    for (int t = 0; t < q; ++t) {
        const CycNum y = x * CycNum::zeta(q, q - t);
        if (y.is_rational() && y.to_rational() > 0) return std::make_pair(y.to_rational(), t);
    }
    return std::nullopt;
}

} // namespace detail

/// Builds the semigroup H generated by the root-of-unity parts v_i of the
/// columns s_i = mu_i v_i (mu_i positive integers), and for every h in H the
/// smallest positive multiple g(h) h reachable as a gcd of column products.
/// The lifted algebra has basis {x_h} with x_h x_h' = (g(h) g(h') / g(hh')) x_{hh'}.
inline LiftPresentation fannsc_lift(const SMatrix& s, std::size_t cap = 4096) {
    detail::require_square(s);
    if (!s.is_exact()) throw InputError("lift needs an exact s-matrix");
    const CycMatrix& m = s.exact();
    const std::size_t n = m.rows();
    int q = 2;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) q = detail::lcm_order(q, m(r, c).order());

    std::vector<detail::Pattern> gens(n, detail::Pattern(n));
    std::vector<BigInt> mu(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::optional<Rat> modulus;
        for (std::size_t r = 0; r < n; ++r) {
            if (m(r, c).is_zero()) {
                gens[c][r] = -1;
                continue;
            }
            const auto polar = detail::polar_rational(m(r, c), q);
            if (!polar) throw AlgebraError("column not of root-of-unity type: column " + std::to_string(c));
            if (modulus && *modulus != polar->first) throw AlgebraError("column " + std::to_string(c) + " is not an integer times roots of unity");
            modulus = polar->first;
            gens[c][r] = polar->second;
        }
        if (!modulus || !is_integer(*modulus)) throw AlgebraError("column " + std::to_string(c) + " is not an integer times roots of unity");
        mu[c] = boost::multiprecision::numerator(*modulus);
    }

    auto times = [&](const detail::Pattern& a, const detail::Pattern& b) {
        detail::Pattern out(n);
        for (std::size_t r = 0; r < n; ++r) out[r] = (a[r] < 0 || b[r] < 0) ? -1 : (a[r] + b[r]) % q;
        return out;
    };

    // Breadth-first enumeration of H gives word lengths and a first bound for g.
    std::vector<detail::Pattern> elems;
    std::vector<std::size_t> dist;
    std::vector<BigInt> g;
    std::unordered_map<detail::Pattern, Index, detail::PatternHash> index;
    auto add = [&](const detail::Pattern& p, std::size_t d, const BigInt& scale) -> Index {
        auto [it, fresh] = index.emplace(p, elems.size());
        if (fresh) {
            if (elems.size() >= cap) throw AlgebraError("semigroup exceeds cap of " + std::to_string(cap) + " elements");
            elems.push_back(p);
            dist.push_back(d);
            g.push_back(scale);
        }
        return it->second;
    };
    std::vector<Index> gen_index(n);
    for (std::size_t c = 0; c < n; ++c) gen_index[c] = add(gens[c], 1, mu[c]);
    for (std::size_t c = 0; c < n; ++c) g[gen_index[c]] = boost::multiprecision::gcd(g[gen_index[c]], mu[c]);
    for (std::size_t head = 0; head < elems.size(); ++head)
        for (std::size_t c = 0; c < n; ++c) add(times(elems[head], gens[c]), dist[head] + 1, g[head] * mu[c]);

    const std::size_t h_size = elems.size();
    std::vector<std::vector<Index>> succ(h_size, std::vector<Index>(n));
    for (Index h = 0; h < h_size; ++h)
        for (std::size_t c = 0; c < n; ++c) succ[h][c] = index.at(times(elems[h], gens[c]));

    // g(h v_c) | g(h) mu_c, iterated to the fixed point: g(h) becomes the gcd
    // over all words for h of the product of their mu's.
    LiftPresentation out;
    const std::size_t max_passes = 4 * h_size + 16;
    bool changed = true;
    while (changed) {
        if (out.relaxation_passes == max_passes) {
            out.iteration_cap_hit = true;
            throw AlgebraError("gcd closure did not stabilize within " + std::to_string(max_passes) + " passes");
        }
        ++out.relaxation_passes;
        changed = false;
        for (Index h = 0; h < h_size; ++h)
            for (std::size_t c = 0; c < n; ++c) {
                const Index t = succ[h][c];
                const BigInt cand = boost::multiprecision::gcd(g[t], g[h] * mu[c]);
                if (cand != g[t]) {
                    g[t] = cand;
                    changed = true;
                }
            }
    }

    // Product closure: g(hh') must divide g(h) g(h'); holds by construction,
    // verified here over all pairs.
    std::vector<std::vector<PointedAlgebra::Term>> products(h_size * h_size);
    for (Index a = 0; a < h_size; ++a)
        for (Index b = 0; b < h_size; ++b) {
            const Index c = index.at(times(elems[a], elems[b]));
            const BigInt prod = g[a] * g[b];
            if (prod % g[c] != 0) throw AlgebraError("product closure violated for lifted elements " + std::to_string(a) + ", " + std::to_string(b));
            const BigInt coeff = prod / g[c];
            if (coeff > std::numeric_limits<std::int64_t>::max()) throw AlgebraError("lifted structure constant exceeds 64 bits");
            products[a * h_size + b].emplace_back(c, static_cast<std::int64_t>(coeff));
        }

    // Decompose every g(h) h over the columns; coefficients must be integers.
    const CycMatrix inv = exact_inverse(m);
    std::vector<CycNum> roots(static_cast<std::size_t>(q));
    for (int t = 0; t < q; ++t) roots[static_cast<std::size_t>(t)] = CycNum::zeta(q, t);
    out.embedding.resize(h_size);
    for (Index h = 0; h < h_size; ++h) {
        std::vector<CycNum> vec(n);
        for (std::size_t r = 0; r < n; ++r)
            if (elems[h][r] >= 0) vec[r] = CycNum(Rat(g[h])) * roots[static_cast<std::size_t>(elems[h][r])];
        out.embedding[h].resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            CycNum acc;
            for (std::size_t r = 0; r < n; ++r)
                if (!vec[r].is_zero() && !inv(i, r).is_zero()) acc += inv(i, r) * vec[r];
            if (!acc.is_rational() || !is_integer(acc.to_rational()))
                throw AlgebraError("non-integral decomposition of lifted element " + std::to_string(h));
            out.embedding[h][i] = detail::rat_to_int64(acc.to_rational(), h, i, 0);
        }
    }

    std::vector<std::string> labels(h_size);
    for (Index h = 0; h < h_size; ++h) {
        std::string label = g[h].str() + "*[";
        for (std::size_t r = 0; r < n; ++r) label += (r ? "," : "") + (elems[h][r] < 0 ? std::string("0") : std::to_string(elems[h][r]));
        labels[h] = label + "]";
    }
    out.lifted = PointedAlgebra::from_products(h_size, products, std::move(labels));
    out.distinguished = gen_index;
    out.scale = g;
    out.word_length = dist;
    return out;
}

/// Checks that the embedding is multiplicative on every pair of lifted basis
/// elements and that the distinguished elements map onto the basis of R, which
/// certifies R = lifted / I.
inline bool quotient_verify(const LiftPresentation& L, const FusionRing& R) {
    const std::size_t n = R.size();
    const std::size_t m = L.lifted.size();
    if (L.embedding.size() != m || L.distinguished.size() != n) return false;
    for (const auto& v : L.embedding)
        if (v.size() != n) return false;
    for (Index i = 0; i < n; ++i) {
        if (L.distinguished[i] >= m) return false;
        const auto& v = L.embedding[L.distinguished[i]];
        for (Index k = 0; k < n; ++k)
            if (v[k] != (k == i ? 1 : 0)) return false;
    }
    try {
        // Multiplication operator of each image: (M_w)_{l,j} = sum_i mu_{w,i} N_ij^l.
        const auto& N = R.tensor();
        std::vector<IntMatrix> ops(m, IntMatrix(n, n, 0));
        for (Index w = 0; w < m; ++w)
            for (Index i = 0; i < n; ++i) {
                const std::int64_t c = L.embedding[w][i];
                if (c == 0) continue;
                for (Index j = 0; j < n; ++j) {
                    const std::int64_t* p = N.product(i, j);
                    for (Index l = 0; l < n; ++l)
                        if (p[l] != 0) ops[w](l, j) = detail::checked_add(ops[w](l, j), detail::checked_mul(c, p[l]));
                }
            }
        std::vector<std::int64_t> lhs(n), rhs(n);
        for (Index a = 0; a < m; ++a)
            for (Index b = a; b < m; ++b) {
                const auto& y = L.embedding[b];
                for (Index l = 0; l < n; ++l) {
                    std::int64_t acc = 0;
                    for (Index j = 0; j < n; ++j)
                        if (y[j] != 0) acc = detail::checked_add(acc, detail::checked_mul(ops[a](l, j), y[j]));
                    lhs[l] = acc;
                }
                std::fill(rhs.begin(), rhs.end(), 0);
                for (const auto& [c, coeff] : L.lifted.product(a, b))
                    for (Index l = 0; l < n; ++l)
                        rhs[l] = detail::checked_add(rhs[l], detail::checked_mul(coeff, L.embedding[c][l]));
                if (lhs != rhs) return false;
                const auto ab = L.lifted.product(a, b), ba = L.lifted.product(b, a);
                if (!std::equal(ab.begin(), ab.end(), ba.begin(), ba.end())) return false;
            }
    } catch (const Error&) {
        return false;
    }
    return true;
}

} // namespace zbrng
