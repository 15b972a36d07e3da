#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>

#include "zbrng/generators.hpp"
#include "zbrng/hadamard.hpp"

using namespace zbrng;

namespace {

// N_ij^m = (1/4) sum_l H_li H_lj H_lm, straight from the definition.
StructureTensor tensor_oracle(const HadamardMatrix& h) {
    const std::size_t n = h.order();
    StructureTensor N(n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            for (Index m = 0; m < n; ++m) {
                std::int64_t s = 0;
                for (Index l = 0; l < n; ++l) s += h(l, i) * h(l, j) * h(l, m);
                EXPECT_EQ(s % 4, 0);
                N(i, j, m) = s / 4;
            }
    return N;
}

Profile profile_oracle(const HadamardMatrix& h) {
    const std::size_t n = h.order();
    Profile p;
    std::vector<Index> pick(4);
    std::function<void(std::size_t, Index)> rec = [&](std::size_t depth, Index start) {
        if (depth == 4) {
            std::int64_t s = 0;
            for (Index q = 0; q < n; ++q) s += h(q, pick[0]) * h(q, pick[1]) * h(q, pick[2]) * h(q, pick[3]);
            ++p[std::abs(s)];
            return;
        }
        for (Index c = start; c < n; ++c) {
            pick[depth] = c;
            rec(depth + 1, c + 1);
        }
    };
    rec(0, 0);
    return p;
}

// Rank over F2 by elimination on 64-bit row masks.
std::size_t f2_rank_oracle(const HadamardMatrix& h) {
    std::vector<std::uint64_t> rows;
    for (std::size_t r = 0; r < h.order(); ++r) {
        std::uint64_t m = 0;
        for (std::size_t c = 0; c < h.order(); ++c)
            if (h(r, c) < 0) m |= std::uint64_t{1} << c;
        rows.push_back(m);
    }
    std::size_t rank = 0;
    for (int bit = 63; bit >= 0; --bit) {
        const std::uint64_t b = std::uint64_t{1} << bit;
        auto it = std::find_if(rows.begin() + static_cast<long>(rank), rows.end(), [&](std::uint64_t x) { return x & b; });
        if (it == rows.end()) continue;
        std::swap(*it, rows[rank]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != rank && (rows[r] & b)) rows[r] ^= rows[rank];
        ++rank;
    }
    return rank;
}

// Partitions of t into nonzero triangular numbers, by recursion on the largest part.
std::uint64_t triangular_partitions(std::int64_t t, std::int64_t max_part) {
    if (t == 0) return 1;
    std::uint64_t count = 0;
    for (std::int64_t a = 1; a * (a + 1) / 2 <= std::min(t, max_part); ++a) {
        const std::int64_t tri = a * (a + 1) / 2;
        count += triangular_partitions(t - tri, tri);
    }
    return count;
}

IntMatrix scramble(const IntMatrix& m, unsigned seed) {
    std::mt19937 rng(seed);
    const std::size_t n = m.rows();
    std::vector<std::size_t> rp(n), cp(n);
    std::iota(rp.begin(), rp.end(), 0);
    std::iota(cp.begin(), cp.end(), 0);
    std::shuffle(rp.begin(), rp.end(), rng);
    std::shuffle(cp.begin(), cp.end(), rng);
    std::vector<int> rs(n), cs(n);
    for (auto& s : rs) s = rng() % 2 ? 1 : -1;
    for (auto& s : cs) s = rng() % 2 ? 1 : -1;
    IntMatrix out(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out(r, c) = m(rp[r], cp[c]) * rs[r] * cs[c];
    return out;
}

std::vector<HadamardMatrix> small_family() {
    return {gen_sylvester(2), gen_sylvester(3), gen_sylvester(4), gen_paley(3), gen_paley(7), gen_paley(11), gen_paley(19),
            gen_kronecker(sylvester2(), gen_paley(3).matrix()), gen_kronecker(sylvester2(), gen_paley(7).matrix())};
}

} // namespace

TEST(HadamardMatrix, Validation) {
    EXPECT_THROW(HadamardMatrix(IntMatrix::from_rows({{1, 1}, {1, 1}})), InputError);
    EXPECT_THROW(HadamardMatrix(IntMatrix::from_rows({{1, 0}, {1, -1}})), InputError);
    EXPECT_THROW(HadamardMatrix(IntMatrix::from_rows({{1, 1}, {-1, 1}})), InputError); // not normalized
    const HadamardMatrix h = normalize_hadamard(IntMatrix::from_rows({{1, 1}, {-1, 1}}));
    EXPECT_EQ(h(1, 0), 1);
    EXPECT_EQ(h(1, 1), -1);
}

TEST(HadamardMatrix, NormalizeOnOtherColumn) {
    const HadamardMatrix h = gen_paley(11);
    const HadamardMatrix g = normalize_hadamard(h.matrix(), 5);
    for (std::size_t r = 0; r < 12; ++r) EXPECT_EQ(g(r, 0), 1);
}

TEST(HadamardRing, TensorMatchesDefinition) {
    for (const auto& h : small_family()) {
        const StructureTensor N = hadamard_tensor(h);
        EXPECT_EQ(N, tensor_oracle(h));
        const FusionRing R = ring_from_hadamard(h);
        EXPECT_EQ(ring_k(R), static_cast<std::int64_t>(h.k()));
        EXPECT_TRUE(verify_axioms(R).all_passed());
    }
}

TEST(HadamardRing, Paley12Constants) {
    const HadamardMatrix h = gen_paley(11);
    const FusionRing R = ring_from_hadamard(h);
    for (Index i = 0; i < 12; ++i)
        for (Index j = 0; j < 12; ++j) {
            EXPECT_TRUE(sum_squares_check(R, i, j));
            std::int64_t sq = 0;
            for (Index m = 0; m < 12; ++m) sq += R(i, j, m) * R(i, j, m);
            EXPECT_EQ(sq, 9);
            for (Index m = 0; m < 12; ++m) {
                if (i && j && m && i != j && j != m && i != m) { EXPECT_TRUE(R(i, j, m) == 1 || R(i, j, m) == -1); }
            }
        }
    EXPECT_TRUE(odd_k_parity_holds(R.tensor(), 3));
    EXPECT_TRUE(no_klein_subring(R.tensor(), 3));
}

TEST(HadamardRing, EvenKHasKleinSubrings) {
    const FusionRing R = ring_from_hadamard(gen_sylvester(3));
    EXPECT_FALSE(no_klein_subring(R.tensor(), 2));
    EXPECT_THROW(odd_k_parity_holds(R.tensor(), 2), InputError);
    // k = 1: b_1 b_2 = b_3 has N = k, outside the odd-k range
    EXPECT_THROW(odd_k_parity_holds(ring_from_hadamard(gen_sylvester(2)).tensor(), 1), InputError);
}

TEST(XiSets, LemmasOnSmallFamily) {
    for (const auto& h : small_family()) {
        const auto xi = xi_sets(h);
        EXPECT_TRUE(xi_pair_lemma_holds(h));
        EXPECT_TRUE(xi_tensor_agreement(h, hadamard_tensor(h)));
        for (Index i = 1; i < h.order(); ++i) EXPECT_EQ(xi[i].size(), 2 * h.k());
    }
}

TEST(Profile, MatchesBruteForce) {
    for (const auto& h : small_family()) EXPECT_EQ(profile(h), profile_oracle(h)) << h.order();
    EXPECT_EQ(profile(gen_paley(11)), (Profile{{4, 495}}));
    EXPECT_EQ(profile(gen_sylvester(3)), (Profile{{0, 56}, {8, 14}}));
    EXPECT_EQ(profile(gen_paley(19)), (Profile{{4, 4560}, {12, 285}}));
}

TEST(Profile, InvariantUnderEquivalence) {
    const HadamardMatrix h = gen_paley(11);
    for (unsigned seed : {1u, 2u, 3u}) EXPECT_EQ(profile(normalize_hadamard(scramble(h.matrix(), seed))), profile(h));
}

TEST(Census, PaleyCounts) {
    const auto c12 = multiset_census(ring_from_hadamard(gen_paley(11)));
    EXPECT_EQ(c12.size(), 1u);
    EXPECT_EQ(c12.size(), triangular_bound(3));
    const auto c20 = multiset_census(ring_from_hadamard(gen_paley(19)));
    EXPECT_LE(c20.size(), triangular_bound(5));
    std::size_t pairs = 0;
    for (const auto& [ms, count] : c20) pairs += count;
    EXPECT_EQ(pairs, 19u * 18u / 2u);
}

TEST(Census, TriangularBoundMatchesRecursion) {
    for (std::int64_t k = 3; k <= 21; k += 2) {
        const std::int64_t r = (k - 3) / 2;
        EXPECT_EQ(triangular_bound(k), triangular_partitions(r * (r + 1) / 2, r * (r + 1) / 2)) << k;
    }
    EXPECT_EQ(triangular_bound(7), 2u);
    EXPECT_THROW(triangular_bound(4), InputError);
}

TEST(ClosedSubsets, OddKClassification) {
    const FusionRing R = ring_from_hadamard(gen_paley(11));
    const auto sets = had_closed_subsets(R);
    EXPECT_EQ(sets.size(), 13u);
    EXPECT_EQ(sets.front(), IndexSet{0});
    EXPECT_EQ(sets.back().size(), 12u);
    // exhaustive oracle over all subsets containing 0
    std::size_t closed = 0;
    for (std::uint32_t mask = 0; mask < (1u << 11); ++mask) {
        IndexSet s{0};
        for (Index b = 0; b < 11; ++b)
            if (mask >> b & 1u) s.push_back(b + 1);
        if (is_closed_subset(R, s)) ++closed;
    }
    EXPECT_EQ(closed, 13u);
    EXPECT_THROW(had_closed_subsets(ring_from_hadamard(gen_sylvester(3))), InputError);
}

TEST(WMatrix, Paley12AndPaley20) {
    for (long long q : {11LL, 19LL}) {
        const HadamardMatrix h = gen_paley(q);
        const FusionRing R = ring_from_hadamard(h);
        const auto k = static_cast<std::int64_t>(h.k());
        for (Index i = 1; i < h.order(); ++i) {
            const IntMatrix w = wmatrix(R, i);
            ASSERT_EQ(w.rows(), static_cast<std::size_t>(8 * k - 4));
            const IntMatrix g = w * w.transpose();
            EXPECT_EQ(g, IntMatrix::identity(w.rows()).map([&](std::int64_t v) { return v * (2 * k * k + 2); }));
            if (k == 3) {
                for (std::size_t r = 0; r < w.rows(); ++r)
                    for (std::size_t c = 0; c < w.cols(); ++c) EXPECT_EQ(std::abs(w(r, c)), 1);
            }
        }
    }
}

TEST(Reconstruct, ExactRecoversSortedRows) {
    for (const HadamardMatrix& h : {gen_paley(11), gen_sylvester(4), gen_paley(19)}) {
        const HadamardMatrix rec = reconstruct_exact(ring_from_hadamard(h), static_cast<std::int64_t>(h.k()));
        EXPECT_EQ(rec.matrix(), sorted_rows(h.matrix()));
    }
}

TEST(Reconstruct, ModThree) {
    const HadamardMatrix h = gen_sylvester(4); // k = 4 = 1 mod 3
    const F3Matrix rec = reconstruct_mod3(reduce_mod3(hadamard_tensor(h)), 4);
    EXPECT_EQ(rec, hadamard_mod3(h));
    const F3Matrix expect = sorted_rows(h.matrix()).map([](std::int64_t v) { return F3(v); });
    EXPECT_EQ(rec, expect);
    EXPECT_THROW(reconstruct_mod3(reduce_mod3(hadamard_tensor(gen_paley(11))), 3), InputError);
}

TEST(F2Algebra, CommutativeAssociative) {
    EXPECT_TRUE(f2_algebra_check(3));
    EXPECT_TRUE(f2_algebra_check(5));
    const F2Table t = f2_table(3);
    EXPECT_EQ(t.size(), 12u);
    // products of distinct nonzero indices are the sum of the other nonzero ones
    EXPECT_EQ(t[1][2][3], 1);
    EXPECT_EQ(t[1][2][1], 0);
}

TEST(VMatrix, RankMatchesBitmaskOracle) {
    for (const auto& h : small_family()) EXPECT_EQ(v_rank(h), f2_rank_oracle(h)) << h.order();
    EXPECT_EQ(v_rank(gen_paley(11)), 10u);
    for (int m = 2; m <= 5; ++m) EXPECT_EQ(v_rank(gen_sylvester(m)), static_cast<std::size_t>(m));
}

TEST(Equivalence, Screen) {
    const HadamardMatrix p = gen_paley(11);
    EXPECT_EQ(equiv_screen(p, normalize_hadamard(scramble(p.matrix(), 9))), EquivVerdict::indistinguishable);
    const HadamardMatrix a = gen_paley(23);
    const HadamardMatrix b = gen_kronecker(sylvester2(), p.matrix());
    EXPECT_EQ(equiv_screen(a, b), EquivVerdict::inequivalent);
    EXPECT_EQ(profile(b), (Profile{{0, 6600}, {8, 3960}, {24, 66}}));
    EXPECT_THROW(equiv_screen(p, gen_sylvester(4)), InputError);
}
