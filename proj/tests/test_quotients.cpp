#include <gtest/gtest.h>

#include <map>
#include <set>

#include "zbrng/generators.hpp"
#include "zbrng/quotients.hpp"

using namespace zbrng;

namespace {

SMatrix hadamard_smatrix(const HadamardMatrix& h) {
    const auto k = static_cast<long long>(h.k());
    std::vector<std::vector<long long>> rows(h.order(), std::vector<long long>(h.order()));
    for (std::size_t r = 0; r < h.order(); ++r)
        for (std::size_t c = 0; c < h.order(); ++c) rows[r][c] = k * h(r, c);
    return SMatrix::from_integers(rows);
}

// Size of the multiplicative closure of the column sign patterns, computed as
// the span over F2 of the (-1)-position bitmasks.
std::size_t sign_pattern_closure(const HadamardMatrix& h) {
    std::set<std::uint64_t> seen;
    std::vector<std::uint64_t> gens;
    for (std::size_t c = 0; c < h.order(); ++c) {
        std::uint64_t mask = 0;
        for (std::size_t r = 0; r < h.order(); ++r)
            if (h(r, c) < 0) mask |= std::uint64_t{1} << r;
        gens.push_back(mask);
    }
    std::vector<std::uint64_t> frontier(gens.begin(), gens.end());
    seen.insert(gens.begin(), gens.end());
    while (!frontier.empty()) {
        std::vector<std::uint64_t> next;
        for (auto x : frontier)
            for (auto g : gens)
                if (seen.insert(x ^ g).second) next.push_back(x ^ g);
        frontier = std::move(next);
    }
    return seen.size();
}

} // namespace

TEST(PointedAlgebra, TensorRoundTrip) {
    const FusionRing R = group_ring(GroupSpec({2, 3}));
    const PointedAlgebra A = PointedAlgebra::from_tensor(R.tensor());
    EXPECT_EQ(A.size(), 6u);
    EXPECT_EQ(A.to_tensor(), R.tensor());
    EXPECT_TRUE(A.is_commutative());
    EXPECT_TRUE(A.is_associative());
    EXPECT_TRUE(A.all_nonnegative());
    EXPECT_EQ(A.coefficient(1, 2, 3), R(1, 2, 3));
}

TEST(PointedAlgebra, DetectsNonAssociativity) {
    StructureTensor N(2);
    N(0, 0, 1) = 1;
    N(0, 1, 0) = N(1, 0, 0) = 1;
    N(1, 1, 0) = 1;
    EXPECT_FALSE(PointedAlgebra::from_tensor(N).is_associative());
}

TEST(Order2Quotient, CyclicSixModTwo) {
    // Z/2 x Z/3 modulo the Z/2 generator (digits (1,0) = index 3) is Z/3.
    FusionRing R = group_ring(GroupSpec({2, 3}));
    const Order2Quotient q = order2_quotient(R, 3);
    EXPECT_EQ(q.algebra.to_tensor(), group_ring(GroupSpec({3})).tensor());
    EXPECT_EQ(q.representatives, (std::vector<Index>{0, 1, 2}));
    EXPECT_EQ(q.class_of, (std::vector<Index>{0, 1, 2, 0, 1, 2}));
    EXPECT_TRUE(q.algebra.all_nonnegative());
    EXPECT_TRUE(q.algebra.is_associative());
}

TEST(Order2Quotient, KleinModOneFactor) {
    FusionRing R = ring_from_hadamard(gen_sylvester(2)); // k = 1: the Klein group ring
    const Order2Quotient q = order2_quotient(R, 1);
    EXPECT_EQ(q.algebra.size(), 2u);
    EXPECT_EQ(q.algebra.to_tensor(), group_ring(GroupSpec({2})).tensor());
}

TEST(Order2Quotient, RejectsElementsOfOtherOrder) {
    FusionRing Z3 = group_ring(GroupSpec({3}));
    EXPECT_THROW(order2_quotient(Z3, 1), AlgebraError);
    FusionRing H = ring_from_hadamard(gen_paley(11)); // b_i^2 = 3 b_0
    EXPECT_THROW(order2_quotient(H, 1), AlgebraError);
    EXPECT_THROW(order2_quotient(Z3, 7), InputError);
}

TEST(Lift, Paley12IsInsideThreeTimesGroupRing) {
    const HadamardMatrix h = gen_paley(11);
    const LiftPresentation L = fannsc_lift(hadamard_smatrix(h));
    EXPECT_EQ(L.lifted.size(), sign_pattern_closure(h));
    EXPECT_EQ(L.lifted.size(), 1024u);
    EXPECT_FALSE(L.iteration_cap_hit);
    EXPECT_TRUE(L.lifted.all_nonnegative());
    ASSERT_EQ(L.distinguished.size(), 12u);

    // x_{v_i}^2 = 3 x_{v_0} (column 0 is the identity pattern)
    const Index one = L.distinguished[0];
    for (Index i = 0; i < 12; ++i) {
        const auto sq = L.lifted.product(L.distinguished[i], L.distinguished[i]);
        ASSERT_EQ(sq.size(), 1u);
        EXPECT_EQ(sq[0].first, one);
        EXPECT_EQ(sq[0].second, 3);
    }
    // every lifted element is a power of 3 times a sign vector
    for (const BigInt& g : L.scale) {
        BigInt x = g;
        while (x % 3 == 0) x /= 3;
        EXPECT_EQ(x, 1);
        EXPECT_GE(g, 3);
    }
    std::map<std::size_t, std::size_t> lengths;
    for (auto d : L.word_length) ++lengths[d];
    EXPECT_EQ(lengths, (std::map<std::size_t, std::size_t>{{1, 12}, {2, 55}, {3, 165}, {4, 330}, {5, 462}}));

    const FusionRing R = ring_from_hadamard(h);
    EXPECT_TRUE(quotient_verify(L, R));
}

TEST(Lift, TamperedEmbeddingFailsVerification) {
    const HadamardMatrix h = gen_sylvester(2);
    LiftPresentation L = fannsc_lift(hadamard_smatrix(h));
    const FusionRing R = ring_from_hadamard(h);
    ASSERT_TRUE(quotient_verify(L, R));
    // pick a non-distinguished element if there is one, else break a distinguished one
    L.embedding.back()[0] += 1;
    EXPECT_FALSE(quotient_verify(L, R));
}

TEST(Lift, RootOfUnityOrders) {
    for (int q : {2, 3, 4}) {
        const GroupSpec g({q});
        const LiftPresentation L = fannsc_lift(group_ring_smatrix(g));
        EXPECT_EQ(L.lifted.size(), static_cast<std::size_t>(q)) << q;
        EXPECT_EQ(L.lifted.to_tensor(), group_ring(g).tensor()) << q;
        EXPECT_TRUE(quotient_verify(L, group_ring(g))) << q;
    }
    const LiftPresentation trivial = fannsc_lift(SMatrix::from_integers({{1}}));
    EXPECT_EQ(trivial.lifted.size(), 1u);
}

TEST(Lift, Errors) {
    EXPECT_THROW(fannsc_lift(kac_peterson_a1(2)), InputError);
    EXPECT_THROW(fannsc_lift(hadamard_smatrix(gen_paley(11)), 100), AlgebraError);
    // columns with entries of different moduli
    EXPECT_THROW(fannsc_lift(fixture_ds3()), AlgebraError);
}
