#include <gtest/gtest.h>

#include <algorithm>

#include "zbrng/generators.hpp"
#include "zbrng/rng_core.hpp"

using namespace zbrng;

namespace {

// Z/n group ring multiplication done by plain convolution, independent of
// StructureTensor.
std::vector<std::int64_t> cyclic_convolve(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    const std::size_t n = a.size();
    std::vector<std::int64_t> out(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[(i + j) % n] += a[i] * b[j];
    return out;
}

FusionRing nonassociative_ring() {
    StructureTensor N(2);
    N(0, 0, 1) = 1;
    N(0, 1, 0) = N(1, 0, 0) = 1;
    N(1, 1, 0) = 1;
    return FusionRing(std::move(N), {0, 1});
}

StructureTensor monoid_tensor() {
    // ({0,1}^2, componentwise product): index 0=(1,1) 1=(1,0) 2=(0,1) 3=(0,0)
    const int bits[4] = {3, 2, 1, 0};
    StructureTensor N(4);
    for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 4; ++j) {
            const int p = bits[i] & bits[j];
            const auto m = static_cast<Index>(std::find(bits, bits + 4, p) - bits);
            N(i, j, m) = 1;
        }
    return N;
}

} // namespace

TEST(FusionRing, RejectsBadInput) {
    EXPECT_THROW(FusionRing(StructureTensor(0), {}), InputError);
    EXPECT_THROW(FusionRing(StructureTensor(2), {0, 0}), InputError);
    StructureTensor N(2);
    N(0, 1, 1) = 1;
    EXPECT_THROW(FusionRing(N, {0, 1}), InputError);
}

TEST(Identity, GroupRingIdentityIsB0) {
    FusionRing R = group_ring(GroupSpec({4}));
    const auto& e = identity_coefficients(R);
    EXPECT_EQ(e[0], CycNum(1));
    for (std::size_t i = 1; i < 4; ++i) EXPECT_TRUE(e[i].is_zero());
}

TEST(Identity, MissingIdentityThrows) {
    StructureTensor zero(2);
    EXPECT_THROW(solve_identity(zero), AlgebraError);
}

TEST(Trace, RequiresIdentity) {
    const FusionRing R = group_ring(GroupSpec({3}));
    EXPECT_THROW(trace_eval(R, RingElement::basis(3, 0)), Error);
}

// tau(r), tau(r^2), tau(r^3) for r = -b0 - b1 + b2 in Z[Z/3].
TEST(Trace, CyclicThreeTriple) {
    FusionRing R = group_ring(GroupSpec({3}));
    identity_coefficients(R);
    const std::vector<std::int64_t> r{-1, -1, 1};
    const auto r2 = multiply_integral(R.tensor(), r, r);
    const auto r3 = multiply_integral(R.tensor(), r2, r);
    EXPECT_EQ(r2, cyclic_convolve(r, r));
    EXPECT_EQ(r3, cyclic_convolve(cyclic_convolve(r, r), r));
    EXPECT_EQ(trace_eval(R, RingElement::from_integers(r)), CycNum(-1));
    EXPECT_EQ(trace_eval(R, RingElement::from_integers(r2)), CycNum(-1));
    EXPECT_EQ(trace_eval(R, RingElement::from_integers(r3)), CycNum(5));
}

TEST(Axioms, GroupRingsPass) {
    for (const auto& orders : std::vector<std::vector<int>>{{2}, {3}, {5}, {2, 2}, {2, 3}, {4, 2}}) {
        const FusionRing R = group_ring(GroupSpec(orders));
        const VerifyReport rep = verify_axioms(R);
        EXPECT_TRUE(rep.all_passed());
        ASSERT_EQ(rep.checks.size(), 6u);
        EXPECT_EQ(rep.checks[0].name, "commutativity");
        EXPECT_EQ(rep.checks[5].name, "duality");
    }
}

TEST(Axioms, NonAssociativeWitness) {
    const FusionRing R = nonassociative_ring();
    const VerifyReport rep = verify_axioms(R);
    EXPECT_FALSE(rep.all_passed());
    const AxiomCheck& a = rep.at("associativity");
    EXPECT_FALSE(a.passed);
    ASSERT_EQ(a.witness.size(), 3u);
    // independent check of the witness triple
    const StructureTensor& N = R.tensor();
    const Index i = a.witness[0], j = a.witness[1], k = a.witness[2];
    std::vector<std::int64_t> lhs(2, 0), rhs(2, 0);
    for (Index m = 0; m < 2; ++m)
        for (Index t = 0; t < 2; ++t) {
            lhs[t] += N(i, j, m) * N(m, k, t);
            rhs[t] += N(j, k, m) * N(i, m, t);
        }
    EXPECT_NE(lhs, rhs);
}

TEST(Axioms, WrongInvolutionFailsDuality) {
    // Z/3 with the identity permutation: b1 b1 = b2, so tau(b1 b1) = 0 but the
    // duality axiom needs tau(b_1 b_~1) = 1.
    const FusionRing good = group_ring(GroupSpec({3}));
    const FusionRing R(good.tensor(), {0, 1, 2});
    const VerifyReport rep = verify_axioms(R);
    EXPECT_FALSE(rep.all_passed());
    EXPECT_FALSE(rep.at("involution").passed && rep.at("duality").passed);
}

TEST(Axioms, ExteriorSquareFixtureIdentity) {
    FusionRing R = ring_from_smatrix(exterior_square(group_ring_smatrix(GroupSpec({2, 2}))));
    EXPECT_TRUE(verify_axioms(R).all_passed());
    std::vector<Rat> e;
    for (const auto& c : identity_coefficients(R)) e.push_back(c.to_rational());
    std::sort(e.begin(), e.end());
    EXPECT_EQ(e, (std::vector<Rat>{Rat(-1, 2), Rat(-1, 4), Rat(-1, 4), Rat(0), Rat(0), Rat(0)}));
}

TEST(Involutions, MonoidHasNone) { EXPECT_TRUE(admissible_involutions(monoid_tensor()).empty()); }

TEST(Involutions, CyclicGroupHasInversion) {
    const FusionRing R = group_ring(GroupSpec({4}));
    const auto found = admissible_involutions(R.tensor());
    ASSERT_FALSE(found.empty());
    EXPECT_NE(std::find(found.begin(), found.end(), Permutation{0, 3, 2, 1}), found.end());
    for (const auto& p : found) EXPECT_TRUE(verify_axioms(FusionRing(R.tensor(), p)).all_passed());
}

TEST(TauPowers, GroupElementsReturnTheirOrder) {
    FusionRing R = group_ring(GroupSpec({6}));
    EXPECT_EQ(tau_power_search(R, 0), 1u);
    EXPECT_EQ(tau_power_search(R, 1), 6u);
    EXPECT_EQ(tau_power_search(R, 2), 3u);
    EXPECT_EQ(tau_power_search(R, 3), 2u);
    EXPECT_THROW(tau_power_search(R, 9), InputError);
}

TEST(ClosedSubsets, SubgroupsAreClosed) {
    const FusionRing R = group_ring(GroupSpec({6}));
    EXPECT_TRUE(is_closed_subset(R, {0}));
    EXPECT_TRUE(is_closed_subset(R, {0, 3}));
    EXPECT_TRUE(is_closed_subset(R, {0, 2, 4}));
    EXPECT_FALSE(is_closed_subset(R, {0, 1}));
    EXPECT_THROW(is_closed_subset(R, {}), InputError);

    const FusionRing sub = subring_restrict(R, {4, 0, 2});
    EXPECT_EQ(sub.size(), 3u);
    EXPECT_TRUE(verify_axioms(sub).all_passed());
    EXPECT_EQ(sub.tilde(), (Permutation{0, 2, 1}));
    EXPECT_THROW(subring_restrict(R, {0, 1}), AlgebraError);
}

TEST(Multiply, IntegralOverflowIsDetected) {
    const FusionRing R = group_ring(GroupSpec({2}));
    const std::vector<std::int64_t> big{INT64_MAX / 2 + 1, 0};
    EXPECT_THROW(multiply_integral(R.tensor(), big, std::vector<std::int64_t>{4, 0}), Error);
}
