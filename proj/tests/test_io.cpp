#include <gtest/gtest.h>

#include <functional>

#include "zbrng/generators.hpp"
#include "zbrng/io.hpp"
#include "zbrng/quotients.hpp"

using namespace zbrng;

namespace {

std::string data_path(const std::string& name) { return std::string(ZBRNG_DATA_DIR) + "/" + name; }

// Expect an InputError whose message starts with "line <n>:".
void expect_line_error(const std::function<void()>& f, int line) {
    try {
        f();
        ADD_FAILURE() << "no error raised";
    } catch (const InputError& e) {
        EXPECT_EQ(std::string(e.what()).rfind("line " + std::to_string(line) + ":", 0), 0u) << e.what();
    }
}

SMatrix hadamard_smatrix(const HadamardMatrix& h) {
    const auto k = static_cast<long long>(h.k());
    std::vector<std::vector<long long>> rows(h.order(), std::vector<long long>(h.order()));
    for (std::size_t r = 0; r < h.order(); ++r)
        for (std::size_t c = 0; c < h.order(); ++c) rows[r][c] = k * h(r, c);
    return SMatrix::from_integers(rows);
}

} // namespace

TEST(RingFormat, RoundTrip) {
    for (const FusionRing& R : {group_ring(GroupSpec({2, 3})), ring_from_hadamard(gen_paley(7))}) {
        const std::string text = format_ring(R);
        const FusionRing back = parse_ring(text);
        EXPECT_EQ(back.tensor(), R.tensor());
        EXPECT_EQ(back.tilde(), R.tilde());
        EXPECT_EQ(format_ring(back), text);
    }
}

TEST(RingFormat, DataFilesLoad) {
    EXPECT_EQ(parse_ring(read_file(data_path("z3.zbrng"))).tensor(), group_ring(GroupSpec({3})).tensor());
    EXPECT_EQ(parse_ring(read_file(data_path("z2xz3.zbrng"))).tensor(), group_ring(GroupSpec({2, 3})).tensor());
    const AlgebraFile monoid = parse_algebra(read_file(data_path("monoid.zbrng")));
    EXPECT_FALSE(monoid.involution.has_value());
    EXPECT_THROW(parse_ring(read_file(data_path("monoid.zbrng"))), InputError);
    EXPECT_THROW(read_file(data_path("missing.zbrng")), InputError);
}

TEST(RingFormat, SparseTermsAndComments) {
    const std::string text =
        "# Z/2\n"
        "zbrng 1\n"
        "n 2\n"
        "involution 0 1   # self-dual\n"
        "terms 4\n"
        "0 0 0 1\n0 1 1 1\n1 0 1 1\n1 1 0 1\n";
    EXPECT_EQ(parse_ring(text).tensor(), group_ring(GroupSpec({2})).tensor());
}

TEST(RingFormat, MalformedInputReportsLine) {
    expect_line_error([] { parse_algebra("zbrng 2\nn 1\nN 0\n1\n"); }, 1);
    expect_line_error([] { parse_algebra("zbrng 1\nn 2\nN 0\n1 0\n0 1\nN 0\n0 1\n1 0\n"); }, 6);
    expect_line_error([] { parse_algebra("zbrng 1\nn 2\ninvolution 0 0\nN 0\n1 0\n0 1\nN 1\n0 1\n1 0\n"); }, 3);
    expect_line_error([] { parse_algebra("zbrng 1\nn 1\nN 0\nx\n"); }, 4);
    expect_line_error([] { parse_algebra("zbrng 1\nn 1\nN 0\n1 2\n"); }, 4);
    expect_line_error([] { parse_algebra("zbrng 1\nn 2\nterms 2\n0 0 0 1\n0 0 0 2\n"); }, 5);
    expect_line_error([] { parse_algebra("zbrng 1\nn 2\nterms 1\n0 0 5 1\n"); }, 4);
    expect_line_error([] { parse_algebra("zbrng 1\nn 1\nN 0\n1\nextra\n"); }, 5);
    EXPECT_THROW(parse_algebra("zbrng 1\nn 2\nN 0\n1 0\n"), InputError);
}

TEST(PointedFormat, SparseAboveDenseLimit) {
    const PointedAlgebra A = PointedAlgebra::from_tensor(group_ring(GroupSpec({4})).tensor());
    const std::string dense = format_pointed(A);
    const std::string sparse = format_pointed(A, 2);
    EXPECT_NE(dense.find("N 0"), std::string::npos);
    EXPECT_NE(sparse.find("terms 16"), std::string::npos);
    EXPECT_EQ(to_tensor(parse_algebra(dense)), A.to_tensor());
    EXPECT_EQ(to_tensor(parse_algebra(sparse)), A.to_tensor());
}

TEST(LiftFormat, RoundTripVerifies) {
    const SMatrix s = hadamard_smatrix(gen_paley(11));
    const LiftPresentation L = fannsc_lift(s);
    const std::string text = format_lift(L);
    EXPECT_NE(text.find("terms"), std::string::npos);
    const LiftPresentation back = parse_lift(text);
    EXPECT_EQ(back.lifted.size(), 1024u);
    EXPECT_EQ(back.distinguished, L.distinguished);
    EXPECT_EQ(back.embedding, L.embedding);
    EXPECT_TRUE(quotient_verify(back, ring_from_hadamard(gen_paley(11))));

    const LiftPresentation small = fannsc_lift(group_ring_smatrix(GroupSpec({3})));
    const LiftPresentation small_back = parse_lift(format_lift(small));
    EXPECT_EQ(small_back.lifted.to_tensor(), group_ring(GroupSpec({3})).tensor());
    EXPECT_THROW(parse_lift(format_ring(group_ring(GroupSpec({3})))), InputError);
}

TEST(SMatrixFormat, ExactRoundTrip) {
    for (const SMatrix& s : {group_ring_smatrix(GroupSpec({3})), group_ring_smatrix(GroupSpec({2, 4})), fixture_ds3()}) {
        const std::string text = format_smatrix(s);
        const SMatrix back = parse_smatrix(text);
        ASSERT_TRUE(back.is_exact());
        EXPECT_EQ(back.exact(), s.exact());
    }
    EXPECT_EQ(parse_smatrix(read_file(data_path("z3.smatrix"))).exact(), group_ring_smatrix(GroupSpec({3})).exact());
}

TEST(SMatrixFormat, NumericRoundTripIsBitExact) {
    const SMatrix kp = kac_peterson_a1(3);
    const SMatrix back = parse_smatrix(format_smatrix(kp));
    ASSERT_FALSE(back.is_exact());
    EXPECT_EQ(back.numeric(), kp.numeric());
    const SMatrix z = SMatrix(group_ring_smatrix(GroupSpec({5})).to_complex());
    EXPECT_EQ(parse_smatrix(format_smatrix(z)).numeric(), z.numeric());
}

TEST(SMatrixFormat, MalformedInputReportsLine) {
    expect_line_error([] { parse_smatrix("smatrix 1\nn 2\n1 1\n1 -1\n"); }, 2);
    expect_line_error([] { parse_smatrix("smatrix 1\nn 2 2\n1 1\n1\n"); }, 4);
    expect_line_error([] { parse_smatrix("smatrix 1\nn 2 2\n1 1\n1 q\n"); }, 4);
    expect_line_error([] { parse_smatrix("smatrix 1\nn 1 1 numeric\n(1,2\n"); }, 3);
    expect_line_error([] { parse_smatrix("smatrix 1\nn 1 1\n1\n1\n"); }, 4);
}

TEST(HadamardFormat, RoundTripAndInputStyles) {
    const HadamardMatrix h = gen_paley(11);
    EXPECT_EQ(parse_hadamard(format_hadamard(h)).matrix(), h.matrix());
    EXPECT_EQ(parse_hadamard(read_file(data_path("paley11.had"))).matrix(), h.matrix());
    EXPECT_EQ(parse_hadamard("1 1\n1 -1\n").matrix(), sylvester2());
    expect_line_error([] { parse_sign_matrix("++\n+2\n"); }, 2);
    expect_line_error([] { parse_sign_matrix("++\n+-+\n"); }, 2);
    EXPECT_THROW(parse_hadamard("++\n++\n"), InputError);
    EXPECT_THROW(parse_hadamard("# nothing\n"), InputError);
}
