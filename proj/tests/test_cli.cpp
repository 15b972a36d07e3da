#include <gtest/gtest.h>

#include <filesystem>

#include <json.hpp>

#include "zbrng/cli.hpp"
#include "zbrng/generators.hpp"
#include "zbrng/io.hpp"

using namespace zbrng;
using nlohmann::json;

namespace {

std::string data_path(const std::string& name) { return std::string(ZBRNG_DATA_DIR) + "/" + name; }

json run_machine(std::vector<std::string> args, int expected_exit) {
    args.insert(args.begin(), "--machine");
    const cli::CommandResult r = cli::run(args);
    EXPECT_EQ(r.exit_code, expected_exit) << r.report;
    return json::parse(r.report);
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = std::filesystem::temp_directory_path() / ("zbrng_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                                                         ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::create_directories(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }
    std::string out(const std::string& name) const { return (dir_ / name).string(); }

    std::filesystem::path dir_;
};

} // namespace

TEST_F(CliTest, VerifyPassesGroupRing) {
    const json j = run_machine({"verify", data_path("z3.zbrng")}, 0);
    EXPECT_TRUE(j["verified"].get<bool>());
    EXPECT_EQ(j["associativity"], "pass");
    EXPECT_EQ(j["n"], 3);
}

TEST_F(CliTest, NonAssociativeRingExitsOne) {
    const json j = run_machine({"smatrix", data_path("nonassoc.zbrng")}, 1);
    EXPECT_EQ(j["witness"].size(), 3u);
    const json v = run_machine({"verify", data_path("nonassoc.zbrng")}, 1);
    EXPECT_FALSE(v["verified"].get<bool>());
}

TEST_F(CliTest, MonoidHasNoInvolution) {
    run_machine({"verify", "--search-involution", data_path("monoid.zbrng")}, 1);
}

TEST_F(CliTest, InputErrorsExitTwo) {
    const json j = run_machine({"verify", data_path("missing.zbrng")}, 2);
    EXPECT_NE(j["error"].get<std::string>().find("cannot open"), std::string::npos);
    EXPECT_EQ(cli::run({"bogus"}).exit_code, 2);
    EXPECT_EQ(cli::run({"--tol", "-1", "verify", data_path("z3.zbrng")}).exit_code, 2);
    EXPECT_EQ(cli::run({"gen", "paley", "13"}).exit_code, 2);
    EXPECT_EQ(cli::run({"--help"}).exit_code, 0);
}

TEST_F(CliTest, VerlindeWritesTensor) {
    const cli::CommandResult r = cli::run({"verlinde", data_path("z3.smatrix"), "-o", out("z3.zbrng")});
    ASSERT_EQ(r.exit_code, 0) << r.report;
    ASSERT_EQ(r.files.size(), 1u);
    const FusionRing R = parse_ring(read_file(out("z3.zbrng")));
    EXPECT_EQ(R.tensor(), group_ring(GroupSpec({3})).tensor());
    EXPECT_EQ(R.tilde(), (Permutation{0, 2, 1}));

    const json j = run_machine({"verlinde", data_path("z3.smatrix")}, 0);
    EXPECT_TRUE(j["rows_orthogonal"].get<bool>());
}

TEST_F(CliTest, VerlindeOnDs3FlagsRows) {
    const json j = run_machine({"verlinde", data_path("ds3.smatrix")}, 0);
    EXPECT_TRUE(j["integral"].get<bool>());
    EXPECT_TRUE(j["nonnegative"].get<bool>());
    EXPECT_FALSE(j["rows_orthogonal"].get<bool>());
    EXPECT_EQ(j["nonorthogonal_rows"], json::array({0, 1}));
}

TEST_F(CliTest, SMatrixRoundTripThroughFiles) {
    ASSERT_EQ(cli::run({"smatrix", data_path("z2xz3.zbrng"), "-o", out("s.smatrix")}).exit_code, 0);
    ASSERT_EQ(cli::run({"verlinde", out("s.smatrix"), "-o", out("back.zbrng")}).exit_code, 0);
    EXPECT_EQ(parse_ring(read_file(out("back.zbrng"))).tensor(), group_ring(GroupSpec({2, 3})).tensor());
}

TEST_F(CliTest, Quotient2) {
    ASSERT_EQ(cli::run({"quotient2", data_path("z2xz3.zbrng"), "3", "-o", out("q.zbrng")}).exit_code, 0);
    EXPECT_EQ(to_tensor(parse_algebra(read_file(out("q.zbrng")))), group_ring(GroupSpec({3})).tensor());
    run_machine({"quotient2", data_path("z3.zbrng"), "1"}, 1);
}

TEST_F(CliTest, HadamardCommands) {
    const json ring = run_machine({"had", "ring", "--check-parity", data_path("paley11.had")}, 0);
    EXPECT_TRUE(ring["parity"].get<bool>());
    EXPECT_TRUE(ring["no_klein_subring"].get<bool>());
    const json prof = run_machine({"had", "profile", data_path("paley19.had")}, 0);
    EXPECT_EQ(prof["profile"]["4"], 4560);
    EXPECT_EQ(prof["profile"]["12"], 285);
    const json closed = run_machine({"had", "closed", data_path("paley11.had")}, 0);
    EXPECT_EQ(closed["closed_subsets"].size(), 13u);
    EXPECT_EQ(run_machine({"had", "vrank", data_path("paley11.had")}, 0)["rank"], 10);
    EXPECT_EQ(run_machine({"had", "equiv", data_path("paley11.had"), data_path("paley11.had")}, 0)["verdict"], "indistinguishable");
    run_machine({"had", "closed", data_path("sylvester16.had")}, 2);
}

TEST_F(CliTest, GeneratorsMatchLibrary) {
    ASSERT_EQ(cli::run({"gen", "paley", "11", "-o", out("p.had")}).exit_code, 0);
    EXPECT_EQ(read_file(out("p.had")), read_file(data_path("paley11.had")));
    const json j = run_machine({"gen", "sylvester", "2"}, 0);
    EXPECT_EQ(j["output"], "++++\n+-+-\n++--\n+--+\n");
    ASSERT_EQ(cli::run({"gen", "ext2", "2", "2", "-o", out("e.smatrix")}).exit_code, 0);
    EXPECT_EQ(parse_smatrix(read_file(out("e.smatrix"))).exact(), exterior_square(group_ring_smatrix(GroupSpec({2, 2}))).exact());
}

TEST_F(CliTest, LiftOnHadamardRing) {
    ASSERT_EQ(cli::run({"had", "ring", data_path("paley11.had"), "-o", out("p.zbrng")}).exit_code, 0);
    const json j = run_machine({"lift", out("p.zbrng"), "-o", out("p.lift")}, 0);
    EXPECT_EQ(j["semigroup_size"], 1024);
    EXPECT_TRUE(j["quotient_verified"].get<bool>());
    EXPECT_EQ(parse_lift(read_file(out("p.lift"))).lifted.size(), 1024u);
    run_machine({"--cap", "100", "lift", out("p.zbrng")}, 1);
}
