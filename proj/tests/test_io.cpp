#include "anosov/io.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>

using namespace anosov;

namespace {

std::string fixture(const std::string& name) { return std::string(ANOSOV_FIXTURE_DIR) + "/" + name; }

struct CliRun {
    int code;
    std::string out;
};

CliRun run_cli(const std::string& args)
{
    const std::string cmd = std::string(ANOSOV_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe))
        out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

} // namespace

TEST(Json, RationalEncoding)
{
    EXPECT_EQ(to_json(Rational(7)), json(7));
    EXPECT_EQ(to_json(make_rational(-3, 4)), json::parse("[-3, 4]"));
    const Rational big("123456789012345678901234567890");
    EXPECT_TRUE(to_json(big).is_string());
    EXPECT_EQ(rational_from_json(to_json(big)), big);
    EXPECT_EQ(rational_from_json(json("5/10")), make_rational(1, 2));
    EXPECT_THROW(rational_from_json(json("x")), SchemaError);
    EXPECT_THROW(rational_from_json(json::parse("[1, 0]")), SchemaError);
}

TEST(Json, GroupRoundTrip)
{
    std::mt19937 rng(103);
    for (int t = 0; t < 30; ++t) {
        const CrystalGroup g = anosov::testing::random_crystal_group(rng);
        EXPECT_EQ(group_from_json(json::parse(to_json(g).dump())), g);
    }
    EXPECT_EQ(group_from_json(read_json_file(fixture("klein_bottle.json"))), CrystalGroup::klein_bottle());
}

TEST(Json, AffineRoundTripAndUnknownFields)
{
    const CrystalGroup g = group_from_json(read_json_file(fixture("klein3_group.json")));
    const AffineMap a{g.holonomy.back(), g.section.back()};
    EXPECT_EQ(affine_from_json(to_json(a)), a);
    json j = to_json(a);
    j["extra"] = 1;
    EXPECT_THROW(affine_from_json(j), SchemaError);
}

TEST(Json, SpecValidation)
{
    const PerturbationSpec s = perturbation_spec_from_json(read_json_file(fixture("cone_mild.json")));
    EXPECT_EQ(s.k, 2u);
    EXPECT_DOUBLE_EQ(s.scale, 0.002);
    EXPECT_THROW(perturbation_spec_from_json(read_json_file(fixture("cone_malformed.json"))), SchemaError);
    json j = read_json_file(fixture("cone_mild.json"));
    j["k"] = 4;
    EXPECT_THROW(perturbation_spec_from_json(j), SchemaError);
    j = read_json_file(fixture("cone_mild.json"));
    j["scale"] = 0.7;
    EXPECT_THROW(perturbation_spec_from_json(j), SchemaError);
}

TEST(Cli, CheckAnosov)
{
    CliRun r = run_cli("check-anosov " + fixture("cat_map.json"));
    EXPECT_EQ(r.code, 0);
    const json j = json::parse(r.out);
    EXPECT_TRUE(j.at("anosov").get<bool>());
    const CliRun id = run_cli("check-anosov " + fixture("identity3.json"));
    EXPECT_EQ(id.code, 1);
    EXPECT_FALSE(json::parse(id.out).at("anosov").get<bool>());
    EXPECT_EQ(run_cli("check-anosov " + fixture("nonsquare.json")).code, 2);
    EXPECT_EQ(run_cli("check-anosov /nonexistent.json").code, 2);
}

TEST(Cli, FindExpanding)
{
    CliRun r = run_cli("find-expanding " + fixture("klein3_group.json") + " " + fixture("klein3_anosov.json"));
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(run_cli("find-expanding " + fixture("invalid_group.json") + " " + fixture("cat_map.json")).code, 1);
}

TEST(Cli, BuildInfratorus)
{
    CliRun r = run_cli("build-infratorus " + fixture("klein_bottle.json") + " --k 3 --s 2");
    ASSERT_EQ(r.code, 0);
    const CliRun again = run_cli("build-infratorus " + fixture("klein_bottle.json") + " --k 3 --s 2");
    EXPECT_EQ(r.out, again.out);
    EXPECT_EQ(run_cli("build-infratorus " + fixture("klein_bottle.json") + " --k 1 --s 2").code, 2);
    EXPECT_EQ(run_cli("build-infratorus " + fixture("klein_bottle.json") + " --k 3 --s 3").code, 2);
    EXPECT_EQ(run_cli("build-infratorus " + fixture("klein_bottle.json") + " --k 3 --s 3 --allow-odd").code, 0);
}

TEST(Cli, ConeCertify)
{
    EXPECT_EQ(run_cli("cone-certify " + fixture("cone_zero.json") + " --grid 8").code, 0);
    EXPECT_EQ(run_cli("cone-certify " + fixture("cone_strong.json") + " --grid 8 --m-cap 1").code, 1);
    EXPECT_EQ(run_cli("cone-certify " + fixture("cone_malformed.json")).code, 2);
}

TEST(Cli, HeisenbergAndExotic)
{
    EXPECT_EQ(run_cli("heisenberg-demo --m-cap 2").code, 0);
    const CliRun r = run_cli("exotic-query --n 21 --index 6");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("508"), std::string::npos);
    EXPECT_EQ(run_cli("no-such-command").code, 2);
}
