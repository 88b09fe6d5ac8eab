#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <zxalg/cli.hpp>

using namespace zxalg;
namespace fs = std::filesystem;
using io::json;

namespace {

const fs::path fixtures = FIXTURES_DIR;

struct Result {
    int code;
    std::string out, err;
};

Result zxcal(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<json> lines(const std::string& s) {
    std::vector<json> out;
    std::istringstream is(s);
    for (std::string line; std::getline(is, line);)
        if (!line.empty()) out.push_back(json::parse(line));
    return out;
}

fs::path temp(const std::string& name) { return fs::temp_directory_path() / ("zxcal_test_" + name); }

}  // namespace

TEST(Json, ScalarRoundTrip) {
    ExactScalar x = ExactScalar::rational(-3, 7, 5, 2) + ExactScalar::sqrt2() * ExactScalar::rational(1, 9);
    EXPECT_EQ(*io::value_from(io::to_json(x)).exact, x);
    mpq_class big(mpz_class("123456789012345678901234567890"), mpz_class(7));
    ExactScalar y{GaussQ(big)};
    json j = io::to_json(y);
    EXPECT_TRUE(j["p"][0].is_string());
    EXPECT_EQ(*io::value_from(j).exact, y);
    EXPECT_EQ(io::value_from(json{{"re", 1.5}, {"im", -2}}).num, FloatScalar(1.5, -2));
    EXPECT_THROW(io::value_from(json("x")), Error);
}

TEST(Json, FixturesRoundTrip) {
    for (const auto& entry : fs::directory_iterator(fixtures)) {
        std::ifstream f(entry.path());
        json j = json::parse(f);
        if (j.contains("steps")) {
            auto s = io::script_from(j);
            auto again = io::script_from(io::script_json(s));
            ASSERT_EQ(s.steps.size(), again.steps.size());
            for (std::size_t i = 0; i < s.steps.size(); ++i) EXPECT_TRUE(structural_eq(s.steps[i], again.steps[i]));
            continue;
        }
        Diagram d = io::diagram_from(j);
        EXPECT_TRUE(validate(d).empty()) << entry.path();
        EXPECT_TRUE(structural_eq(io::diagram_from(io::to_json(d)), d)) << entry.path();
    }
}

TEST(Json, RandomDiagramsRoundTrip) {
    for (std::uint64_t s = 0; s < 50; ++s) {
        Diagram d = random_diagram(s, 8, 6, {true, std::nullopt, std::nullopt});
        Diagram back = io::diagram_from(json::parse(io::to_json(d).dump()));
        EXPECT_TRUE(structural_eq(back, d)) << s;
    }
    Diagram loop = compose(cup(), cap());
    EXPECT_EQ(io::diagram_from(io::to_json(loop)).loops, 1u);
}

TEST(Json, BadInputs) {
    EXPECT_THROW(io::diagram_from(json::parse(R"({"nodes":[{"id":"a","kind":"Q","n":1,"m":1}]})")), Error);
    EXPECT_THROW(io::diagram_from(json::parse(R"({"nodes":[],"inputs":[{"node":"zz","port":0}]})")), Error);
}

TEST(Cli, InterpretHadamardExact) {
    auto r = zxcal({"interpret", "--in", (fixtures / "hadamard.json").string(), "--backend", "exact"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto m = lines(r.out).at(0);
    const ExactScalar h = ExactScalar::inv_sqrt2();
    EXPECT_EQ(*io::value_from(m["entries"][0][0]).exact, h);
    EXPECT_EQ(*io::value_from(m["entries"][0][1]).exact, h);
    EXPECT_EQ(*io::value_from(m["entries"][1][0]).exact, h);
    EXPECT_EQ(*io::value_from(m["entries"][1][1]).exact, -h);
}

TEST(Cli, TranslateThenInterpret) {
    const auto in = (fixtures / "hbox.json").string();
    const auto out = temp("translated.json").string();
    ASSERT_EQ(zxcal({"translate", "--from", "zh", "--in", in, "--out", out}).code, 0);
    auto a = zxcal({"interpret", "--in", in, "--backend", "exact"});
    auto b = zxcal({"interpret", "--in", out, "--backend", "exact"});
    ASSERT_EQ(a.code, 0);
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(lines(a.out).at(0), lines(b.out).at(0));
    fs::remove(out);
}

TEST(Cli, CheckRulesFullSweep) {
    auto r = zxcal({"check-rules", "--set", "all", "--samples", "200", "--tol", "1e-9", "--seed", "42"});
    EXPECT_EQ(r.code, 0);
    auto ls = lines(r.out);
    ASSERT_FALSE(ls.empty());
    EXPECT_EQ(ls.back()["summary"], true);
    EXPECT_EQ(ls.back()["failed"], 0);
    EXPECT_EQ(ls.size(), 1u + ls.back()["rules"].get<std::size_t>());
}

TEST(Cli, RulesCatalogue) {
    auto r = zxcal({"rules", "--set", "legacy"});
    ASSERT_EQ(r.code, 0);
    auto ls = lines(r.out);
    EXPECT_EQ(ls.size(), 25u);
    bool found = false;
    for (const auto& l : ls)
        if (l["name"] == "2o") found = !l["side_condition"].get<std::string>().empty();
    EXPECT_TRUE(found);
}

TEST(Cli, SimplifyAndReplay) {
    auto r = zxcal({"simplify", "--in", (fixtures / "z_chain.json").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    auto res = lines(r.out).at(0);
    EXPECT_EQ(res["diagram"]["nodes"].size(), 1u);
    EXPECT_EQ(res["log"].size(), 2u);

    auto ok = zxcal({"replay", "--in", (fixtures / "fusion_script.json").string(), "--backend", "exact"});
    EXPECT_EQ(ok.code, 0) << ok.out << ok.err;
}

TEST(Cli, FuzzAndPRule) {
    auto f = zxcal({"fuzz", "--iterations", "20", "--seed", "3"});
    EXPECT_EQ(f.code, 0);
    EXPECT_EQ(lines(f.out).back()["violations"], 0);
    auto p = zxcal({"p-rule"});
    EXPECT_EQ(p.code, 0);
    EXPECT_EQ(lines(p.out).at(0)["proportional"], true);
    EXPECT_EQ(zxcal({"p-rule", "--alpha", "0", "--beta", "0", "--gamma", "0"}).code, 2);
}

TEST(Cli, ExitCodesUnderFaults) {
    EXPECT_EQ(zxcal({}).code, 2);
    EXPECT_EQ(zxcal({"frobnicate"}).code, 2);
    EXPECT_EQ(zxcal({"interpret"}).code, 2);
    EXPECT_EQ(zxcal({"interpret", "--in", "/definitely/not/here.json"}).code, 2);
    EXPECT_EQ(zxcal({"check-rules", "--set", "bogus"}).code, 2);
    EXPECT_EQ(zxcal({"check-rules", "--tol", "-1"}).code, 2);
    EXPECT_EQ(zxcal({"interpret", "--in", (fixtures / "hadamard.json").string(), "--backend", "quantum"}).code, 2);
    EXPECT_EQ(zxcal({"--capacity", "99", "interpret", "--in", (fixtures / "hadamard.json").string()}).code, 2);

    const auto junk = temp("junk.json");
    std::ofstream(junk) << "{ not json";
    EXPECT_EQ(zxcal({"interpret", "--in", junk.string()}).code, 2);
    std::ofstream(junk) << R"({"nodes":[{"id":"a","kind":"H","n":1,"m":1}],"inputs":[{"node":"a","port":0}],"outputs":[]})";
    auto r = zxcal({"interpret", "--in", junk.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("unwired"), std::string::npos);

    // Translation rejects ZX-only generators.
    EXPECT_EQ(zxcal({"translate", "--from", "zh", "--in", (fixtures / "hadamard.json").string()}).code, 2);

    // A script whose steps disagree is a verification failure, not a usage error.
    const auto bad = temp("bad_script.json");
    json s = {{"name", "bad"},
              {"steps", {io::to_json(z_spider(1, 1, Value(2))), io::to_json(z_spider(1, 1, Value(3)))}},
              {"rules", {nullptr}}};
    std::ofstream(bad) << s.dump();
    EXPECT_EQ(zxcal({"replay", "--in", bad.string()}).code, 1);
    fs::remove(junk);
    fs::remove(bad);
}

TEST(Cli, CapacityFromEnvironment) {
    const auto wide = temp("wide.json");
    std::ofstream(wide) << io::to_json(identity(5)).dump();
    setenv("ZXCAL_CAPACITY", "4", 1);
    auto r = zxcal({"interpret", "--in", wide.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("CapacityExceeded"), std::string::npos) << r.err;
    unsetenv("ZXCAL_CAPACITY");
    EXPECT_EQ(zxcal({"interpret", "--in", wide.string()}).code, 0);
    capacity_override() = 0;
    fs::remove(wide);
}
