#include "levychaos/cli.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace levychaos;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<json> json_lines(const std::string& text) {
    std::vector<json> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) lines.push_back(json::parse(line));
    }
    return lines;
}

std::string config(const std::string& name) { return std::string(LEVYCHAOS_SOURCE_DIR) + "/configs/" + name; }

}  // namespace

TEST(Cli, ExpandTwoFirstOrderFactors) {
    const auto r = run({"expand", "--m", "2", "--degrees", "1,1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto lines = json_lines(r.out);
    ASSERT_EQ(lines.size(), 3u);
    for (const auto& l : lines) EXPECT_EQ(l["coefficient"], "1");
    EXPECT_EQ(lines[0]["degree"], 2);
    EXPECT_EQ(lines[1]["n"], json({{"1,2", 1}}));
    EXPECT_EQ(lines[2]["l"], json({{"1,2", 1}}));
    EXPECT_EQ(lines[2]["values"].size(), 1u);
    EXPECT_EQ(lines[0]["values"].size(), 64u);
}

TEST(Cli, ExpandSingleFactorIsIdentity) {
    const auto r = run({"expand", "--degrees", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto lines = json_lines(r.out);
    ASSERT_EQ(lines.size(), 1u);
    EXPECT_EQ(lines[0]["degree"], 1);
    EXPECT_TRUE(lines[0]["l"].empty());
}

TEST(Cli, ExpandKeysUseOriginalFactorNumbers) {
    // the scalar factor 2 drops out; factors 1 and 3 remain
    const auto r = run({"expand", "--degrees", "1,0,1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto lines = json_lines(r.out);
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[2]["l"], json({{"1,3", 1}}));
}

TEST(Cli, ExpandIgnoresSeed) {
    const auto a = run({"expand", "--degrees", "2,1", "--seed", "1"});
    const auto b = run({"expand", "--degrees", "2,1", "--seed", "999"});
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, ExpandTable) {
    const auto r = run({"expand", "--degrees", "3,2", "--format", "table"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("coefficient"), std::string::npos);
    EXPECT_NE(r.out.find("(1,2)=2"), std::string::npos);
    std::size_t rows = 0;
    for (char c : r.out) rows += c == '\n';
    EXPECT_EQ(rows, 7u);
}

TEST(Cli, ExpandMMismatchIsConfigError) {
    const auto r = run({"expand", "--m", "3", "--degrees", "1,1"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("--m"), std::string::npos);
}

TEST(Cli, VerifyProductDefaultConfig) {
    const auto r = run({"verify-product", "-c", config("default.json"), "--paths", "25"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto lines = json_lines(r.out);
    ASSERT_EQ(lines.size(), 26u);
    EXPECT_EQ(lines.back()["summary"]["failed"], 0);
    EXPECT_EQ(lines.back()["summary"]["total"], 25);
    EXPECT_TRUE(lines.front().contains("rel_err"));
}

TEST(Cli, SeedChangesPathsAndIsReproducible) {
    const auto a = run({"simulate", "--paths", "5", "--seed", "1"});
    const auto b = run({"simulate", "--paths", "5", "--seed", "1"});
    const auto c = run({"simulate", "--paths", "5", "--seed", "2"});
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, c.out);
    const auto lines = json_lines(a.out);
    ASSERT_EQ(lines.size(), 5u);
    EXPECT_TRUE(lines[0].contains("atoms"));
}

TEST(Cli, VerifyPair) {
    const auto r = run({"verify-pair", "-c", config("pair.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json_lines(r.out).back()["summary"]["total"], 7);
    EXPECT_EQ(run({"verify-pair", "--degrees", "1,1,1"}).code, 2);
}

TEST(Cli, VerifyIsometryAndExponential) {
    auto r = run({"verify-isometry", "--samples", "5000", "--format", "table"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("isometry: 6/6 passed"), std::string::npos);
    r = run({"verify-exponential", "-c", config("exponential.json"), "--samples", "5000", "--paths", "50"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
}

TEST(Cli, VerificationFailureExitsOne) {
    const auto dir = std::filesystem::temp_directory_path() / "levychaos_cli_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "strict.json").string();
    {
        std::ofstream out(path);
        out << R"({"schema": 1, "samples": 500, "tolerances": {"stat_sigma": 1e-12},
                   "isometry": {"mean_degrees": [1], "moment_degrees": [], "cross_degrees": []}})";
    }
    const auto r = run({"verify-isometry", "-c", path});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(json_lines(r.out).back()["summary"]["failed"], 1);
    std::filesystem::remove_all(dir);
}

TEST(Cli, ConfigErrorsExitTwoWithPointer) {
    const auto dir = std::filesystem::temp_directory_path() / "levychaos_cli_bad";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "bad.json").string();
    {
        std::ofstream out(path);
        out << R"({"schema": 1, "paths": -4})";
    }
    auto r = run({"verify-product", "-c", path});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("/paths"), std::string::npos);
    {
        std::ofstream out(path);
        out << "{ not json";
    }
    EXPECT_EQ(run({"verify-product", "-c", path}).code, 2);
    std::filesystem::remove_all(dir);

    EXPECT_EQ(run({"verify-product", "-c", "/nonexistent.json"}).code, 2);
    EXPECT_EQ(run({"verify-product", "--degrees", "a,b"}).code, 2);
    EXPECT_EQ(run({"verify-product", "--format", "xml"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
}

TEST(Cli, ResourceGuardExitsTwoWithGuardName) {
    // 16 points x degree 7 exceeds the default degree cap
    const auto r = run({"expand", "--degrees", "4,3"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("max_degree"), std::string::npos);
}

TEST(Cli, OutputFile) {
    const auto path = (std::filesystem::temp_directory_path() / "levychaos_cli_out.jsonl").string();
    const auto r = run({"expand", "--degrees", "1,1", "-o", path});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    EXPECT_EQ(json_lines(text.str()).size(), 3u);
    std::filesystem::remove(path);
}

TEST(Cli, HelpExitsZero) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("verify-product"), std::string::npos);
}

TEST(Cli, BinaryExitCodes) {
    const std::string bin = LEVYCHAOS_CLI_PATH;
    const auto status = [&](const std::string& args) {
        const int raw = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    EXPECT_EQ(status("expand --degrees 1,1"), 0);
    EXPECT_EQ(status("verify-product -c " + config("default.json") + " --paths 5"), 0);
    EXPECT_EQ(status("verify-product -c /nonexistent.json"), 2);
}
