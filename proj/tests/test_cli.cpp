#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "metricqm/cli.hpp"
#include "metricqm/json_io.hpp"

using namespace metricqm;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name, const std::string& content) {
    const auto path = fs::temp_directory_path() / ("metricqm_test_" + name);
    std::ofstream(path) << content;
    return path;
}

}  // namespace

TEST(CliParse, DoubleList) {
    EXPECT_EQ(cli::parse_double_list("1,2.5,1e-3"), (std::vector<double>{1.0, 2.5, 1e-3}));
    EXPECT_THROW(cli::parse_double_list(""), ParseError);
    EXPECT_THROW(cli::parse_double_list("1,,2"), ParseError);
    EXPECT_THROW(cli::parse_double_list("1,x"), ParseError);
    EXPECT_THROW(cli::parse_double_list("1,2,"), ParseError);
}

TEST(CliParse, MetricSource) {
    EXPECT_EQ(cli::parse_metric_source("diag:1,2"), ComplexMatrix::diag({1.0, 2.0}));
    const auto path = temp_file("metric.json", to_json(ComplexMatrix{{2.0, 0.5}, {0.5, 1.0}}).dump());
    EXPECT_EQ(cli::parse_metric_source(path.string()), (ComplexMatrix{{2.0, 0.5}, {0.5, 1.0}}));
    EXPECT_THROW(cli::parse_metric_source("/nonexistent/metric.json"), ParseError);
}

TEST(CliValidate, ExitCodes) {
    EXPECT_EQ(run_cli({"validate", "--metric", "diag:1,2"}).code, cli::kOk);
    EXPECT_EQ(run_cli({"validate", "--metric", "diag:1,-1"}).code, cli::kFailed);
    const auto bad = temp_file("bad.json", "{\"dim\": 2, \"entries\": [[1,0]");
    EXPECT_EQ(run_cli({"validate", "--metric", bad.string()}).code, cli::kUsage);
    const auto nonherm = temp_file("nonherm.json", to_json(ComplexMatrix{{1.0, 0.5}, {0.0, 1.0}}).dump());
    const auto r = run_cli({"validate", "--metric", nonherm.string()});
    EXPECT_EQ(r.code, cli::kFailed);
    EXPECT_NE(r.out.find("NotHermitian"), std::string::npos);
}

TEST(CliValidate, ScalarMetricFlagged) {
    const auto r = run_cli({"validate", "--metric", "diag:3,3", "--format", "json"});
    EXPECT_EQ(r.code, cli::kOk);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["verdict"], "valid");
    EXPECT_DOUBLE_EQ(j["scalar_metric"].get<double>(), 3.0);
}

TEST(CliReproduce, Lambdas) {
    for (const std::string lambda : {"1", "2", "10"}) {
        const auto r = run_cli({"reproduce-paper", "--lambda", lambda, "--format", "json"});
        EXPECT_EQ(r.code, cli::kOk) << r.out << r.err;
    }
    const auto r = run_cli({"reproduce-paper", "--lambda", "10"});
    EXPECT_NE(r.out.find("0.090909090909090"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("reproduction: pass"), std::string::npos);
    EXPECT_EQ(run_cli({"reproduce-paper", "--lambda", "-1"}).code, cli::kUsage);
}

TEST(CliCertify, ExitCodes) {
    EXPECT_EQ(run_cli({"certify", "--metric", "diag:1,2", "--trials", "10", "--seed", "0"}).code,
              cli::kSignallingFound);
    const auto r = run_cli({"certify", "--metric", "diag:1,1", "--trials", "50", "--seed", "0", "--format", "json"});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_FALSE(nlohmann::json::parse(r.out)["found"].get<bool>());
    EXPECT_EQ(run_cli({"certify", "--metric", "diag:1,2", "--trials", "0"}).code, cli::kUsage);
    EXPECT_EQ(run_cli({"certify", "--metric", "diag:1,0"}).code, cli::kFailed);
}

TEST(CliCertify, SameSeedByteIdentical) {
    const std::vector<std::string> args{"certify", "--metric", "diag:1,1", "--trials", "30", "--seed", "9",
                                        "--format", "json"};
    EXPECT_EQ(run_cli(args).out, run_cli(args).out);
}

TEST(CliCertify, SeedFromEnvironment) {
    ::setenv("METRICQM_SEED", "17", 1);
    const auto r = run_cli({"certify", "--metric", "diag:1,1", "--trials", "3", "--format", "json"});
    EXPECT_EQ(nlohmann::json::parse(r.out)["seed"].get<std::uint64_t>(), 17u);
    const auto explicit_seed = run_cli({"certify", "--metric", "diag:1,1", "--trials", "3", "--seed", "4",
                                        "--format", "json"});
    EXPECT_EQ(nlohmann::json::parse(explicit_seed.out)["seed"].get<std::uint64_t>(), 4u);
    ::setenv("METRICQM_SEED", "abc", 1);
    EXPECT_EQ(run_cli({"certify", "--metric", "diag:1,1", "--trials", "3"}).code, cli::kUsage);
    ::unsetenv("METRICQM_SEED");
}

TEST(CliSweep, Csv) {
    const auto r = run_cli({"sweep", "--lambdas", "0.5,1,2", "--format", "csv"});
    ASSERT_EQ(r.code, cli::kOk);
    std::istringstream is(r.out);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(is, line)) lines.push_back(line);
    ASSERT_EQ(lines.size(), 4u);
    EXPECT_EQ(lines[0], "lambda,p_z,p_x,gap,magnitude");
    EXPECT_EQ(lines[2].substr(0, 2), "1,");
    EXPECT_EQ(run_cli({"sweep", "--lambdas", "1,0"}).code, cli::kUsage);
    EXPECT_EQ(run_cli({"sweep", "--lambdas", "1,a"}).code, cli::kUsage);
}

TEST(CliSweep, WritesOutFile) {
    const auto path = fs::temp_directory_path() / "metricqm_test_sweep.csv";
    fs::remove(path);
    const auto r = run_cli({"sweep", "--lambdas", "2", "--out", path.string()});
    ASSERT_EQ(r.code, cli::kOk);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "lambda,p_z,p_x,gap,magnitude");
}

TEST(CliNonlinearity, ExampleDefect) {
    const auto r = run_cli({"nonlinearity", "--metric", "diag:1,2", "--format", "json"});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    EXPECT_NEAR(nlohmann::json::parse(r.out)["convexity_defect"].get<double>(), 0.125, 1e-12);
}

TEST(CliAxioms, PassAndFail) {
    EXPECT_EQ(run_cli({"axioms", "--metric", "diag:1,2", "--trials", "500", "--seed", "1"}).code, cli::kOk);
    EXPECT_EQ(run_cli({"axioms", "--metric", "diag:1,-2", "--trials", "500", "--seed", "1"}).code, cli::kFailed);
}

TEST(CliUsage, BadArguments) {
    EXPECT_EQ(run_cli({}).code, cli::kUsage);
    EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kUsage);
    EXPECT_EQ(run_cli({"validate"}).code, cli::kUsage);
    EXPECT_EQ(run_cli({"validate", "--metric", "diag:1,2", "--format", "xml"}).code, cli::kUsage);
    EXPECT_EQ(run_cli({"certify", "--metric", "diag:1,2", "--seed", "-3"}).code, cli::kUsage);
}
