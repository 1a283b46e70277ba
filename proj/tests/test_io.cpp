#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "conefoliate/io.hpp"

using namespace conefoliate;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("conefoliate_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::string& sub, const std::string& cfg, const fs::path& dir, std::optional<int> threads = {}) {
    GlobalOverrides ov;
    ov.output_dir = dir.string();
    ov.threads = threads;
    std::ostringstream log;
    return run_command(sub, cfg, ov, log);
}

json report_without_run(const fs::path& p) {
    json j = json::parse(slurp(p));
    j.erase("run");
    return j;
}

}  // namespace

TEST(Io, Format17) {
    EXPECT_EQ(format17(0.1), "0.10000000000000001");
    EXPECT_EQ(format17(-2.0), "-2");
    EXPECT_EQ(std::stod(format17(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Io, AtomicWriteLeavesNoTemporaries) {
    const fs::path d = scratch("atomic");
    write_file_atomic(d / "sub" / "a.txt", "hello\n");
    write_file_atomic(d / "sub" / "a.txt", "world\n");
    EXPECT_EQ(slurp(d / "sub" / "a.txt"), "world\n");
    int n = 0;
    for (const auto& e : fs::directory_iterator(d / "sub")) n += e.is_regular_file() ? 1 : 0;
    EXPECT_EQ(n, 1);
}

TEST(Io, SchemaViolationsExitTwo) {
    const fs::path d = scratch("schema");
    EXPECT_EQ(run("spectrum", R"({"p":3,"q":3,"bogus":1})", d), kExitSchema);
    EXPECT_EQ(run("spectrum", R"({"p":0})", d), kExitSchema);
    EXPECT_EQ(run("spectrum", R"({"p":"three"})", d), kExitSchema);
    EXPECT_EQ(run("spectrum", R"({"p":2,"q":3})", d), kExitSchema);  // not minimizing
    EXPECT_EQ(run("spectrum", "{not json", d), kExitSchema);
    EXPECT_EQ(run("solve", R"({"g_modes":[{"j":3,"k":2,"coefficient":1e-3}]})", d), kExitSchema);
    EXPECT_EQ(run("solve", R"({"delta":0.5})", d), kExitSchema);
    EXPECT_EQ(run("verify", R"({"suite":["no-such-check"]})", d), kExitSchema);
    EXPECT_EQ(run("frobnicate", "{}", d), kExitSchema);
    EXPECT_TRUE(fs::is_empty(d));
}

TEST(Io, SpectrumReproducesTableClasses) {
    const fs::path d = scratch("spectrum");
    ASSERT_EQ(run("spectrum", R"({"p":3,"q":3,"mu_max":30})", d), kExitOk);
    const std::string csv = slurp(d / "spectrum.csv");
    EXPECT_EQ(csv.rfind("# conefoliate-csv v1 spectrum\n", 0), 0u);
    const json rep = json::parse(slurp(d / "spectrum_report.json"));
    const auto& de = rep["result"]["distinct_eigenvalues"];
    ASSERT_GE(de.size(), 4u);
    EXPECT_EQ(de[0]["mu"], "-6");
    EXPECT_EQ(de[0]["class"], "dilation");
    EXPECT_EQ(de[1]["mu"], "0");
    EXPECT_EQ(de[1]["class"], "translation");
    EXPECT_EQ(de[2]["mu"], "6");
    EXPECT_EQ(de[2]["class"], "rotation");
    EXPECT_EQ(de[3]["mu"], "10");
    EXPECT_EQ(de[3]["class"], "graphical");
    EXPECT_TRUE(rep.contains("versions"));
    EXPECT_EQ(rep["config"]["mu_max"], 30.0);
    EXPECT_TRUE(rep["run"].contains("wall_seconds"));
}

TEST(Io, SolveReplayIsByteIdentical) {
    const std::string cfg =
        R"({"grid":{"N":160},"g_modes":[{"j":3,"coefficient":4e-3}],"seed":7})";
    const fs::path a = scratch("replay_a"), b = scratch("replay_b");
    ASSERT_EQ(run("solve", cfg, a), kExitOk);
    ASSERT_EQ(run("solve", cfg, b, 2), kExitOk);
    EXPECT_EQ(slurp(a / "solution.csv"), slurp(b / "solution.csv"));
    EXPECT_EQ(report_without_run(a / "solve_report.json"), report_without_run(b / "solve_report.json"));
    const json rep = json::parse(slurp(a / "solve_report.json"));
    EXPECT_EQ(rep["config"]["seed"], 7);
    EXPECT_TRUE(rep["certificate"]["pass"].get<bool>());
    EXPECT_LE(rep["result"]["boundary_error"].get<double>(), 1e-12);
}

TEST(Io, CertificateFailuresExitThree) {
    const fs::path d = scratch("certificate");
    EXPECT_EQ(run("solve", R"({"grid":{"N":160},"max_iter":1,"g_modes":[{"j":3,"coefficient":4e-3}]})", d),
              kExitCertificate);
    const json rep = json::parse(slurp(d / "solve_report.json"));
    EXPECT_FALSE(rep["certificate"]["pass"].get<bool>());
    EXPECT_EQ(run("solve", R"({"grid":{"N":160},"c":1e-3,"g_modes":[{"j":3,"coefficient":4e-3}]})", d),
              kExitCertificate);
}

TEST(Io, VerifyIsThreadCountInvariant) {
    const std::string cfg = R"({"suite":["spectrum-golden-table","linear-convergence","foliation-certificate"]})";
    const fs::path a = scratch("verify_a"), b = scratch("verify_b");
    ASSERT_EQ(run("verify", cfg, a, 1), kExitOk);
    ASSERT_EQ(run("verify", cfg, b, 3), kExitOk);
    EXPECT_EQ(slurp(a / "verify_report.json").size() > 0, true);
    EXPECT_EQ(report_without_run(a / "verify_report.json"), report_without_run(b / "verify_report.json"));
}

TEST(Io, ThreadEnvironmentOverride) {
    ::setenv("CONEFOLIATE_THREADS", "3", 1);
    EXPECT_EQ(resolve_threads(1), 3);
    EXPECT_EQ(resolve_threads(1, 2), 2);
    ::setenv("CONEFOLIATE_THREADS", "zero", 1);
    EXPECT_THROW(resolve_threads(1), SchemaError);
    ::unsetenv("CONEFOLIATE_THREADS");
    EXPECT_EQ(resolve_threads(4), 4);
}

TEST(Io, CommandLineExitCodes) {
    const fs::path d = scratch("cli");
    const std::string exe = CONEFOLIATE_CLI_PATH;
    auto code = [&](const std::string& args) {
        const int st = std::system((exe + " " + args + " 2>/dev/null").c_str());
        return WEXITSTATUS(st);
    };
    EXPECT_EQ(code("profile --config-json '{\"R_max\":50}' -o " + d.string()), kExitOk);
    EXPECT_TRUE(fs::exists(d / "profile.csv"));
    EXPECT_EQ(code("profile --config-json '{\"side\":\"sideways\"}' -o " + d.string()), kExitSchema);
    EXPECT_EQ(code("spectrum --config /nonexistent.json"), kExitSchema);
    EXPECT_EQ(code("nosuchcommand"), kExitSchema);
}
