// Runs the l2ext_verify executable and checks exit codes and output files.
#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kBinary = L2EXT_VERIFY_BIN;
const fs::path kConfigs = L2EXT_CONFIG_DIR;

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("l2ext_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run(const std::string& args, const fs::path& log) {
    const std::string cmd = kBinary.string() + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Cli, PassingRunWritesReportAndCsv) {
    const auto dir = scratch("pass");
    const int code = run("convexity --config " + (kConfigs / "convexity.json").string() + " --out " + dir.string() +
                             " --format csv",
                         dir / "log.txt");
    EXPECT_EQ(code, 0) << slurp(dir / "log.txt");
    EXPECT_TRUE(fs::exists(dir / "report.json"));
    ASSERT_TRUE(fs::exists(dir / "convexity_0.csv"));
    const auto csv = slurp(dir / "convexity_0.csv");
    EXPECT_EQ(csv.rfind("grid_var,value,bound,scaled_value,verdict\n", 0), 0u);
    const auto report = slurp(dir / "report.json");
    EXPECT_NE(report.find("\"config\""), std::string::npos);
    EXPECT_NE(report.find("\"wall_clock_seconds\""), std::string::npos);
}

TEST(Cli, JsonFormatSkipsCsv) {
    const auto dir = scratch("json");
    EXPECT_EQ(run("jump-spectrum --config " + (kConfigs / "jumps_disc.json").string() + " --out " + dir.string() +
                      " --format json",
                  dir / "log.txt"),
              0);
    EXPECT_TRUE(fs::exists(dir / "report.json"));
    for (const auto& e : fs::directory_iterator(dir)) EXPECT_NE(e.path().extension(), ".csv");
}

TEST(Cli, FailedCheckExitsOne) {
    // The p-limit gap at p = 64 is larger than the 1e-6 tolerance.
    const auto dir = scratch("fail");
    EXPECT_EQ(run("p-limit --config " + (kConfigs / "p_limit.json").string() + " --out " + dir.string(), dir / "log.txt"),
              1);
    EXPECT_NE(slurp(dir / "log.txt").find("fail"), std::string::npos);
}

TEST(Cli, ConfigErrorsExitTwo) {
    const auto dir = scratch("config");
    std::ofstream(dir / "typo.json") << R"({"experiment": "ot-optimal", "degre": 4})";
    EXPECT_EQ(run("ot-optimal --config " + (dir / "typo.json").string() + " --out " + dir.string(), dir / "a.txt"), 2);
    EXPECT_NE(slurp(dir / "a.txt").find("degre"), std::string::npos);

    EXPECT_EQ(run("monotone-t --config " + (kConfigs / "convexity.json").string() + " --out " + dir.string(), dir / "b.txt"),
              2);
    EXPECT_EQ(run("ot-optimal --config " + (dir / "missing.json").string(), dir / "c.txt"), 2);
    EXPECT_EQ(run("ot-optimal", dir / "d.txt"), 2);
    EXPECT_EQ(run("ot-optimal --config " + (kConfigs / "ot_disc_flat.json").string() + " --format xml", dir / "e.txt"), 2);
}

TEST(Cli, ConditioningErrorExitsThree) {
    const auto dir = scratch("cond");
    const int code = run("ot-optimal --config " + (kConfigs / "ot_disc_shifted.json").string() + " --out " +
                             dir.string() + " --quad-order 2 --degree 60",
                         dir / "log.txt");
    EXPECT_EQ(code, 3);
    EXPECT_NE(slurp(dir / "log.txt").find("smallest pivot"), std::string::npos);
}

TEST(Cli, DegreeFlagOverridesConfig) {
    const auto dir = scratch("degree");
    EXPECT_EQ(run("ot-optimal --config " + (kConfigs / "ot_disc_flat.json").string() + " --out " + dir.string() +
                      " --degree 6",
                  dir / "log.txt"),
              0);
    EXPECT_NE(slurp(dir / "report.json").find("\"grid_var\": \"degree\""), std::string::npos);
    EXPECT_NE(slurp(dir / "report.json").find("[\n          6.0,"), std::string::npos);
}
