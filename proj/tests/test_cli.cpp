#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override
    {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("ballpdf_cli_" + std::string(info->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(const std::string& args, const fs::path& out_dir = {})
    {
        const fs::path d = out_dir.empty() ? dir_ : out_dir;
        const std::string cmd = "BALLPDF_OUTPUT_DIR='" + d.string() + "' '" + BALLPDF_CLI_PATH + "' " + args + " > '"
            + (dir_ / "stdout.txt").string() + "' 2> '" + (dir_ / "stderr.txt").string() + "'";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string read(const fs::path& p) const
    {
        std::ifstream in(p.is_absolute() ? p : dir_ / p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
};

} // namespace

TEST_F(Cli, PdfWritesGridAndManifest)
{
    ASSERT_EQ(run("pdf -n 3 -R 1 --grid 201"), 0);
    std::istringstream csv(read("pdf.csv"));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "s,analytic_density");
    int rows = 0;
    double s = 0, p = 0, last_s = 0;
    while (std::getline(csv, line)) {
        ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf", &s, &p), 2);
        if (rows == 100) EXPECT_NEAR(p, 15.0 / 16.0, 1e-13);
        last_s = s;
        ++rows;
    }
    EXPECT_EQ(rows, 201);
    EXPECT_EQ(last_s, 2.0);
    const auto m = json::parse(read("pdf.csv.manifest.json"));
    EXPECT_EQ(m["subcommand"], "pdf");
    EXPECT_EQ(m["method"], "uniform/reg-inc-beta");
    EXPECT_EQ(m["parameters"]["dimension"], 3);
    EXPECT_EQ(m["parameters"]["grid"], 201);
    EXPECT_TRUE(m.contains("version"));
    EXPECT_TRUE(m.contains("seed"));
    EXPECT_TRUE(m["duration_seconds"].is_number());
    EXPECT_EQ(m["outputs"].size(), 1u);
}

TEST_F(Cli, PdfRepresentationsAgree)
{
    ASSERT_EQ(run("pdf -n 4 --grid 33 -o a.csv"), 0);
    ASSERT_EQ(run("pdf -n 4 --grid 33 --representation even-series -o b.csv"), 0);
    std::istringstream a(read("a.csv")), b(read("b.csv"));
    std::string la, lb;
    std::getline(a, la);
    std::getline(b, lb);
    while (std::getline(a, la) && std::getline(b, lb)) {
        double sa, pa, sb, pb;
        std::sscanf(la.c_str(), "%lf,%lf", &sa, &pa);
        std::sscanf(lb.c_str(), "%lf,%lf", &sb, &pb);
        EXPECT_EQ(sa, sb);
        EXPECT_NEAR(pa, pb, 1e-12);
    }
}

TEST_F(Cli, CompareReportsAndPasses)
{
    ASSERT_EQ(run("compare -n 3 --pairs 200000 --bins 32 --seed 42"), 0);
    const auto j = json::parse(read("stdout.txt"));
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_EQ(j["dof"], 31);
    const auto r = json::parse(read("compare.csv.report.json"));
    EXPECT_EQ(r["p_value"], j["p_value"]);
    const std::string csv = read("compare.csv");
    EXPECT_EQ(csv.rfind("s_lo,s_hi,count,empirical_density,analytic_density\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 33);
    const auto m = json::parse(read("compare.csv.manifest.json"));
    EXPECT_EQ(m["seed"], 42);
    EXPECT_EQ(m["outputs"].size(), 2u);
}

TEST_F(Cli, CompareFailsAgainstImpossibleThreshold)
{
    EXPECT_EQ(run("compare -n 2 --pairs 20000 --bins 16 --threshold 1.0000001"), 4);
}

TEST_F(Cli, DeterministicAcrossRunsAndThreads)
{
    const fs::path a = dir_ / "a", b = dir_ / "b";
    ASSERT_EQ(run("compare -n 3 --density gauss:0.3 --pairs 300000 --seed 7 --threads 1", a), 0);
    ASSERT_EQ(run("compare -n 3 --density gauss:0.3 --pairs 300000 --seed 7 --threads 3", b), 0);
    EXPECT_EQ(read(a / "compare.csv"), read(b / "compare.csv"));
    EXPECT_EQ(read(a / "compare.csv.report.json"), read(b / "compare.csv.report.json"));
}

TEST_F(Cli, MomentAndEnergy)
{
    ASSERT_EQ(run("moment -n 3 -m 1"), 0);
    EXPECT_NEAR(json::parse(read("moment.json"))["value"].get<double>(), 36.0 / 35.0, 1e-15);
    ASSERT_EQ(run("moment -n 3 -m 2 --kind gaussian --sigma 1"), 0);
    EXPECT_NEAR(json::parse(read("moment.json"))["value"].get<double>(), 6.0, 1e-13);
    ASSERT_EQ(run("energy -n 3 --kind coulomb --count 10"), 0);
    EXPECT_NEAR(json::parse(read("energy.json"))["value"].get<double>(), 54.0, 1e-12);
    ASSERT_EQ(run("energy --kind nunubar -R 1 --rc 0.01 --count 2 --a2 1"), 0);
    const double ratio = json::parse(read("energy.json"))["ratio_to_leading"].get<double>();
    EXPECT_GE(ratio, 0.98);
    EXPECT_LE(ratio, 1.0);
}

TEST_F(Cli, ExitCodes)
{
    EXPECT_EQ(run("pdf -n 3 --density bogus"), 2);
    EXPECT_EQ(run("pdf"), 2);
    EXPECT_EQ(run("frobnicate"), 2);
    EXPECT_EQ(run("pdf -n 1 --density monomial:2"), 3);
    EXPECT_EQ(run("moment -n 3 -m -3"), 3);
    EXPECT_EQ(run("energy -n 2 --kind coulomb"), 3);
    EXPECT_EQ(run("compare -n 10 -R 1 --density gauss:50 --pairs 1000"), 4);
    EXPECT_NE(read("stderr.txt").find("error:"), std::string::npos);
}
