#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Result {
    int status = -1;
    std::string out;
};

Result run(const std::string& args)
{
    const std::string cmd = std::string(MANSS_TOOL) + " " + args + " 2>&1";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), n);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string fixture(const std::string& name) { return std::string(MANSS_FIXTURE_DIR) + "/" + name; }

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir = fs::temp_directory_path() / ("manss-cli-" + std::to_string(::getpid()) + "-" +
                                           ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    fs::path dir;
};

}  // namespace

TEST_F(Cli, BuildCoreToInfinity)
{
    const auto out = dir / "core.json";
    const auto r = run("build --fixture " + fixture("l3-core.chart") + " --page inf --render svg --out " +
                       out.string());
    ASSERT_EQ(r.status, 0) << r.out;
    const auto svg = slurp(dir / "core.svg");
    EXPECT_NE(svg.find("τ²"), std::string::npos);
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(slurp(out).find("\"page_infinite\": true"), std::string::npos);

    const auto ascii = run("build --fixture " + fixture("l3-core.chart") + " --page inf --log");
    ASSERT_EQ(ascii.status, 0);
    EXPECT_NE(ascii.out.find("Z/3[tau]/(tau^2)"), std::string::npos);
}

TEST_F(Cli, EmptyFixtureDrawsOnlyTheOrigin)
{
    const auto out = dir / "empty.json";
    const auto r = run("build --fixture " + fixture("empty.chart") + " --render svg --out " + out.string());
    ASSERT_EQ(r.status, 0) << r.out;
    const auto svg = slurp(dir / "empty.svg");
    std::size_t glyphs = 0;
    for (std::size_t at = svg.find("<title>"); at != std::string::npos; at = svg.find("<title>", at + 1))
        ++glyphs;
    EXPECT_EQ(glyphs, 1u);
}

TEST_F(Cli, OutputIsByteIdentical)
{
    const auto a = dir / "a.json", b = dir / "b.json";
    const std::string args = "build --fixture " + fixture("l3-core.chart") + " --page inf --render svg --weights --out ";
    ASSERT_EQ(run(args + a.string()).status, 0);
    ASSERT_EQ(run(args + b.string()).status, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_EQ(slurp(dir / "a.svg"), slurp(dir / "b.svg"));
}

TEST_F(Cli, RealBaseReportsBaseChange)
{
    const auto r = run("build --fixture " + fixture("l3-core.chart") + " --base R --page inf --render none");
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("base-change PASS"), std::string::npos);
    EXPECT_NE(r.out.find("\"base\": \"R\""), std::string::npos);
}

TEST_F(Cli, VerifyCoreAndCorrupt)
{
    const auto good = run("verify --fixture " + fixture("l3-core.chart") + " --seed 5 --count 10");
    EXPECT_EQ(good.status, 0) << good.out;
    EXPECT_EQ(good.out.rfind("seed 5\n", 0), 0u);
    EXPECT_EQ(good.out.find("FAIL"), std::string::npos);

    const auto bad = run("verify --fixture " + fixture("corrupt-sparseness.chart"));
    EXPECT_EQ(bad.status, 1);
    EXPECT_NE(bad.out.find("load FAIL (1,5) sparseness"), std::string::npos);
}

TEST_F(Cli, Cotor)
{
    const auto r = run("cotor --hopf E --s-max 3 --t-max 12 --workers 2");
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_NE(r.out.find("2\t0\t6\t2\t1"), std::string::npos);
    EXPECT_NE(r.out.find("0\t0\t0\t0\t1"), std::string::npos);
    const auto cess = run("cotor --mode cess --s-max 2 --t-max 8");
    EXPECT_EQ(cess.status, 0);
    const auto big = run("cotor --s-max 3 --t-max 16 --max-slice 2");
    EXPECT_EQ(big.status, 3) << big.out;
}

TEST_F(Cli, Query)
{
    const auto r = run("query --fixture " + fixture("l3-core.chart") + " --stem 33 --weight 20");
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_NE(r.out.find("tau-stable no"), std::string::npos);
    EXPECT_NE(r.out.find("s=7 Z/3"), std::string::npos);
    const auto chart = dir / "c.json";
    ASSERT_EQ(run("build --fixture " + fixture("l3-core.chart") + " --page inf --render none --out " +
                  chart.string())
                  .status,
              0);
    const auto q = run("query --chart " + chart.string() + " --stem 0 --weight 0");
    EXPECT_EQ(q.status, 0);
    EXPECT_NE(q.out.find("tau-stable yes"), std::string::npos);
    EXPECT_EQ(run("query --stem 3 --weight 1").status, 2);
}

TEST_F(Cli, UsageErrors)
{
    EXPECT_EQ(run("build --fixture " + fixture("l3-core.chart") + " --page 4").status, 2);
    EXPECT_EQ(run("build --fixture " + fixture("l3-core.chart") + " --prime 2").status, 2);
    EXPECT_EQ(run("build --fixture /nonexistent/x.chart").status, 2);
    EXPECT_EQ(run("frobnicate").status, 2);
}
