#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "nomasec_cli_test";

int run(const std::string& args) {
    std::string cmd = std::string(NOMASEC_SIM_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string path(const std::string& name) { return (kWork / name).string(); }

std::string data_rows(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') out += line + '\n';
    return out;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override { fs::create_directories(kWork); }
};

const std::string kSmall = "--set n_vehicles=12 --reps 2 --values 0,20 --seed 3 --quiet";

}  // namespace

TEST_F(Cli, UsageErrorsExitWithOne) {
    EXPECT_EQ(run(""), 1);
    EXPECT_EQ(run("nonsense"), 1);
    EXPECT_EQ(run("sweep --var speed --out " + path("x.csv")), 1);
    EXPECT_EQ(run("sweep --set no_such_key=1 --out " + path("x.csv")), 1);
    EXPECT_EQ(run("sweep --config /nonexistent.cfg --out " + path("x.csv")), 1);
    EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, SweepThenPlot) {
    ASSERT_EQ(run("sweep " + kSmall + " --schemes gpm-noma,gpm-oma --out " + path("s.csv")), 0);
    auto csv = slurp(path("s.csv"));
    EXPECT_NE(csv.find("# param.n_vehicles=12"), std::string::npos);
    EXPECT_NE(csv.find("# seed=3"), std::string::npos);
    ASSERT_EQ(run("plot --kind fig6 --in " + path("s.csv") + " --out " + path("a.svg")), 0);
    ASSERT_EQ(run("plot --kind fig6 --in " + path("s.csv") + " --out " + path("b.svg")), 0);
    EXPECT_EQ(slurp(path("a.svg")), slurp(path("b.svg")));
}

TEST_F(Cli, EmptyCsvIsAnErrorAndWritesNothing) {
    std::ofstream(path("empty.csv")).close();
    fs::remove(path("none.svg"));
    EXPECT_EQ(run("plot --kind fig3 --in " + path("empty.csv") + " --out " + path("none.svg")), 1);
    EXPECT_FALSE(fs::exists(path("none.svg")));
}

TEST_F(Cli, SplitSweepPoolsToTheFullRun) {
    ASSERT_EQ(run("sweep " + kSmall + " --out " + path("full.csv")), 0);
    ASSERT_EQ(run("sweep --set n_vehicles=12 --values 0,20 --seed 3 --quiet --reps 1 --out " + path("p1.csv") +
                  " --reps-out " + path("r1.csv")),
              0);
    ASSERT_EQ(run("sweep --set n_vehicles=12 --values 0,20 --seed 3 --quiet --reps 1 --first-rep 1 --out " +
                  path("p2.csv") + " --reps-out " + path("r2.csv")),
              0);
    ASSERT_EQ(run("pool --in " + path("r2.csv") + " " + path("r1.csv") + " --out " + path("pooled.csv")), 0);
    EXPECT_EQ(data_rows(slurp(path("pooled.csv"))), data_rows(slurp(path("full.csv"))));
}

TEST_F(Cli, ConfigFileFromEnvironment) {
    {
        std::ofstream cfg(path("env.cfg"));
        cfg << "n_vehicles = 12\n";
    }
    std::string env = "NOMASEC_CONFIG=" + path("env.cfg") + " ";
    std::string cmd = env + NOMASEC_SIM_PATH + " sweep --reps 1 --values 10 --quiet --out " + path("env.csv") +
                      " > /dev/null 2>&1";
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    EXPECT_NE(slurp(path("env.csv")).find("# param.n_vehicles=12"), std::string::npos);
}

TEST_F(Cli, QuickValidationAndSinglePairTools) {
    EXPECT_EQ(run("validate --grid quick --trials 20000 --out " + path("v.csv")), 0);
    auto v1 = slurp(path("v.csv"));
    EXPECT_EQ(run("validate --grid quick --trials 20000 --out " + path("v.csv")), 0);
    EXPECT_EQ(slurp(path("v.csv")), v1);
    EXPECT_NE(v1.find("# passed=true"), std::string::npos);
    EXPECT_EQ(run("pair-demo --seed 4 --out " + path("pairs.csv")), 0);
    EXPECT_EQ(slurp(path("pairs.csv")).rfind("id,l_m,speed_mps,group,pair_id", 0), 0u);
    EXPECT_EQ(run("optimize-one --scheme noma-an-ga --trace " + path("trace.csv")), 0);
    EXPECT_EQ(slurp(path("trace.csv")).rfind("generation,best_d_beta,mean_fitness", 0), 0u);
    EXPECT_EQ(run("optimize-one --scheme oma"), 0);
}

TEST_F(Cli, FailedValidationExitsWithTwo) {
    // With a single Monte Carlo trial the estimates are 0 or 1, far from the analytic values.
    EXPECT_EQ(run("validate --grid quick --trials 1 --set p_an_dbm=10 --set secrecy_rate_target=1 --out " +
                  path("bad.csv")),
              2);
}
