#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include <nomasec/montecarlo.hpp>
#include <nomasec/secrecy_analytic.hpp>

using namespace nomasec;

namespace {

SystemParams moderate_params() {
    SystemParams p;
    p.p_an_dbm = 10.0;
    p.p_edge_dbm = 10.0;
    p.secrecy_rate_target = 1.0;
    return p;
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST(MonteCarlo, SerialAndParallelAreBitIdentical) {
    auto p = moderate_params();
    auto geo = make_geometry(250, 330, 200, p);
    for (long trials : {1L, 4095L, 4097L, 30001L}) {
        McConfig serial;
        serial.trials = trials;
        serial.seed = 5;
        McConfig parallel = serial;
        parallel.threads = 4;
        parallel.batch_size = 17;
        auto a = mc_sop(geo, {0.3, 0, 0}, p, serial);
        auto b = mc_sop(geo, {0.3, 0, 0}, p, parallel);
        EXPECT_TRUE(bit_equal(a.alpha.mean, b.alpha.mean));
        EXPECT_TRUE(bit_equal(a.beta.mean, b.beta.mean));
        EXPECT_TRUE(bit_equal(a.sops.mean, b.sops.mean));
        EXPECT_TRUE(bit_equal(a.sops.std_error, b.sops.std_error));
        auto da = mc_delay(geo, {0.3, 4, 6}, p, serial);
        auto db = mc_delay(geo, {0.3, 4, 6}, p, parallel);
        EXPECT_TRUE(bit_equal(da.d_beta.mean, db.d_beta.mean));
        EXPECT_TRUE(bit_equal(da.d_alpha.std_error, db.d_alpha.std_error));
        EXPECT_EQ(da.infeasible_beta, db.infeasible_beta);
    }
}

TEST(MonteCarlo, AgreesWithAnalyticSop) {
    auto p = moderate_params();
    auto geo = make_geometry(250, 330, 200, p);
    for (bool an : {true, false})
        for (double lam : {0.1, 0.3, 0.45}) {
            McConfig mc;
            mc.trials = 200000;
            mc.an_enabled = an;
            auto r = mc_sop(geo, {lam, 0, 0}, p, mc);
            auto a = evaluate_sop(make_sop_inputs(p, geo, lam, Access::noma, an));
            EXPECT_NEAR(r.alpha.mean, a.p_sop_alpha, 5 * r.alpha.std_error + 1e-3) << an << " " << lam;
            EXPECT_NEAR(r.beta.mean, a.p_sop_beta, 5 * r.beta.std_error + 1e-3) << an << " " << lam;
            EXPECT_LE(r.sops.mean, r.alpha.mean + r.beta.mean + 1e-12);
            EXPECT_GE(r.sops.mean, std::max(r.alpha.mean, r.beta.mean));
        }
}

TEST(MonteCarlo, OmaAgreesWithAnalyticSop) {
    auto p = moderate_params();
    auto geo = make_geometry(250, 330, 200, p);
    McConfig mc;
    mc.trials = 200000;
    mc.access = Access::oma;
    auto r = mc_sop(geo, {0.25, 0, 0}, p, mc);
    auto a = evaluate_sop(make_sop_inputs(p, geo, 0.25, Access::oma, true));
    EXPECT_NEAR(r.alpha.mean, a.p_sop_alpha, 5 * r.alpha.std_error + 1e-3);
    EXPECT_NEAR(r.beta.mean, a.p_sop_beta, 5 * r.beta.std_error + 1e-3);
}

TEST(MonteCarlo, PerfectChannelsNeverOutage) {
    SystemParams p;
    auto geo = make_geometry(100, 400, -300, p);
    McConfig mc;
    mc.trials = 1000;
    mc.channel_override = [](ChannelDraw& d) {
        d.h_alpha_e = 0.0;
        d.h_beta_e = 0.0;
        d.h_alpha_b = 1.0;
        d.h_beta_alpha = 1.0;
    };
    auto r = mc_sop(geo, {0.2, 0, 0}, p, mc);
    EXPECT_EQ(r.alpha.mean, 0.0);
    EXPECT_EQ(r.beta.mean, 0.0);
    EXPECT_EQ(r.sops.mean, 0.0);
}

TEST(MonteCarlo, LocalExecutionDelayIsDeterministic) {
    SystemParams p;
    auto geo = make_geometry(100, 400, -300, p);
    McConfig mc;
    mc.trials = 500;
    auto d = mc_delay(geo, {0.2, 10, 10}, p, mc);
    EXPECT_DOUBLE_EQ(d.d_beta.mean, 2.0);
    EXPECT_DOUBLE_EQ(d.d_alpha.mean, 2.0);
    EXPECT_EQ(d.d_beta.std_error, 0.0);
    EXPECT_EQ(d.infeasible_beta, 0.0);
    EXPECT_THROW(mc_delay(geo, {0.2, 11, 0}, p, mc), std::invalid_argument);
}

TEST(MonteCarlo, GeometricAnModeRuns) {
    auto p = moderate_params();
    p.an_mode = AnMode::geometric;
    auto geo = make_geometry(250, 330, 200, p);
    McConfig mc;
    mc.trials = 5000;
    mc.an_mode = AnMode::geometric;
    auto r = mc_sop(geo, {0.3, 0, 0}, p, mc);
    EXPECT_GE(r.sops.mean, 0.0);
    EXPECT_LE(r.sops.mean, 1.0);
}

TEST(MonteCarlo, TraceIsCapped) {
    SystemParams p;
    auto geo = make_geometry(100, 400, -300, p);
    auto path = std::filesystem::temp_directory_path() / "nomasec_mc_trace.csv";
    McConfig mc;
    mc.trials = 12000;
    mc.trace_path = path.string();
    mc_sop(geo, {0.2, 0, 0}, p, mc);
    std::ifstream in(path);
    long lines = 0;
    for (std::string s; std::getline(in, s);) ++lines;
    EXPECT_EQ(lines, kMcTraceCap + 1);
    std::filesystem::remove(path);
}

TEST(MonteCarlo, RejectsBadConfig) {
    SystemParams p;
    auto geo = make_geometry(100, 400, -300, p);
    McConfig mc;
    mc.trials = 0;
    EXPECT_THROW(mc_sop(geo, {0.2, 0, 0}, p, mc), std::invalid_argument);
}
