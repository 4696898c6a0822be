#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <nomasec/params.hpp>

using namespace nomasec;

TEST(Params, DefaultsMatchSimulationTable) {
    SystemParams p;
    EXPECT_EQ(p.n_vehicles, 40);
    EXPECT_EQ(p.m_tasks, 10);
    EXPECT_EQ(p.quad_nodes, 500);
    EXPECT_DOUBLE_EQ(p.cell_radius_m, 500.0);
    EXPECT_DOUBLE_EQ(p.center_radius_m, 300.0);
    EXPECT_EQ(p.bs_antennas, 10);
    EXPECT_DOUBLE_EQ(p.bandwidth_hz, 1e6);
    EXPECT_DOUBLE_EQ(p.p_an_dbm, 40.0);
    EXPECT_DOUBLE_EQ(p.p_center_dbm, 10.0);
    EXPECT_DOUBLE_EQ(p.noise_density_dbm_hz, -174.0);
    EXPECT_DOUBLE_EQ(p.f_mec_hz, 5e10);
    EXPECT_DOUBLE_EQ(p.f_local_hz, 5e8);
    EXPECT_DOUBLE_EQ(p.cycles_per_bit, 1000.0);
    EXPECT_DOUBLE_EQ(p.task_bits, 1e5);
    EXPECT_DOUBLE_EQ(p.path_loss_exp, 3.0);
    EXPECT_NO_THROW(p.validate());
}

TEST(Params, UnitConversions) {
    EXPECT_DOUBLE_EQ(dbm_to_watts(30.0), 1.0);
    EXPECT_DOUBLE_EQ(dbm_to_watts(0.0), 1e-3);
    EXPECT_NEAR(watts_to_dbm(dbm_to_watts(17.3)), 17.3, 1e-12);
    SystemParams p;
    // -174 dBm/Hz over 1 MHz = -114 dBm
    EXPECT_NEAR(watts_to_dbm(p.noise_power_w()), -114.0, 1e-9);
    EXPECT_DOUBLE_EQ(p.p_an_per_antenna_w(), 10.0 / 9.0);
}

TEST(Params, SerializeRoundTrip) {
    SystemParams p;
    p.p_edge_dbm = 13.25;
    p.channel_variances[3] = 0.7;
    p.an_mode = AnMode::geometric;
    p.rng_seed = 0xfffffffffffffff1ULL;
    auto q = load_params(serialize_params(p));
    EXPECT_TRUE(q == p);
    EXPECT_EQ(q.rng_seed, p.rng_seed);
    EXPECT_DOUBLE_EQ(q.channel_variances[3], 0.7);
}

TEST(Params, ParsesCommentsAndLastKeyWins) {
    auto p = load_params("# header\np_edge_dbm = 5  # trailing\n\np_edge_dbm=7\nvariance.be = 2\n");
    EXPECT_DOUBLE_EQ(p.p_edge_dbm, 7.0);
    EXPECT_DOUBLE_EQ(p.variance(Link::be), 2.0);
    EXPECT_DOUBLE_EQ(p.rate(Link::be), 0.5);
}

TEST(Params, RejectsBadInput) {
    EXPECT_THROW(load_params("no_such_key = 1"), ConfigError);
    EXPECT_THROW(load_params("variance.nowhere = 1"), ConfigError);
    EXPECT_THROW(load_params("p_edge_dbm"), ConfigError);
    EXPECT_THROW(load_params("p_edge_dbm = abc"), ConfigError);
    EXPECT_THROW(load_params("bs_antennas = 2"), ConfigError);
    EXPECT_THROW(load_params("center_radius_m = 600"), ConfigError);
    EXPECT_THROW(load_params("sop_tolerance = 0"), ConfigError);
    EXPECT_THROW(load_params("an_mode = sometimes"), ConfigError);
}

TEST(Params, ResolutionOrder) {
    namespace fs = std::filesystem;
    auto path = fs::temp_directory_path() / "nomasec_params_test.cfg";
    {
        std::ofstream out(path);
        out << "p_edge_dbm = 3\nm_tasks = 4\n";
    }
    ::setenv(kConfigEnvVar, path.c_str(), 1);
    auto from_env = resolve_params(std::nullopt, {});
    EXPECT_DOUBLE_EQ(from_env.p_edge_dbm, 3.0);
    EXPECT_EQ(from_env.m_tasks, 4);
    auto overridden = resolve_params(std::nullopt, {{"m_tasks", "6"}});
    EXPECT_EQ(overridden.m_tasks, 6);
    EXPECT_DOUBLE_EQ(overridden.p_edge_dbm, 3.0);
    ::unsetenv(kConfigEnvVar);
    EXPECT_DOUBLE_EQ(resolve_params(std::nullopt, {}).p_edge_dbm, SystemParams{}.p_edge_dbm);
    EXPECT_THROW(resolve_params(std::string("/nonexistent/file.cfg"), {}), ConfigError);
    fs::remove(path);
}
