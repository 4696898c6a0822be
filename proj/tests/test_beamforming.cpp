#include <gtest/gtest.h>

#include <nomasec/beamforming.hpp>

using namespace nomasec;

TEST(Beamforming, NullsTheLegitimateChannels) {
    SystemParams p;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto d = draw_channels(p, seed);
        auto w = solve_an_weights(d);
        ASSERT_FALSE(w.degenerate);
        EXPECT_NEAR(w.w.norm(), 1.0, 1e-12);
        EXPECT_LE(std::abs(w.w.dot(d.h_b_alpha)), 1e-10);
        EXPECT_LE(std::abs(w.w.dot(d.h_bb.col(0))), 1e-10);
        EXPECT_NEAR(w.leakage, std::norm(w.w.dot(d.h_b_e)), 1e-12 * (1 + w.leakage));
    }
}

TEST(Beamforming, ProjectorIsIdempotentAndBestAligned) {
    SystemParams p;
    auto d = draw_channels(p, 3);
    auto c = an_constraints(d);
    Eigen::VectorXcd once = project_out(c, d.h_b_e);
    Eigen::VectorXcd twice = project_out(c, once);
    EXPECT_LE((once - twice).norm(), 1e-12 * once.norm());
    // No unit vector in the null space collects more eavesdropper power than w.
    auto w = solve_an_weights(d);
    EXPECT_NEAR(w.leakage, once.squaredNorm(), 1e-10 * once.squaredNorm());
    Stream rng(9);
    for (int t = 0; t < 50; ++t) {
        Eigen::VectorXcd v(d.h_b_e.size());
        for (int k = 0; k < v.size(); ++k) v[k] = draw_cn(rng, 1.0);
        v = project_out(c, v);
        v /= v.norm();
        EXPECT_LE(std::norm(v.dot(d.h_b_e)), w.leakage * (1 + 1e-12));
    }
}

TEST(Beamforming, DegenerateWhenEveIsInTheConstraintSpan) {
    SystemParams p;
    auto d = draw_channels(p, 4);
    d.h_b_e = 2.0 * d.h_b_alpha;
    auto w = solve_an_weights(d);
    EXPECT_TRUE(w.degenerate);
    EXPECT_EQ(w.leakage, 0.0);
}

TEST(Beamforming, ModelLeakageAndErrors) {
    SystemParams p;
    auto d = draw_channels(p, 8);
    EXPECT_NEAR(an_leakage_model(d, p.bs_antennas), d.h_b_e.squaredNorm() / 9.0, 1e-15);
    ChannelDraw empty = d;
    empty.h_b_alpha.resize(0);
    EXPECT_THROW(an_constraints(empty), std::invalid_argument);
    Eigen::MatrixXcd bad = an_constraints(d);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(project_out(bad, d.h_b_e), std::invalid_argument);
}
