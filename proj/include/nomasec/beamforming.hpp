// Null-steering artificial-noise weights.
//
// Geometric mode nulls the BS->relay channel and the AN leakage into the BS
// receive antenna, then points the remaining degrees of freedom at the
// eavesdropper. Model mode uses the statistical leakage H_be/(K-1) that the
// analytic outage expressions are built on.
#pragma once

#include <stdexcept>

#include <Eigen/Dense>

#include "channel.hpp"
#include "params.hpp"

namespace nomasec {

struct AnWeights {
    Eigen::VectorXcd w;      // unit norm, or zero when degenerate
    double leakage = 0.0;    // |w^H h_be|^2
    AnMode mode = AnMode::geometric;
    bool degenerate = false;
};

inline constexpr double kRankTolerance = 1e-12;

/// Orthogonal projection of `h` onto the null space of the columns of `constraints`.
inline Eigen::VectorXcd project_out(const Eigen::MatrixXcd& constraints, const Eigen::VectorXcd& h) {
    if (constraints.cols() == 0) return h;
    if (!constraints.allFinite()) throw std::invalid_argument("project_out: non-finite constraint matrix");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(constraints);
    qr.setThreshold(kRankTolerance);
    const auto rank = qr.rank();
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(constraints.rows(), rank);
    return h - q * (q.adjoint() * h);
}

/// w = Lambda h_be / ||Lambda h_be|| with Lambda the projector onto null(constraints).
inline AnWeights solve_an_weights(const Eigen::MatrixXcd& constraints, const Eigen::VectorXcd& h_be) {
    AnWeights out;
    out.mode = AnMode::geometric;
    Eigen::VectorXcd proj = project_out(constraints, h_be);
    double norm = proj.norm();
    double scale = std::max(h_be.norm(), 1.0);
    if (norm <= kRankTolerance * scale) {
        out.w = Eigen::VectorXcd::Zero(h_be.size());
        out.leakage = 0.0;
        out.degenerate = true;
        return out;
    }
    out.w = proj / norm;
    out.leakage = std::norm(out.w.dot(h_be));  // dot() conjugates the first argument
    return out;
}

/// Constraint matrix for geometric mode: [h_b_alpha, h_bb(:,0)] (the SI column
/// is omitted when the draw carries no SI matrix).
inline Eigen::MatrixXcd an_constraints(const ChannelDraw& draw) {
    if (draw.h_b_alpha.size() == 0) throw std::invalid_argument("an_constraints: draw has no BS->relay channel");
    const auto n = draw.h_b_alpha.size();
    const bool with_si = draw.h_bb.cols() > 0;
    Eigen::MatrixXcd c(n, with_si ? 2 : 1);
    c.col(0) = draw.h_b_alpha;
    if (with_si) c.col(1) = draw.h_bb.col(0);
    return c;
}

inline AnWeights solve_an_weights(const ChannelDraw& draw) {
    if (draw.h_b_e.size() < 2) throw std::invalid_argument("solve_an_weights: need K >= 3");
    return solve_an_weights(an_constraints(draw), draw.h_b_e);
}

/// Statistical leakage |w^H h_be|^2 = H_be / (K-1).
inline double an_leakage_model(const ChannelDraw& draw, int k_antennas) {
    if (k_antennas < 2) throw std::invalid_argument("an_leakage_model: need K >= 2");
    return sum_gain(draw.h_b_e) / (k_antennas - 1);
}

/// AN power received by the eavesdropper: P_B d_be^-v |w^H h_be|^2.
/// Model mode equals P_b d_be^-v H_be with P_b = P_B/(K-1).
inline double an_power_at_eve(const ChannelDraw& draw, const LinkGeometry& geo, const SystemParams& params,
                              AnMode mode) {
    double leak = mode == AnMode::model ? an_leakage_model(draw, params.bs_antennas)
                                        : solve_an_weights(draw).leakage;
    return params.p_an_w() * std::pow(geo.d_b_e, -params.path_loss_exp) * leak;
}

}  // namespace nomasec
