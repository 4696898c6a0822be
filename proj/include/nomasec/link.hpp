// Per-realization SINRs, secure rates, and the task delay model.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "beamforming.hpp"
#include "channel.hpp"
#include "params.hpp"

namespace nomasec {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Access { noma, oma };

inline std::string_view to_string(Access a) { return a == Access::noma ? "noma" : "oma"; }

/// How the relay's power and airtime are split between the two streams.
///
/// NOMA superposes x_alpha (share lambda) and x_beta (share 1-lambda); the BS
/// decodes x_beta first, seeing x_alpha as interference. The OMA baseline sends
/// the streams in equal orthogonal slots: half the relay power each, no
/// inter-stream interference, and every rate scaled by the 1/2 airtime.
struct PowerShares {
    double alpha = 0.0;            // fraction of P_alpha carrying x_alpha
    double beta_signal = 0.0;      // fraction of P_alpha carrying x_beta
    double beta_interference = 0;  // x_alpha power seen while decoding x_beta
    double rate_scale = 1.0;       // airtime fraction applied to every rate

    static PowerShares noma(double lambda) { return {lambda, 1.0 - lambda, lambda, 1.0}; }
    static PowerShares oma() { return {0.5, 0.5, 0.0, 0.5}; }
    static PowerShares of(Access a, double lambda) { return a == Access::noma ? noma(lambda) : oma(); }
};

/// Effective gains g = |h|^2 d^-v for one realization, plus the AN power at the eavesdropper.
struct ChannelGains {
    double g_beta_alpha = 0.0;
    double g_alpha_b = 0.0;
    double g_beta_e = 0.0;
    double g_alpha_e = 0.0;
    double si = 0.0;            // |h_alpha_alpha|^2
    double an_at_eve_w = 0.0;   // P_B d_be^-v |w^H h_be|^2, zero without AN
};

inline ChannelGains make_gains(const ChannelDraw& draw, const LinkGeometry& geo, const SystemParams& params,
                               AnMode mode, bool an_enabled = true) {
    const double v = params.path_loss_exp;
    ChannelGains g;
    g.g_beta_alpha = effective_gain(draw.h_beta_alpha, geo.d_beta_alpha, v);
    g.g_alpha_b = effective_gain(draw.h_alpha_b, geo.d_alpha_b, v);
    g.g_beta_e = effective_gain(draw.h_beta_e, geo.d_beta_e, v);
    g.g_alpha_e = effective_gain(draw.h_alpha_e, geo.d_alpha_e, v);
    g.si = std::norm(draw.h_alpha_alpha);
    g.an_at_eve_w = an_enabled ? an_power_at_eve(draw, geo, params, mode) : 0.0;
    return g;
}

struct OffloadPlan {
    double lambda = 0.25;
    int m_alpha = 0;
    int m_beta = 0;
    AnMode an_mode = AnMode::model;
};

inline void validate_plan(const OffloadPlan& plan, int m_tasks) {
    if (!(plan.lambda > 0.0 && plan.lambda < 0.5)) throw std::invalid_argument("plan: lambda must lie in (0, 0.5)");
    if (plan.m_alpha < 0 || plan.m_alpha > m_tasks) throw std::invalid_argument("plan: m_alpha outside [0, M]");
    if (plan.m_beta < 0 || plan.m_beta > m_tasks) throw std::invalid_argument("plan: m_beta outside [0, M]");
}

struct LinkReport {
    // SINRs
    double r_beta_alpha = 0, r_beta_b = 0, r_alpha_b = 0, r_beta_e = 0, r_alpha_e = 0;
    // achievable rates, bit/s/Hz
    double R_beta_alpha = 0, R_beta_b = 0, R_alpha_b = 0, R_beta_e = 0, R_alpha_e = 0;
    // secure rates, bit/s/Hz
    double C_alpha = 0, C_beta = 0, C_beta_alpha = 0, C_beta_b = 0;
    double rate_scale = 1.0;

    double rate_beta() const { return std::min(R_beta_alpha, R_beta_b); }
};

inline LinkReport compute_sinrs(const ChannelGains& g, const PowerShares& sh, const SystemParams& params) {
    const double n0 = params.noise_power_w();
    const double pa = params.p_center_w();
    const double pb = params.p_edge_w();
    LinkReport r;
    r.rate_scale = sh.rate_scale;
    r.r_beta_alpha = pb * g.g_beta_alpha / (params.p_si_w() * g.si + n0);
    r.r_beta_b = sh.beta_signal * pa * g.g_alpha_b / (sh.beta_interference * pa * g.g_alpha_b + n0);
    r.r_alpha_b = sh.alpha * pa * g.g_alpha_b / n0;
    r.r_beta_e = (pb * g.g_beta_e + sh.beta_signal * pa * g.g_alpha_e) /
                 (sh.beta_interference * pa * g.g_alpha_e + g.an_at_eve_w + n0);
    r.r_alpha_e = sh.alpha * pa * g.g_alpha_e / (g.an_at_eve_w + n0);
    return r;
}

/// Fills the rate and secure-rate fields from the SINRs.
inline LinkReport secure_rates(LinkReport r) {
    auto rate = [&](double snr) { return r.rate_scale * std::log2(1.0 + snr); };
    auto pos = [](double x) { return std::max(x, 0.0); };
    r.R_beta_alpha = rate(r.r_beta_alpha);
    r.R_beta_b = rate(r.r_beta_b);
    r.R_alpha_b = rate(r.r_alpha_b);
    r.R_beta_e = rate(r.r_beta_e);
    r.R_alpha_e = rate(r.r_alpha_e);
    r.C_alpha = pos(r.R_alpha_b - r.R_alpha_e);
    r.C_beta_alpha = pos(r.R_beta_alpha - r.R_beta_e);
    r.C_beta_b = pos(r.R_beta_b - r.R_beta_e);
    r.C_beta = pos(std::min(r.R_beta_alpha, r.R_beta_b) - r.R_beta_e);
    return r;
}

inline LinkReport evaluate_link(const ChannelGains& g, const PowerShares& sh, const SystemParams& params) {
    return secure_rates(compute_sinrs(g, sh, params));
}

inline LinkReport compute_sinrs(const ChannelDraw& draw, const LinkGeometry& geo, const OffloadPlan& plan,
                                const SystemParams& params, bool an_enabled = true) {
    return compute_sinrs(make_gains(draw, geo, params, plan.an_mode, an_enabled), PowerShares::noma(plan.lambda),
                         params);
}

// ---------------------------------------------------------------------------
// Delay model. Result-return time is neglected.

struct DelayReport {
    double d_local_alpha = 0, d_local_beta = 0;
    double d_off_alpha = 0, d_exe_alpha = 0;
    double d_off_beta = 0, d_exe_beta = 0;  // d_off_beta: slower of the two x_beta hops
    double d_mec_alpha = 0, d_mec_beta_alpha = 0, d_mec_beta_b = 0;
    double d_beta = 0, d_alpha = 0;
};

inline double local_delay(int m_local, const SystemParams& p) {
    return m_local * p.cycles_per_bit * p.task_bits / p.f_local_hz;
}

/// Upload time of `n_off` tasks at secure rate C; +inf when C == 0 and n_off > 0.
inline double offload_delay(int n_off, double secure_rate, const SystemParams& p) {
    if (n_off <= 0) return 0.0;
    if (!(secure_rate > 0.0)) return kInf;
    return n_off * p.task_bits / (p.bandwidth_hz * secure_rate);
}

inline double exec_delay(int n_off, const SystemParams& p) {
    return n_off * p.cycles_per_bit * p.task_bits / p.f_mec_hz;
}

/// MEC delay of offloading `n_off` tasks over a link with secure rate C.
inline double mec_delay(int n_off, double secure_rate, const SystemParams& p) {
    return offload_delay(n_off, secure_rate, p) + exec_delay(n_off, p);
}

inline DelayReport delays(int m_alpha, int m_beta, const LinkReport& r, const SystemParams& p) {
    const int M = p.m_tasks;
    DelayReport d;
    d.d_local_alpha = local_delay(m_alpha, p);
    d.d_local_beta = local_delay(m_beta, p);
    d.d_off_alpha = offload_delay(M - m_alpha, r.C_alpha, p);
    d.d_exe_alpha = exec_delay(M - m_alpha, p);
    d.d_off_beta = std::max(offload_delay(M - m_beta, r.C_beta_alpha, p), offload_delay(M - m_beta, r.C_beta_b, p));
    d.d_exe_beta = exec_delay(M - m_beta, p);
    d.d_mec_alpha = d.d_off_alpha + d.d_exe_alpha;
    d.d_mec_beta_alpha = mec_delay(M - m_beta, r.C_beta_alpha, p);
    d.d_mec_beta_b = mec_delay(M - m_beta, r.C_beta_b, p);
    d.d_beta = std::max(d.d_local_beta, std::max(d.d_mec_beta_alpha, d.d_mec_beta_b));
    d.d_alpha = std::max(d.d_local_alpha, d.d_mec_alpha);
    return d;
}

inline DelayReport delays(const OffloadPlan& plan, const LinkReport& r, const SystemParams& p) {
    validate_plan(plan, p.m_tasks);
    return delays(plan.m_alpha, plan.m_beta, r, p);
}

}  // namespace nomasec
