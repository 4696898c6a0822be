// Quasi-static Rayleigh channel draws, link geometry, and gain distributions.
#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "params.hpp"
#include "rng.hpp"

namespace nomasec {

using cplx = std::complex<double>;

/// One realization of every channel coefficient seen by a relay pair.
///
/// The BS has K antennas: one receives, the other K-1 transmit artificial
/// noise. The receive antenna is fixed before the AN-path channels are drawn.
/// Column 0 of `h_bb` is the path from the AN antennas into that receive antenna.
struct ChannelDraw {
    cplx h_beta_alpha;
    cplx h_alpha_b;
    cplx h_beta_e;
    cplx h_alpha_e;
    cplx h_alpha_alpha;
    Eigen::VectorXcd h_b_alpha;  // K-1
    Eigen::VectorXcd h_b_e;      // K-1
    Eigen::MatrixXcd h_bb;       // (K-1)x(K-1), empty when not drawn
};

struct LinkGeometry {
    double d_beta_alpha = 1.0;
    double d_alpha_b = 1.0;
    double d_beta_e = 1.0;
    double d_alpha_e = 1.0;
    double d_b_e = 1.0;
};

/// Distances for a relay pair. BS links include the mast height; vehicle-vehicle
/// distances are floored at `min_separation_m` so every distance stays positive.
inline LinkGeometry make_geometry(double l_alpha, double l_beta, double l_eve, const SystemParams& params) {
    auto vv = [&](double a, double b) { return std::max(std::abs(a - b), params.min_separation_m); };
    LinkGeometry g;
    g.d_beta_alpha = vv(l_beta, l_alpha);
    g.d_alpha_b = std::hypot(l_alpha, params.bs_height_m);
    g.d_beta_e = vv(l_beta, l_eve);
    g.d_alpha_e = vv(l_alpha, l_eve);
    g.d_b_e = std::hypot(l_eve, params.bs_height_m);
    return g;
}

/// Circularly-symmetric complex Gaussian CN(0, variance) from a standard normal source.
template <class Rng>
cplx draw_cn(Rng& rng, std::normal_distribution<double>& unit, double variance) {
    const double s = std::sqrt(variance / 2.0);
    double re = unit(rng);
    double im = unit(rng);
    return {s * re, s * im};
}

template <class Rng>
cplx draw_cn(Rng& rng, double variance) {
    std::normal_distribution<double> unit(0.0, 1.0);
    return draw_cn(rng, unit, variance);
}

/// Which parts of a draw are needed. Geometric null-steering needs the BS->relay
/// vector and the SI matrix; model-mode AN needs neither.
struct DrawOptions {
    bool with_si_matrix = true;
    bool with_b_alpha = true;
};

/// Draws into `out` (reusing its storage). Skipped parts are left empty.
template <class Rng>
void draw_channels_into(ChannelDraw& out, const SystemParams& params, Rng& rng, DrawOptions opt) {
    const int n = params.bs_antennas - 1;
    std::normal_distribution<double> unit(0.0, 1.0);
    out.h_beta_alpha = draw_cn(rng, unit, params.variance(Link::beta_alpha));
    out.h_alpha_b = draw_cn(rng, unit, params.variance(Link::alpha_b));
    out.h_beta_e = draw_cn(rng, unit, params.variance(Link::beta_e));
    out.h_alpha_e = draw_cn(rng, unit, params.variance(Link::alpha_e));
    out.h_alpha_alpha = draw_cn(rng, unit, params.variance(Link::alpha_alpha));
    out.h_b_e.resize(n);
    for (int k = 0; k < n; ++k) out.h_b_e[k] = draw_cn(rng, unit, params.variance(Link::be));
    if (opt.with_b_alpha) {
        out.h_b_alpha.resize(n);
        for (int k = 0; k < n; ++k) out.h_b_alpha[k] = draw_cn(rng, unit, params.variance(Link::b_alpha));
    } else {
        out.h_b_alpha.resize(0);
    }
    if (opt.with_si_matrix) {
        out.h_bb.resize(n, n);
        for (int c = 0; c < n; ++c)
            for (int r = 0; r < n; ++r) out.h_bb(r, c) = draw_cn(rng, unit, params.variance(Link::bb));
    } else {
        out.h_bb.resize(0, 0);
    }
}

template <class Rng>
void draw_channels_into(ChannelDraw& out, const SystemParams& params, Rng& rng, bool with_si_matrix) {
    draw_channels_into(out, params, rng, DrawOptions{with_si_matrix, true});
}

inline ChannelDraw draw_channels(const SystemParams& params, std::uint64_t seed, bool with_si_matrix = true) {
    Stream rng(seed);
    ChannelDraw d;
    draw_channels_into(d, params, rng, with_si_matrix);
    return d;
}

/// g = |h|^2 d^-v.
inline double effective_gain(cplx h, double d, double v) {
    if (!(d > 0.0)) throw std::invalid_argument("effective_gain: distance must be positive");
    return std::norm(h) * std::pow(d, -v);
}

/// CDF of an exponential channel gain with rate gamma.
inline double gain_cdf_exponential(double x, double rate) {
    if (x <= 0.0) return 0.0;
    return -std::expm1(-rate * x);
}

/// Erlang(shape, rate) density: rate^k x^(k-1) e^(-rate x) / (k-1)!.
/// Models H_be, the sum of K-1 i.i.d. exponential BS->eavesdropper gains.
inline double erlang_pdf(double x, int shape, double rate) {
    if (shape < 1) throw std::invalid_argument("erlang_pdf: shape must be >= 1");
    if (!(rate > 0.0)) throw std::invalid_argument("erlang_pdf: rate must be positive");
    if (x < 0.0) throw std::invalid_argument("erlang_pdf: x must be non-negative");
    if (x == 0.0) return shape == 1 ? rate : 0.0;
    double k = shape;
    return std::exp(k * std::log(rate) + (k - 1.0) * std::log(x) - rate * x - std::lgamma(k));
}

/// H_be = sum_k |h_be,k|^2.
inline double sum_gain(const Eigen::VectorXcd& h) { return h.squaredNorm(); }

}  // namespace nomasec
