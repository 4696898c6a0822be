// Analytic secrecy outage probabilities (SOP) of the center vehicle V_alpha,
// the edge vehicle V_beta, and the system (SOPS).
//
// Random variables (all channel gains exponential, H_be Erlang(K-1)):
//   V_alpha: X = r_alpha_b, Y = r_alpha_e, outage iff (1+X) < z (1+Y)
//   V_beta : X = min(r_beta_alpha, r_beta_b), Y = r_beta_e, same event
// with z = 2^(R_s / rate_scale). The CDF/PDF building blocks below are exact
// for the model-mode AN leakage; the Monte Carlo module is their reference.
//
// Two families of evaluators are kept side by side:
//   * shipped:   closed form for V_alpha (generalized exponential integrals),
//                N-node Gauss-Legendre sum for V_beta;
//   * reference: adaptive integration of the same integrals (semi-analytic);
//   * printed:   the published expressions transcribed literally, used only in
//                the deviation report.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string_view>

#include "link.hpp"
#include "params.hpp"
#include "special_functions.hpp"

namespace nomasec {

enum class SopMethod { closed_form, semi_analytic, gauss_legendre, as_printed, monte_carlo };

inline std::string_view to_string(SopMethod m) {
    switch (m) {
        case SopMethod::closed_form: return "closed_form";
        case SopMethod::semi_analytic: return "semi_analytic";
        case SopMethod::gauss_legendre: return "gauss_legendre";
        case SopMethod::as_printed: return "as_printed";
        case SopMethod::monte_carlo: return "monte_carlo";
    }
    return "?";
}

struct SopInputs {
    double lambda = 0.25;
    Access access = Access::noma;
    bool an_enabled = true;
    double p_alpha = 0, p_beta = 0, p_b = 0, p_si = 0, noise = 0;
    LinkGeometry geo;
    double path_loss = 3.0;
    // exponential rates gamma_j = 1/sigma_j^2
    double rate_alpha_b = 1, rate_alpha_e = 1, rate_be = 1, rate_beta_alpha = 1, rate_beta_e = 1,
           rate_alpha_alpha = 1;
    int k_antennas = 10;
    double rs = 0.1;
    int quad_nodes = 500;
};

inline SopInputs make_sop_inputs(const SystemParams& p, const LinkGeometry& geo, double lambda,
                                 Access access = Access::noma, bool an_enabled = true) {
    SopInputs in;
    in.lambda = lambda;
    in.access = access;
    in.an_enabled = an_enabled;
    in.p_alpha = p.p_center_w();
    in.p_beta = p.p_edge_w();
    in.p_b = p.p_an_per_antenna_w();
    in.p_si = p.p_si_w();
    in.noise = p.noise_power_w();
    in.geo = geo;
    in.path_loss = p.path_loss_exp;
    in.rate_alpha_b = p.rate(Link::alpha_b);
    in.rate_alpha_e = p.rate(Link::alpha_e);
    in.rate_be = p.rate(Link::be);
    in.rate_beta_alpha = p.rate(Link::beta_alpha);
    in.rate_beta_e = p.rate(Link::beta_e);
    in.rate_alpha_alpha = p.rate(Link::alpha_alpha);
    in.k_antennas = p.bs_antennas;
    in.rs = p.secrecy_rate_target;
    in.quad_nodes = p.quad_nodes;
    return in;
}

inline void validate(const SopInputs& in) {
    auto pos = [](double x) { return x > 0.0 && std::isfinite(x); };
    if (in.access == Access::noma && !(in.lambda > 0.0 && in.lambda < 0.5))
        throw std::invalid_argument("SopInputs: lambda must lie in (0, 0.5)");
    if (!(pos(in.p_alpha) && pos(in.p_beta) && pos(in.p_b) && pos(in.noise) && in.p_si >= 0.0))
        throw std::invalid_argument("SopInputs: powers must be positive");
    const auto& g = in.geo;
    if (!(pos(g.d_alpha_b) && pos(g.d_alpha_e) && pos(g.d_b_e) && pos(g.d_beta_alpha) && pos(g.d_beta_e)))
        throw std::invalid_argument("SopInputs: distances must be positive");
    if (!(pos(in.rate_alpha_b) && pos(in.rate_alpha_e) && pos(in.rate_be) && pos(in.rate_beta_alpha) &&
          pos(in.rate_beta_e) && pos(in.rate_alpha_alpha)))
        throw std::invalid_argument("SopInputs: channel rates must be positive");
    if (in.k_antennas < 3) throw std::invalid_argument("SopInputs: K must be >= 3");
    if (!(in.rs >= 0.0)) throw std::invalid_argument("SopInputs: R_s must be non-negative");
    if (in.quad_nodes < 2) throw std::invalid_argument("SopInputs: quad_nodes must be >= 2");
}

/// Count of SOP values that landed in the [-1e-9, 1+1e-9] slack band and were clamped.
inline std::atomic<long> g_sop_clamp_count{0};

inline double clamp_probability(double p) {
    constexpr double slack = 1e-9;
    if (!(p >= -slack && p <= 1.0 + slack))
        throw std::runtime_error("SOP evaluation left [0, 1]: " + std::to_string(p));
    if (p < 0.0 || p > 1.0) {
        g_sop_clamp_count.fetch_add(1, std::memory_order_relaxed);
        return std::clamp(p, 0.0, 1.0);
    }
    return p;
}

inline double sops(double p_alpha, double p_beta) {
    if (!(p_alpha >= 0.0 && p_alpha <= 1.0 && p_beta >= 0.0 && p_beta <= 1.0))
        throw std::invalid_argument("sops: probabilities must lie in [0, 1]");
    return p_alpha + p_beta - p_alpha * p_beta;
}

// ---------------------------------------------------------------------------
// Distribution building blocks.

/// Phi(p) = e^{-p} (1 + p/theta3)^{1-K}: the joint Laplace factor of an
/// exponential gain and the Erlang AN leakage. Without AN it reduces to e^{-p}.
struct LaplaceFactor {
    double theta3 = std::numeric_limits<double>::infinity();
    double km1 = 0.0;  // K-1
    bool an = true;

    double operator()(double p) const {
        if (!an) return std::exp(-p);
        return std::exp(-p - km1 * std::log1p(p / theta3));
    }
    double d1(double p) const {
        if (!an) return -std::exp(-p);
        return (*this)(p) * (-1.0 - km1 / (theta3 + p));
    }
    double d2(double p) const {
        if (!an) return std::exp(-p);
        double a = 1.0 + km1 / (theta3 + p);
        return (*this)(p) * (a * a + km1 / ((theta3 + p) * (theta3 + p)));
    }
    /// Phi' and Phi'' sharing one evaluation of Phi.
    void derivs(double p, double& d1v, double& d2v) const {
        if (!an) {
            double e = std::exp(-p);
            d1v = -e;
            d2v = e;
            return;
        }
        double inv = 1.0 / (theta3 + p);
        double a = 1.0 + km1 * inv;
        double f = (*this)(p);
        d1v = -f * a;
        d2v = f * (a * a + km1 * inv * inv);
    }
    /// Distance from p to the nearest singularity of Phi (the pole at -theta3).
    double analytic_radius(double p) const { return an ? theta3 + p : std::numeric_limits<double>::infinity(); }
};

/// Constants shared by every evaluator, derived once from SopInputs.
struct SopModel {
    PowerShares shares;
    double z = 1.0;          // 2^(R_s / rate_scale)
    double km1 = 9.0;
    LaplaceFactor phi_f;
    // V_alpha
    double c_x = 0;          // r_alpha_b = X_ab / c_x  (X_ab ~ Exp(1))  i.e. F_X(x) = 1 - e^{-c_x x}
    double theta_a = 0;      // sigma^2 gamma_ae / (s_alpha P_alpha d_ae^-v)
    // V_beta
    double theta2 = 0;       // sigma^2 gamma_ae / (P_alpha d_ae^-v)
    double theta4 = 0;       // sigma^2 gamma_be_beta / (P_beta d_beta_e^-v)
    double snr_b = 0;        // P_alpha d_ab^-v / sigma^2
    double b1 = 0, b2 = 0;   // phi(x) = e^{-b1 x} / (1 + b2 x)
    double rate_ab = 1;
    int quad_nodes = 500;

    explicit SopModel(const SopInputs& in) {
        validate(in);
        const double v = in.path_loss;
        const auto& g = in.geo;
        shares = PowerShares::of(in.access, in.lambda);
        z = std::exp2(in.rs / shares.rate_scale);
        km1 = in.k_antennas - 1.0;
        const double ga_ae = in.p_alpha * std::pow(g.d_alpha_e, -v);
        const double ga_ab = in.p_alpha * std::pow(g.d_alpha_b, -v);
        const double gb_be = in.p_b * std::pow(g.d_b_e, -v);
        const double gb_beta_e = in.p_beta * std::pow(g.d_beta_e, -v);
        const double gb_ba = in.p_beta * std::pow(g.d_beta_alpha, -v);
        phi_f.km1 = km1;
        phi_f.an = in.an_enabled;
        phi_f.theta3 = in.noise * in.rate_be / gb_be;
        snr_b = ga_ab / in.noise;
        rate_ab = in.rate_alpha_b;
        c_x = in.rate_alpha_b / (shares.alpha * snr_b);
        theta_a = in.noise * in.rate_alpha_e / (shares.alpha * ga_ae);
        theta2 = in.noise * in.rate_alpha_e / ga_ae;
        theta4 = in.noise * in.rate_beta_e / gb_beta_e;
        b1 = in.rate_beta_alpha * in.noise / gb_ba;
        b2 = in.rate_beta_alpha * in.p_si / (in.rate_alpha_alpha * gb_ba);
        quad_nodes = in.quad_nodes;
    }

    // ---- V_alpha -------------------------------------------------------
    double alpha_cdf_x(double x) const { return x <= 0 ? 0.0 : -std::expm1(-c_x * x); }
    /// F_Y(y) = 1 - (1 + kappa y)^{1-K} e^{-theta y}, Y = r_alpha_e.
    double alpha_cdf_y(double y) const { return y <= 0 ? 0.0 : 1.0 - phi_f(theta_a * y); }
    double alpha_pdf_y(double y) const { return y < 0 ? 0.0 : -theta_a * phi_f.d1(theta_a * y); }

    // ---- V_beta --------------------------------------------------------
    /// Survival of r_beta_alpha: P{r_beta_alpha > x}.
    double phi(double x) const { return std::exp(-b1 * x) / (1.0 + b2 * x); }
    /// Survival of r_beta_b: P{r_beta_b > x}; zero at and above the ceiling c/i.
    double chi(double x) const {
        double room = shares.beta_signal - shares.beta_interference * x;
        if (room <= 0.0) return 0.0;
        return std::exp(-rate_ab * x / (snr_b * room));
    }
    /// F_X(x) for X = min(r_beta_alpha, r_beta_b).
    double beta_cdf_x(double x) const { return x <= 0 ? 0.0 : 1.0 - phi(x) * chi(x); }

    /// Upper end of the V_beta integral: z y + z - 1 must stay below the
    /// r_beta_b ceiling. Infinite without inter-stream interference.
    double beta_upper() const {
        if (shares.beta_interference <= 0.0) return std::numeric_limits<double>::infinity();
        double ceiling = shares.beta_signal / shares.beta_interference;
        return (ceiling + 1.0) / z - 1.0;
    }

    /// Divided difference (Phi(b) - Phi(a)) / (b - a) and the t-weighted
    /// integral of Phi'' used by its y-derivative; stable for a ~= b.
    struct DividedDiff {
        double dd = 0;       // \int_0^1 Phi'(a + t(b-a)) dt
        double ddy = 0;      // \int_0^1 Phi''(a + t(b-a)) ((1-t) da + t db) dt
    };
    DividedDiff divided_diff(double a, double b, double da, double db) const {
        DividedDiff out;
        const double delta = b - a;
        // Inside half the analytic radius an 8-node rule is accurate to ~1e-15
        // relative; outside it the difference quotient loses at most a few ulps.
        const double radius = std::min(1.0, phi_f.analytic_radius(std::min(a, b)));
        if (std::abs(delta) < 0.5 * radius) {
            static const auto rule = gauss_legendre(8);
            for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
                double t = 0.5 * (rule->nodes[i] + 1.0);
                double w = 0.5 * rule->weights[i];
                double d1v, d2v;
                phi_f.derivs(a + t * delta, d1v, d2v);
                out.dd += w * d1v;
                out.ddy += w * d2v * ((1.0 - t) * da + t * db);
            }
            return out;
        }
        out.dd = (phi_f(b) - phi_f(a)) / delta;
        out.ddy = (da * (phi_f.d1(b) - phi_f.d1(a)) + (db - da) * (phi_f.d1(b) - out.dd)) / delta;
        return out;
    }

    /// CDF of Y = r_beta_e.
    double beta_cdf_y(double y) const {
        if (y <= 0.0) return 0.0;
        const double room = shares.beta_signal - shares.beta_interference * y;
        const double p1 = theta4 * y;
        if (room <= 0.0) {
            double den = 1.0 + theta4 * (shares.beta_interference * y - shares.beta_signal) / theta2;
            return 1.0 - phi_f(p1) / den;
        }
        const double k2 = theta2 / room;
        const double p2 = k2 * y;
        auto d = divided_diff(p1, p2, 0.0, 0.0);
        return 1.0 - phi_f(p1) + p1 * d.dd;
    }

    /// PDF of Y = r_beta_e, the analytic derivative of beta_cdf_y.
    double beta_pdf_y(double y) const {
        if (y < 0.0) return 0.0;
        const double i = shares.beta_interference;
        const double room = shares.beta_signal - i * y;
        const double p1 = theta4 * y;
        if (room <= 0.0) {
            double den = 1.0 + theta4 * (i * y - shares.beta_signal) / theta2;
            return theta4 * (-phi_f.d1(p1)) / den + phi_f(p1) * (theta4 * i / theta2) / (den * den);
        }
        const double k2 = theta2 / room;
        const double dk2 = i * k2 * k2 / theta2;
        const double p2 = k2 * y;
        const double dp2 = k2 + y * dk2;
        auto d = divided_diff(p1, p2, theta4, dp2);
        return -theta4 * phi_f.d1(p1) + theta4 * d.dd + p1 * d.ddy;
    }
};

// ---------------------------------------------------------------------------
// V_alpha

struct SopValue {
    double value = 0.0;
    bool fallback = false;  // closed form was not finite; semi-analytic value returned
};

inline double sop_alpha_semianalytic(const SopInputs& in);

/// Closed form:
///   P = 1 - e^{-psi1} e^{q} [ (theta/kappa) E_{K-1}(q) + (K-1) E_K(q) ],
///   psi1 = c_x (z-1), q = (c_x z + theta)/kappa, kappa = theta/theta3.
/// Without AN it reduces to 1 - e^{-psi1} theta / (c_x z + theta).
inline SopValue sop_alpha_closed(const SopInputs& in) {
    SopModel m(in);
    const double psi1 = m.c_x * (m.z - 1.0);
    double laplace;
    if (!in.an_enabled) {
        laplace = m.theta_a / (m.c_x * m.z + m.theta_a);
    } else {
        const double kappa = m.theta_a / m.phi_f.theta3;
        const double q = (m.c_x * m.z + m.theta_a) / kappa;
        const int k1 = in.k_antennas - 1;
        laplace = m.phi_f.theta3 * expint_en_scaled(k1, q) + k1 * expint_en_scaled(k1 + 1, q);
    }
    double p = 1.0 - std::exp(-psi1) * laplace;
    if (!std::isfinite(p)) return {sop_alpha_semianalytic(in), true};
    return {clamp_probability(p), false};
}

namespace detail {

inline constexpr double kScanStart = 1e-12;

struct Support {
    double end = 0.0;   // |f| below 1e-14 of its peak from here on
    double peak = 0.0;  // scan point with the largest |f|
};

/// Effective support of `f` on [0, upper] from a geometric scan h, 2h, 4h, ...
template <class F>
Support scan_support(F&& f, double upper) {
    const double limit = std::isfinite(upper) ? upper : 1e12;
    double x = std::isfinite(upper) ? kScanStart * upper : kScanStart;
    Support s;
    double best = std::abs(f(0.0));
    s.peak = x;
    while (x < limit) {
        double e = std::abs(f(x));
        if (e > best) {
            best = e;
            s.peak = x;
        }
        if (best > 0.0 && e <= 1e-14 * best) {
            s.end = x;
            return s;
        }
        x *= 2.0;
    }
    s.end = limit;
    return s;
}

template <class F>
double support_end(F&& f, double upper) {
    return scan_support(f, upper).end;
}

/// \int_0^upper f with an N-node Gauss-Legendre rule applied in the variable
/// u = log(1 + y/s), s the location of the integrand's peak. The map resolves
/// a sharp peak near 0 and a long tail with the same rule.
template <class F>
double integrate_gl_log_mapped(F&& f, double upper, const GaussLegendreRule& rule) {
    Support sup = scan_support(f, upper);
    const double scale = sup.peak;
    const double u_end = std::log1p(sup.end / scale);
    return integrate_gauss_legendre(
        [&](double u) {
            double g = std::exp(u);
            return f(scale * (g - 1.0)) * scale * g;
        },
        0.0, u_end, rule);
}

/// \int_0^upper f over geometric segments [0,h], [h,2h], ... up to the end of
/// the support, each segment by adaptive Gauss-Kronrod.
template <class F>
double integrate_half_line(F&& f, double abs_tol, double upper = std::numeric_limits<double>::infinity()) {
    const double end = support_end(f, upper);
    double total = 0.0, lo = 0.0, hi = std::min(end, std::isfinite(upper) ? kScanStart * upper : kScanStart);
    while (true) {
        total += integrate_adaptive(f, lo, hi, abs_tol / 64.0);
        if (hi >= end) return total;
        lo = hi;
        hi = std::min(2.0 * hi, end);
    }
}

}  // namespace detail

/// Adaptive integration of \int_0^inf F_X(z y + z - 1) f_Y(y) dy.
inline double sop_alpha_semianalytic(const SopInputs& in) {
    SopModel m(in);
    auto integrand = [&](double y) { return m.alpha_cdf_x(m.z * y + m.z - 1.0) * m.alpha_pdf_y(y); };
    return clamp_probability(detail::integrate_half_line(integrand, 1e-8));
}

/// The published closed form, transcribed literally (psi_1, psi_2, psi_3 as
/// defined there, principal-value Ei). Report-only: it is not a probability in general.
inline double sop_alpha_as_printed(const SopInputs& in) {
    validate(in);
    const double v = in.path_loss;
    const auto& g = in.geo;
    const double z = std::exp2(in.rs);
    const double dab = std::pow(g.d_alpha_b, -v), dae = std::pow(g.d_alpha_e, -v), dbe = std::pow(g.d_b_e, -v);
    const double s2 = in.noise;
    const int K = in.k_antennas;
    const double psi1 = s2 * in.rate_alpha_b * (z - 1.0) / (in.lambda * in.p_alpha * dab);
    const double psi2 = -in.rate_alpha_e / dae - in.rate_alpha_b * z / dab;
    const double psi3 = s2 * dae * in.rate_be / (in.p_b * dbe * in.rate_alpha_e);
    double sum = 0.0;
    double fact = 1.0;  // (i-1)!
    for (int i = 1; i <= K - 2; ++i) {
        if (i > 1) fact *= (i - 1);
        sum += fact * std::pow(psi1, K - i - 2) * std::pow(psi2, -i);
    }
    const double x = psi1 * psi2;
    sum -= std::pow(psi1, K - 2) * std::exp(-x) * expint_ei(x);
    const double pref = std::exp(-psi3) * z / std::tgamma(K - 1.0) * (in.rate_alpha_b / dab) *
                        std::pow(in.p_b * dbe * in.rate_alpha_e / (s2 * dae * in.rate_be), 1.0 - K);
    return 1.0 - std::exp(-psi3) + pref * sum;
}

// ---------------------------------------------------------------------------
// V_beta

/// P_sop,beta = 1 - \int_0^{tau2} phi(x) chi(x) f_Y(y) dy with x = z y + z - 1,
/// evaluated with the N-node Gauss-Legendre rule on [0, tau2] (cut back to the
/// integrand's effective support, in a logarithmic variable).
/// Returns 1 when tau2 <= 0 (the r_beta_b ceiling sits below the target).
inline double sop_beta_quadrature(const SopInputs& in) {
    SopModel m(in);
    double upper = m.beta_upper();
    if (upper <= 0.0) return 1.0;
    auto integrand = [&](double y) {
        double x = m.z * y + m.z - 1.0;
        return m.phi(x) * m.chi(x) * m.beta_pdf_y(y);
    };
    auto rule = gauss_legendre(m.quad_nodes);
    return clamp_probability(1.0 - detail::integrate_gl_log_mapped(integrand, upper, *rule));
}

/// Same integral by adaptive quadrature (reference path; also covers OMA).
inline double sop_beta_semianalytic(const SopInputs& in) {
    SopModel m(in);
    double upper = m.beta_upper();
    if (upper <= 0.0) return 1.0;
    auto integrand = [&](double y) {
        double x = m.z * y + m.z - 1.0;
        return m.phi(x) * m.chi(x) * m.beta_pdf_y(y);
    };
    return clamp_probability(1.0 - detail::integrate_half_line(integrand, 1e-8, upper));
}

/// The published quadrature formula transcribed literally: F_X = 1 - phi(x)
/// with the printed phi (no x in the self-interference factor, no r_beta_b
/// term). Report-only.
inline double sop_beta_as_printed(const SopInputs& in) {
    SopModel m(in);
    const double v = in.path_loss;
    const double gb_ba = in.p_beta * std::pow(in.geo.d_beta_alpha, -v);
    const double z = std::exp2(in.rs);
    const double tau2 = (1.0 - z * in.lambda) / (z * in.lambda);
    if (tau2 <= 0.0) return 1.0;
    const double pref = gb_ba * in.rate_alpha_alpha / (in.p_si * in.rate_beta_alpha + gb_ba * in.rate_alpha_alpha);
    auto phi_printed = [&](double x) { return pref * std::exp(-in.rate_beta_alpha * in.noise * x / gb_ba); };
    auto rule = gauss_legendre(m.quad_nodes);
    double s = integrate_gauss_legendre(
        [&](double y) { return phi_printed(z * y + z - 1.0) * m.beta_pdf_y(y); }, 0.0, tau2, *rule);
    return 1.0 - s;
}

// ---------------------------------------------------------------------------

struct SecrecyReport {
    double p_sop_alpha = 0, p_sop_beta = 0, p_sops = 0;
    SopMethod method = SopMethod::closed_form;
    bool fallback = false;
};

/// Shipped analytic evaluation: closed form for V_alpha, Gauss-Legendre for V_beta.
inline SecrecyReport evaluate_sop(const SopInputs& in) {
    SecrecyReport r;
    auto a = sop_alpha_closed(in);
    r.p_sop_alpha = a.value;
    r.fallback = a.fallback;
    r.p_sop_beta = sop_beta_quadrature(in);
    r.p_sops = sops(r.p_sop_alpha, r.p_sop_beta);
    r.method = SopMethod::closed_form;
    return r;
}

inline SecrecyReport evaluate_sop_semianalytic(const SopInputs& in) {
    SecrecyReport r;
    r.p_sop_alpha = sop_alpha_semianalytic(in);
    r.p_sop_beta = sop_beta_semianalytic(in);
    r.p_sops = sops(r.p_sop_alpha, r.p_sop_beta);
    r.method = SopMethod::semi_analytic;
    return r;
}

/// Cheap lower bound P_sop,beta >= 1 - F_Y(tau2): the integral never exceeds
/// the mass of Y below the cut-off.
inline double sop_beta_lower_bound(const SopInputs& in) {
    SopModel m(in);
    double upper = m.beta_upper();
    if (upper <= 0.0) return 1.0;
    if (!std::isfinite(upper)) return 0.0;
    return std::clamp(1.0 - m.beta_cdf_y(upper), 0.0, 1.0);
}

/// Memoized analytic SOPs for one pair geometry, keyed by lambda. The two
/// vehicles are evaluated separately and only on demand.
class SopCache {
public:
    SopCache(const SystemParams& params, const LinkGeometry& geo, Access access, bool an_enabled)
        : params_(params), geo_(geo), access_(access), an_(an_enabled) {}

    double alpha(double lambda) {
        return lookup(alpha_, lambda, [&](const SopInputs& in) { return sop_alpha_closed(in).value; });
    }
    double beta(double lambda) { return lookup(beta_, lambda, sop_beta_quadrature); }
    double beta_lower_bound(double lambda) {
        auto it = beta_.find(key(lambda));
        if (it != beta_.end()) return it->second;
        return lookup(beta_lb_, lambda, sop_beta_lower_bound);
    }
    SecrecyReport report(double lambda) {
        SecrecyReport r;
        r.p_sop_alpha = alpha(lambda);
        r.p_sop_beta = beta(lambda);
        r.p_sops = sops(r.p_sop_alpha, r.p_sop_beta);
        return r;
    }
    /// Number of full (quadrature or closed-form) evaluations performed.
    std::size_t evaluations() const { return alpha_.size() + beta_.size(); }
    Access access() const { return access_; }

private:
    double key(double lambda) const { return access_ == Access::oma ? 0.0 : lambda; }

    template <class F>
    double lookup(std::map<double, double>& cache, double lambda, F&& eval) {
        double k = key(lambda);
        auto it = cache.find(k);
        if (it != cache.end()) return it->second;
        auto in = make_sop_inputs(params_, geo_, access_ == Access::oma ? 0.25 : lambda, access_, an_);
        return cache.emplace(k, eval(in)).first->second;
    }

    SystemParams params_;
    LinkGeometry geo_;
    Access access_;
    bool an_;
    std::map<double, double> alpha_, beta_, beta_lb_;
};

}  // namespace nomasec
