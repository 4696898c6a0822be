// Exponential integrals and quadrature rules used by the outage analysis.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace nomasec {

namespace detail {
inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kTiny = 1e-300;
inline constexpr double kEps = 1e-16;
inline constexpr int kMaxIter = 10000;

inline std::string fmt_g(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}
}  // namespace detail

/// e^x E_n(x), where E_n(x) = \int_1^\infty e^{-xt} t^{-n} dt (x > 0, n >= 1).
///
/// Scaling keeps the value finite for large x, where E_n itself underflows.
inline double expint_en_scaled(int n, double x) {
    using namespace detail;
    if (n < 0) throw std::domain_error("expint_en: n must be >= 0");
    if (x < 0.0 || (x == 0.0 && n <= 1)) throw std::domain_error("expint_en: divergent for this argument");
    if (n == 0) return 1.0 / x;
    if (x == 0.0) return 1.0 / (n - 1);
    if (x > 1.0) {
        // Modified Lentz continued fraction.
        double b = x + n;
        double c = 1.0 / kTiny;
        double d = 1.0 / b;
        double h = d;
        for (int i = 1; i <= kMaxIter; ++i) {
            double an = -static_cast<double>(i) * (n - 1 + i);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            double del = c * d;
            h *= del;
            if (std::abs(del - 1.0) < kEps) return h;
        }
        throw std::runtime_error("expint_en: continued fraction did not converge");
    }
    double ans = (n - 1 != 0) ? 1.0 / (n - 1) : -std::log(x) - kEulerGamma;
    double fact = 1.0;
    for (int i = 1; i <= kMaxIter; ++i) {
        fact *= -x / i;
        double del;
        if (i != n - 1) {
            del = -fact / (i - n + 1);
        } else {
            double psi = -kEulerGamma;
            for (int ii = 1; ii <= n - 1; ++ii) psi += 1.0 / ii;
            del = fact * (-std::log(x) + psi);
        }
        ans += del;
        if (std::abs(del) < std::abs(ans) * kEps) return std::exp(x) * ans;
    }
    throw std::runtime_error("expint_en: series did not converge");
}

/// Generalized exponential integral E_n(x) = \int_1^\infty e^{-xt} t^{-n} dt.
inline double expint_en(int n, double x) { return std::exp(-x) * expint_en_scaled(n, x); }

/// E_1(x) = \int_1^\infty e^{-xt}/t dt for x > 0. For x < 0 this returns the
/// analytic continuation -Ei(-x) (principal value).
inline double exp_integral_e1(double x);

/// Principal-value exponential integral Ei(x) = -PV \int_{-x}^\infty e^{-t}/t dt.
inline double expint_ei(double x) {
    using namespace detail;
    if (x == 0.0) throw std::domain_error("expint_ei: divergent at 0");
    if (x < 0.0) return -expint_en(1, -x);
    if (x < 1e-300) return std::log(x) + kEulerGamma;
    if (x <= -std::log(kEps)) {
        double sum = 0.0, fact = 1.0;
        for (int k = 1; k <= kMaxIter; ++k) {
            fact *= x / k;
            double term = fact / k;
            sum += term;
            if (term < kEps * sum) return sum + std::log(x) + kEulerGamma;
        }
        throw std::runtime_error("expint_ei: series did not converge");
    }
    double sum = 0.0, term = 1.0;
    for (int k = 1; k <= kMaxIter; ++k) {
        double prev = term;
        term *= k / x;
        if (term < kEps) break;
        if (term < prev) {
            sum += term;
        } else {
            sum -= prev;
            break;
        }
    }
    return std::exp(x) * (1.0 + sum) / x;
}

inline double exp_integral_e1(double x) {
    if (x == 0.0) throw std::domain_error("exp_integral_e1: divergent at 0");
    if (x > 0.0) return expint_en(1, x);
    return -expint_ei(-x);
}

// ---------------------------------------------------------------------------
// Gauss-Legendre rules on [-1, 1].

struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Nodes are the roots of P_n (Newton on the three-term recurrence);
/// weights A_i = 2 / ((1 - t_i^2) P_n'(t_i)^2).
inline GaussLegendreRule compute_gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    GaussLegendreRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (t * p0 - p1) / (t * t - 1.0);
            double dt = p0 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) {
                // one more recurrence pass for the derivative at the converged root
                p0 = 1.0;
                p1 = 0.0;
                for (int j = 1; j <= n; ++j) {
                    double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p2) / j;
                }
                dp = n * (t * p0 - p1) / (t * t - 1.0);
                break;
            }
        }
        double w = 2.0 / ((1.0 - t * t) * dp * dp);
        auto lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = -t;
        rule.nodes[hi] = t;
        rule.weights[lo] = w;
        rule.weights[hi] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

/// Shared immutable rule for `n` nodes, computed once per process.
inline std::shared_ptr<const GaussLegendreRule> gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const GaussLegendreRule>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<const GaussLegendreRule>(compute_gauss_legendre(n));
    return slot;
}

/// \int_a^b f using an n-node Gauss-Legendre rule.
template <class F>
double integrate_gauss_legendre(F&& f, double a, double b, const GaussLegendreRule& rule) {
    const double half = 0.5 * (b - a), mid = 0.5 * (b + a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive Gauss-Kronrod on [a, b]; throws QuadratureError when the error
/// estimate exceeds `abs_tol`.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-8) {
    // The library's error estimate is expressed on the unit reference interval,
    // so the integral is mapped onto [0, 1] first to keep it in absolute units.
    const double width = b - a;
    auto g = [&](double t) { return width * f(a + width * t); };
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    double err = 0.0;
    double val = GK::integrate(g, 0.0, 1.0, 15, 1e-10, &err);
    auto accepted = [&] { return err <= std::max(abs_tol, 1e-12 * std::abs(val)) && std::isfinite(val); };
    if (!accepted()) val = GK::integrate(g, 0.0, 1.0, 15, 1e-14, &err);
    if (!accepted())
        throw QuadratureError("adaptive quadrature did not converge on [" + detail::fmt_g(a) + ", " + detail::fmt_g(b) +
                              "]: value " + detail::fmt_g(val) + ", error estimate " + detail::fmt_g(err));
    return val;
}

/// First point of the geometric scan h, 2h, 4h, ... where `envelope` falls
/// below `rel` times its running peak (peak includes envelope(0)). Returns
/// `hard_limit` if the scan reaches it first.
template <class F>
double truncation_point(F&& envelope, double h, double rel = 1e-14, double hard_limit = 1e12) {
    double peak = std::abs(envelope(0.0));
    double x = h;
    while (x < hard_limit) {
        double e = std::abs(envelope(x));
        peak = std::max(peak, e);
        if (peak > 0.0 && e <= rel * peak) return x;
        x *= 2.0;
    }
    return hard_limit;
}

}  // namespace nomasec
