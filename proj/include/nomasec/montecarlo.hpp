// Monte Carlo estimation of secrecy outage and delay for one relay pair.
//
// Trial t draws its channels from Stream(derive_seed(seed, t)). Trials are
// grouped in fixed blocks of kMcBlock; each block is summed serially and the
// block partials are combined by pairwise summation in block order. The
// worker count and batch size therefore never change a result bit.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <string>
#include <thread>
#include <vector>

#include "beamforming.hpp"
#include "channel.hpp"
#include "link.hpp"
#include "params.hpp"
#include "rng.hpp"

namespace nomasec {

inline constexpr long kMcBlock = 4096;
inline constexpr long kMcTraceCap = 10000;

struct McConfig {
    long trials = 10000;
    std::uint64_t seed = 42;
    AnMode an_mode = AnMode::model;
    long batch_size = kMcBlock;  // accepted for compatibility; blocks are always kMcBlock trials
    unsigned threads = 1;        // 0: hardware concurrency
    bool an_enabled = true;
    Access access = Access::noma;
    /// Optional per-trial trace (CSV, at most kMcTraceCap rows).
    std::string trace_path;
    /// Test hook applied to every draw before it is used.
    std::function<void(ChannelDraw&)> channel_override;

    void validate() const {
        if (trials < 1) throw std::invalid_argument("McConfig: trials must be >= 1");
        if (batch_size < 1) throw std::invalid_argument("McConfig: batch_size must be >= 1");
    }
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long trials_used = 0;
};

struct McSopResult {
    McEstimate alpha, beta, sops;  // sops from the joint event (alpha OR beta)
    /// Inclusion-exclusion combination of the two marginal estimates.
    double sops_from_marginals() const { return alpha.mean + beta.mean - alpha.mean * beta.mean; }
};

struct McDelayResult {
    McEstimate d_beta, d_alpha;     // over feasible (finite) trials
    double infeasible_beta = 0.0;   // fraction of trials with infinite delay
    double infeasible_alpha = 0.0;
};

namespace detail {

/// Running sums for a fixed set of channels. `sum2` holds squares for the std error.
template <std::size_t N>
struct Sums {
    std::array<double, N> sum{};
    std::array<double, N> sum2{};
    std::array<long, N> count{};

    void add(std::size_t i, double x) {
        sum[i] += x;
        sum2[i] += x * x;
        ++count[i];
    }
    Sums& operator+=(const Sums& o) {
        for (std::size_t i = 0; i < N; ++i) {
            sum[i] += o.sum[i];
            sum2[i] += o.sum2[i];
            count[i] += o.count[i];
        }
        return *this;
    }
};

template <class T>
T pairwise_reduce(const std::vector<T>& parts, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return parts[lo];
    std::size_t mid = lo + (hi - lo) / 2;
    T left = pairwise_reduce(parts, lo, mid);
    left += pairwise_reduce(parts, mid, hi);
    return left;
}

/// Runs `block_fn(block_index, first_trial, end_trial)` for every block and
/// reduces the returned partials pairwise in block order.
template <class T, class BlockFn>
T run_blocks(long trials, unsigned threads, BlockFn&& block_fn) {
    const long n_blocks = (trials + kMcBlock - 1) / kMcBlock;
    std::vector<T> parts(static_cast<std::size_t>(n_blocks));
    auto work = [&](long b) {
        long lo = b * kMcBlock;
        long hi = std::min(trials, lo + kMcBlock);
        parts[static_cast<std::size_t>(b)] = block_fn(lo, hi);
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<long>(threads, n_blocks));
    if (threads <= 1) {
        for (long b = 0; b < n_blocks; ++b) work(b);
    } else {
        std::atomic<long> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (long b; (b = next.fetch_add(1)) < n_blocks;) work(b);
            });
        for (auto& th : pool) th.join();
    }
    return pairwise_reduce(parts, 0, parts.size());
}

inline McEstimate finish(double sum, double sum2, long n) {
    McEstimate e;
    e.trials_used = n;
    if (n == 0) return e;
    e.mean = sum / static_cast<double>(n);
    if (n > 1) {
        double var = (sum2 - sum * e.mean) / static_cast<double>(n - 1);
        e.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
    }
    return e;
}

/// One trial's link report under the given plan.
struct TrialRunner {
    const LinkGeometry& geo;
    const SystemParams& params;
    const McConfig& mc;
    PowerShares shares;
    DrawOptions opt;

    TrialRunner(const LinkGeometry& g, const OffloadPlan& plan, const SystemParams& p, const McConfig& c)
        : geo(g), params(p), mc(c), shares(PowerShares::of(c.access, plan.lambda)) {
        bool geometric = c.an_enabled && c.an_mode == AnMode::geometric;
        opt = DrawOptions{geometric, geometric};
    }

    LinkReport operator()(long trial, ChannelDraw& draw) const {
        Stream rng(derive_seed(mc.seed, static_cast<std::uint64_t>(trial)));
        draw_channels_into(draw, params, rng, opt);
        if (mc.channel_override) mc.channel_override(draw);
        auto gains = make_gains(draw, geo, params, mc.an_mode, mc.an_enabled);
        return evaluate_link(gains, shares, params);
    }
};

inline void write_sop_trace(const std::string& path, const TrialRunner& run, long trials, double rs) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace file '" + path + "'");
    out << std::setprecision(10);
    out << "trial,r_alpha_b,r_alpha_e,r_beta_alpha,r_beta_b,r_beta_e,C_alpha,C_beta,outage_alpha,outage_beta\n";
    ChannelDraw draw;
    for (long t = 0; t < std::min(trials, kMcTraceCap); ++t) {
        auto r = run(t, draw);
        out << t << ',' << r.r_alpha_b << ',' << r.r_alpha_e << ',' << r.r_beta_alpha << ',' << r.r_beta_b << ','
            << r.r_beta_e << ',' << r.C_alpha << ',' << r.C_beta << ',' << (r.C_alpha < rs) << ',' << (r.C_beta < rs)
            << '\n';
    }
}

}  // namespace detail

/// Outage indicators 1{C_alpha < R_s}, 1{C_beta < R_s} and their union.
inline McSopResult mc_sop(const LinkGeometry& geo, const OffloadPlan& plan, const SystemParams& params,
                          const McConfig& mc) {
    mc.validate();
    params.validate();
    const double rs = params.secrecy_rate_target;
    detail::TrialRunner run(geo, plan, params, mc);
    using S = detail::Sums<3>;
    S total = detail::run_blocks<S>(mc.trials, mc.threads, [&](long lo, long hi) {
        S s;
        ChannelDraw draw;
        for (long t = lo; t < hi; ++t) {
            auto r = run(t, draw);
            double oa = r.C_alpha < rs ? 1.0 : 0.0;
            double ob = r.C_beta < rs ? 1.0 : 0.0;
            s.add(0, oa);
            s.add(1, ob);
            s.add(2, std::max(oa, ob));
        }
        return s;
    });
    if (!mc.trace_path.empty()) detail::write_sop_trace(mc.trace_path, run, mc.trials, rs);
    McSopResult out;
    out.alpha = detail::finish(total.sum[0], total.sum2[0], total.count[0]);
    out.beta = detail::finish(total.sum[1], total.sum2[1], total.count[1]);
    out.sops = detail::finish(total.sum[2], total.sum2[2], total.count[2]);
    return out;
}

/// Per-trial D_beta and D_alpha of a fixed plan. Infinite-delay trials are
/// excluded from the means and counted in the infeasibility fractions.
inline McDelayResult mc_delay(const LinkGeometry& geo, const OffloadPlan& plan, const SystemParams& params,
                              const McConfig& mc) {
    mc.validate();
    params.validate();
    if (mc.access == Access::noma) validate_plan(plan, params.m_tasks);
    detail::TrialRunner run(geo, plan, params, mc);
    using S = detail::Sums<2>;
    struct Part {
        S s;
        long inf_beta = 0, inf_alpha = 0;
        Part& operator+=(const Part& o) {
            s += o.s;
            inf_beta += o.inf_beta;
            inf_alpha += o.inf_alpha;
            return *this;
        }
    };
    Part total = detail::run_blocks<Part>(mc.trials, mc.threads, [&](long lo, long hi) {
        Part p;
        ChannelDraw draw;
        for (long t = lo; t < hi; ++t) {
            auto d = delays(plan.m_alpha, plan.m_beta, run(t, draw), params);
            if (std::isfinite(d.d_beta)) p.s.add(0, d.d_beta); else ++p.inf_beta;
            if (std::isfinite(d.d_alpha)) p.s.add(1, d.d_alpha); else ++p.inf_alpha;
        }
        return p;
    });
    McDelayResult out;
    out.d_beta = detail::finish(total.s.sum[0], total.s.sum2[0], total.s.count[0]);
    out.d_alpha = detail::finish(total.s.sum[1], total.s.sum2[1], total.s.count[1]);
    out.infeasible_beta = static_cast<double>(total.inf_beta) / static_cast<double>(mc.trials);
    out.infeasible_alpha = static_cast<double>(total.inf_alpha) / static_cast<double>(mc.trials);
    return out;
}

}  // namespace nomasec
