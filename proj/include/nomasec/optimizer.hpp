// Delay minimization for one relay pair: GA-PATS, exhaustive grid, OMA baseline.
//
// The decision variables are the power allocation ratio lambda and the local
// task counts m_alpha, m_beta. Delay constraints use the instantaneous rates of
// one channel realization; the secrecy constraint uses the analytic SOP of the
// pair geometry. The SOP constraint binds a vehicle only when it offloads:
// full local execution sends nothing over the air.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "link.hpp"
#include "params.hpp"
#include "rng.hpp"
#include "secrecy_analytic.hpp"

namespace nomasec {

struct Chromosome {
    double lambda = 0.25;
    int m_alpha = 0;
    int m_beta = 0;

    bool operator==(const Chromosome& o) const {
        return lambda == o.lambda && m_alpha == o.m_alpha && m_beta == o.m_beta;
    }
};

struct GaConfig {
    int population = 100;        // S
    int iterations = 200;        // I
    double crossover_prob = 0.8; // epsilon
    double mutation_prob = 0.05; // iota
    double tolerance = 1e-6;     // minimum tolerance on the best D_beta
    int patience = 30;           // consecutive iterations within tolerance before stopping
    double lambda_sigma = 0.05;  // std of the Gaussian lambda mutation
    double penalty_weight = -1;  // mu; negative selects 10 * D
    double eps0 = 1e-9;
    double grid_step = 0.0;      // > 0 snaps lambda to {step, 2 step, ..., < 0.5}
    std::uint64_t seed = 42;
    bool record_trace = false;

    void validate() const {
        if (population < 2 || population % 2 != 0) throw std::invalid_argument("GaConfig: population must be even and >= 2");
        if (iterations < 1) throw std::invalid_argument("GaConfig: iterations must be >= 1");
        if (!(crossover_prob >= 0 && crossover_prob <= 1)) throw std::invalid_argument("GaConfig: crossover_prob outside [0, 1]");
        if (!(mutation_prob >= 0 && mutation_prob <= 1)) throw std::invalid_argument("GaConfig: mutation_prob outside [0, 1]");
        if (!(tolerance > 0)) throw std::invalid_argument("GaConfig: tolerance must be positive");
        if (patience < 1) throw std::invalid_argument("GaConfig: patience must be >= 1");
        if (!(grid_step >= 0 && grid_step < 0.25)) throw std::invalid_argument("GaConfig: grid_step outside [0, 0.25)");
    }
};

struct TraceRow {
    int generation = 0;
    double best_d_beta = 0.0;
    double mean_fitness = 0.0;
};

struct OptResult {
    Chromosome best;
    double d_beta = kInf;
    double d_alpha = kInf;
    bool feasible = false;
    std::vector<double> history;  // best-ever fitness per generation
    std::vector<TraceRow> trace;
    long evaluations = 0;
    int generations = 0;
};

/// Everything the objective needs for one pair: parameters, geometry, the
/// channel realization seen by the delay constraints, and the SOP oracle.
struct OptContext {
    SystemParams params;
    LinkGeometry geo;
    ChannelGains gains;
    Access access = Access::noma;
    bool an_enabled = true;
    std::shared_ptr<SopCache> sop;

    static OptContext make(const SystemParams& params, const LinkGeometry& geo, const ChannelGains& gains,
                           Access access = Access::noma, bool an_enabled = true) {
        OptContext c;
        c.params = params;
        c.geo = geo;
        c.gains = gains;
        c.access = access;
        c.an_enabled = an_enabled;
        c.sop = std::make_shared<SopCache>(params, geo, access, an_enabled);
        return c;
    }

    LinkReport link(double lambda) const { return evaluate_link(gains, PowerShares::of(access, lambda), params); }
};

/// Lambda values of the exhaustive grid: step, 2 step, ... strictly below 0.5.
inline std::vector<double> lambda_grid(double step) {
    if (!(step > 0.0 && step < 0.5)) throw std::invalid_argument("lambda_grid: step must lie in (0, 0.5)");
    std::vector<double> g;
    for (long k = 1;; ++k) {
        double l = static_cast<double>(k) * step;
        if (l >= 0.5 - 1e-12) break;
        g.push_back(l);
    }
    return g;
}

struct FitnessReport {
    double d_beta = kInf;
    double d_alpha = kInf;
    double penalty = 0.0;
    double fitness = 0.0;
    bool feasible = false;
};

/// Penalty = mu * sum of normalized violations of C3-C7; fitness = 1/(D_beta + penalty + eps0).
inline FitnessReport evaluate_fitness(const Chromosome& ch, OptContext& ctx, double mu, double eps0) {
    const auto& p = ctx.params;
    const int M = p.m_tasks;
    if (ch.m_alpha < 0 || ch.m_alpha > M || ch.m_beta < 0 || ch.m_beta > M)
        throw std::invalid_argument("evaluate_fitness: task split outside [0, M]");
    if (ctx.access == Access::noma && !(ch.lambda > 0.0 && ch.lambda < 0.5))
        throw std::invalid_argument("evaluate_fitness: lambda outside (0, 0.5)");
    const double D = p.max_delay_s;
    auto d = delays(ch.m_alpha, ch.m_beta, ctx.link(ch.lambda), p);
    auto over = [&](double x) { return x > D ? (x - D) / D : 0.0; };
    double v = over(d.d_local_alpha) + over(d.d_local_beta) + over(d.d_mec_alpha) + over(d.d_mec_beta_alpha) +
               over(d.d_mec_beta_b);
    const double zeta = p.sop_tolerance;
    if (ch.m_alpha < M) v += std::max(0.0, ctx.sop->alpha(ch.lambda) - zeta) / zeta;
    if (ch.m_beta < M) v += std::max(0.0, ctx.sop->beta(ch.lambda) - zeta) / zeta;
    FitnessReport r;
    r.d_beta = d.d_beta;
    r.d_alpha = d.d_alpha;
    r.penalty = mu * v;
    r.feasible = v == 0.0;
    double denom = r.d_beta + r.penalty + eps0;
    r.fitness = std::isfinite(denom) ? 1.0 / denom : 0.0;
    return r;
}

namespace detail {

/// Lexicographic preference among feasible plans: D_beta, then D_alpha, then
/// larger lambda, then smaller m_beta, then smaller m_alpha.
using PlanKey = std::tuple<double, double, double, int, int>;

inline PlanKey plan_key(double d_beta, double d_alpha, const Chromosome& c) {
    return {d_beta, d_alpha, -c.lambda, c.m_beta, c.m_alpha};
}

/// Best task split for one vehicle at a fixed rate report: minimizes that
/// vehicle's delay over m in {0..M} subject to its delay constraints, ignoring
/// the SOP constraint. Returns m = -1 if nothing is feasible.
struct SplitChoice {
    int m = -1;
    double delay = kInf;
};

template <class DelayOf>
SplitChoice best_split(int M, bool offload_allowed, DelayOf&& delay_of) {
    SplitChoice best;
    for (int m = offload_allowed ? 0 : M; m <= M; ++m) {
        auto [delay, ok] = delay_of(m);
        if (!ok) continue;
        if (delay < best.delay) best = {m, delay};
    }
    return best;
}

struct LambdaPlan {
    double lambda = 0.0;
    SplitChoice beta, alpha;
    PlanKey key{kInf, kInf, 0.0, 0, 0};
    bool feasible = false;
};

inline LambdaPlan plan_at(const OptContext& ctx, double lambda, bool beta_offload, bool alpha_offload) {
    const auto& p = ctx.params;
    const int M = p.m_tasks;
    const double D = p.max_delay_s;
    const auto link = ctx.link(lambda);
    LambdaPlan out;
    out.lambda = lambda;
    out.beta = best_split(M, beta_offload, [&](int m) {
        auto d = delays(M, m, link, p);
        bool ok = d.d_local_beta <= D && d.d_mec_beta_alpha <= D && d.d_mec_beta_b <= D;
        return std::pair{d.d_beta, ok};
    });
    out.alpha = best_split(M, alpha_offload, [&](int m) {
        auto d = delays(m, M, link, p);
        bool ok = d.d_local_alpha <= D && d.d_mec_alpha <= D;
        return std::pair{d.d_alpha, ok};
    });
    out.feasible = out.beta.m >= 0 && out.alpha.m >= 0;
    if (out.feasible) out.key = plan_key(out.beta.delay, out.alpha.delay, Chromosome{lambda, out.alpha.m, out.beta.m});
    return out;
}

/// Lazy exact search over a list of lambda values. Plans are ranked by an
/// optimistic key that assumes the SOP constraint holds; SOPs are evaluated in
/// that order and the scan stops once no remaining optimistic key can win.
inline OptResult lazy_grid_search(OptContext& ctx, const std::vector<double>& lambdas) {
    const double zeta = ctx.params.sop_tolerance;
    std::vector<LambdaPlan> optimistic;
    optimistic.reserve(lambdas.size());
    for (double l : lambdas) optimistic.push_back(plan_at(ctx, l, true, true));
    std::vector<std::size_t> order(optimistic.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return optimistic[a].key < optimistic[b].key; });

    OptResult res;
    res.evaluations = static_cast<long>(lambdas.size());
    std::optional<LambdaPlan> best;
    const int M = ctx.params.m_tasks;
    for (std::size_t idx : order) {
        const auto& opt = optimistic[idx];
        if (!opt.feasible) break;  // infeasible plans sort last
        if (best && !(opt.key < best->key)) break;
        const double l = opt.lambda;
        bool beta_ok = opt.beta.m == M || (ctx.sop->beta_lower_bound(l) <= zeta && ctx.sop->beta(l) <= zeta);
        bool alpha_ok = opt.alpha.m == M || ctx.sop->alpha(l) <= zeta;
        LambdaPlan actual = (beta_ok && alpha_ok) ? opt : plan_at(ctx, l, beta_ok, alpha_ok);
        if (actual.feasible && (!best || actual.key < best->key)) best = actual;
    }
    if (best) {
        res.feasible = true;
        res.best = Chromosome{best->lambda, best->alpha.m, best->beta.m};
        res.d_beta = best->beta.delay;
        res.d_alpha = best->alpha.delay;
    } else {
        // Report full local execution, flagged infeasible.
        res.best = Chromosome{lambdas.empty() ? 0.25 : lambdas.front(), M, M};
        auto d = delays(M, M, ctx.link(res.best.lambda), ctx.params);
        res.d_beta = d.d_beta;
        res.d_alpha = d.d_alpha;
    }
    return res;
}

}  // namespace detail

/// Exact argmin of D_beta over lambda in {step, 2 step, ...} x m_alpha x m_beta.
inline OptResult exhaustive_search(OptContext& ctx, double lambda_step) {
    if (ctx.access != Access::noma) throw std::invalid_argument("exhaustive_search: NOMA context required");
    return detail::lazy_grid_search(ctx, lambda_grid(lambda_step));
}

/// Orthogonal-slot baseline: the relay power split is fixed, only m_alpha and
/// m_beta are optimized. The reported lambda is the fixed equal split 0.5.
inline OptResult oma_baseline(OptContext& ctx) {
    OptContext oma = ctx;
    oma.access = Access::oma;
    if (!ctx.sop || ctx.sop->access() != Access::oma)
        oma.sop = std::make_shared<SopCache>(ctx.params, ctx.geo, Access::oma, ctx.an_enabled);
    auto r = detail::lazy_grid_search(oma, {0.5});
    r.best.lambda = 0.5;
    return r;
}

// ---------------------------------------------------------------------------
// GA-PATS

namespace detail {

inline double snap_lambda(double l, double step) {
    if (step <= 0.0) return std::clamp(l, 1e-6, 0.5 - 1e-6);
    auto grid_max = static_cast<long>(std::ceil((0.5 - 1e-12) / step)) - 1;
    long k = std::lround(l / step);
    k = std::clamp<long>(k, 1, grid_max);
    return static_cast<double>(k) * step;
}

enum : std::uint64_t { kInit = 1, kSelect = 2, kCross = 3, kMutate = 4 };

}  // namespace detail

inline OptResult ga_pats(OptContext& ctx, const GaConfig& ga) {
    ga.validate();
    if (ctx.access != Access::noma) throw std::invalid_argument("ga_pats: NOMA context required");
    const int M = ctx.params.m_tasks;
    const double mu = ga.penalty_weight >= 0 ? ga.penalty_weight : 10.0 * ctx.params.max_delay_s;
    const auto S = static_cast<std::size_t>(ga.population);
    auto snap = [&](double l) { return detail::snap_lambda(l, ga.grid_step); };
    auto stream = [&](std::uint64_t gen, std::uint64_t idx, std::uint64_t purpose) {
        return Stream(derive_seed(ga.seed, {gen, idx, purpose}));
    };

    std::map<std::tuple<double, int, int>, FitnessReport> memo;
    OptResult res;
    auto eval = [&](const Chromosome& c) -> const FitnessReport& {
        auto k = std::make_tuple(c.lambda, c.m_alpha, c.m_beta);
        auto it = memo.find(k);
        if (it != memo.end()) return it->second;
        ++res.evaluations;
        return memo.emplace(k, evaluate_fitness(c, ctx, mu, ga.eps0)).first->second;
    };

    std::vector<Chromosome> pop(S);
    for (std::size_t i = 0; i < S; ++i) {
        auto rng = stream(0, i, detail::kInit);
        std::uniform_real_distribution<double> lam(0.0, 0.5);
        std::uniform_int_distribution<int> m(0, M);
        double l = lam(rng);
        while (l <= 0.0) l = lam(rng);
        pop[i] = Chromosome{snap(l), m(rng), m(rng)};
    }
    const bool single_point = M == 0 && ga.grid_step > 0 && lambda_grid(ga.grid_step).size() == 1;

    std::optional<Chromosome> best_feasible;
    FitnessReport best_feasible_rep;
    Chromosome best_any = pop[0];
    double best_any_fit = -1.0;
    double prev_best_d = kInf;
    int calm = 0;

    for (int gen = 0; gen < ga.iterations; ++gen) {
        std::vector<double> fit(S);
        std::size_t elite = 0;
        for (std::size_t i = 0; i < S; ++i) {
            const auto& c = pop[i];
            if (!(c.lambda > 0 && c.lambda < 0.5) || c.m_alpha < 0 || c.m_alpha > M || c.m_beta < 0 || c.m_beta > M)
                throw std::logic_error("ga_pats: chromosome left the C1/C2 domain");
            const auto& r = eval(c);
            fit[i] = r.fitness;
            if (fit[i] > fit[elite]) elite = i;
            if (r.fitness > best_any_fit) {
                best_any_fit = r.fitness;
                best_any = c;
            }
            if (r.feasible) {
                bool better = !best_feasible || detail::plan_key(r.d_beta, r.d_alpha, c) <
                                                    detail::plan_key(best_feasible_rep.d_beta, best_feasible_rep.d_alpha,
                                                                     *best_feasible);
                if (better) {
                    best_feasible = c;
                    best_feasible_rep = r;
                }
            }
        }
        res.history.push_back(best_any_fit);
        res.generations = gen + 1;
        const double best_d = best_feasible ? best_feasible_rep.d_beta : kInf;
        if (ga.record_trace) {
            double mean = std::accumulate(fit.begin(), fit.end(), 0.0) / static_cast<double>(S);
            res.trace.push_back({gen, best_d, mean});
        }
        if (single_point) break;
        if (gen > 0 && std::isfinite(best_d) && (best_d == prev_best_d || std::abs(best_d - prev_best_d) <= ga.tolerance)) {
            if (++calm >= ga.patience) break;
        } else {
            calm = 0;
        }
        prev_best_d = best_d;
        if (gen + 1 == ga.iterations) break;

        // Roulette-wheel selection (uniform when every fitness is zero).
        const double total = std::accumulate(fit.begin(), fit.end(), 0.0);
        std::vector<Chromosome> next(S);
        for (std::size_t i = 0; i < S; ++i) {
            auto rng = stream(static_cast<std::uint64_t>(gen), i, detail::kSelect);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            std::size_t pick = S - 1;
            if (total > 0.0) {
                double target = u(rng) * total, acc = 0.0;
                for (std::size_t j = 0; j < S; ++j) {
                    acc += fit[j];
                    if (target < acc) {
                        pick = j;
                        break;
                    }
                }
            } else {
                pick = std::min<std::size_t>(S - 1, static_cast<std::size_t>(u(rng) * static_cast<double>(S)));
            }
            next[i] = pop[pick];
        }
        // Crossover of adjacent pairs: blend lambda, swap m_beta.
        for (std::size_t i = 0; i + 1 < S; i += 2) {
            auto rng = stream(static_cast<std::uint64_t>(gen), i, detail::kCross);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            if (u(rng) >= ga.crossover_prob) continue;
            double a = u(rng);
            auto& x = next[i];
            auto& y = next[i + 1];
            double lx = a * x.lambda + (1.0 - a) * y.lambda;
            double ly = (1.0 - a) * x.lambda + a * y.lambda;
            x.lambda = snap(lx);
            y.lambda = snap(ly);
            std::swap(x.m_beta, y.m_beta);
        }
        // Mutation, gene by gene.
        for (std::size_t i = 0; i < S; ++i) {
            auto rng = stream(static_cast<std::uint64_t>(gen), i, detail::kMutate);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            std::normal_distribution<double> step(0.0, ga.lambda_sigma);
            std::uniform_int_distribution<int> m(0, M);
            auto& c = next[i];
            if (u(rng) < ga.mutation_prob) c.lambda = snap(c.lambda + step(rng));
            if (u(rng) < ga.mutation_prob) c.m_alpha = m(rng);
            if (u(rng) < ga.mutation_prob) c.m_beta = m(rng);
        }
        next[0] = pop[elite];  // elitism
        pop = std::move(next);
    }

    if (best_feasible) {
        res.best = *best_feasible;
        res.d_beta = best_feasible_rep.d_beta;
        res.d_alpha = best_feasible_rep.d_alpha;
        res.feasible = true;
    } else {
        res.best = best_any;
        const auto& r = eval(best_any);
        res.d_beta = r.d_beta;
        res.d_alpha = r.d_alpha;
        res.feasible = false;
    }
    return res;
}

inline void write_trace_csv(std::ostream& os, const OptResult& r) {
    os << "generation,best_d_beta,mean_fitness\n";
    for (const auto& t : r.trace) os << t.generation << ',' << t.best_d_beta << ',' << t.mean_fitness << '\n';
}

}  // namespace nomasec
