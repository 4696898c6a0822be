// Parameter sweeps, analytic-vs-simulation validation, CSV I/O and SVG plots.
#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "channel.hpp"
#include "link.hpp"
#include "montecarlo.hpp"
#include "optimizer.hpp"
#include "params.hpp"
#include "scenario.hpp"
#include "secrecy_analytic.hpp"

namespace nomasec {

inline constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Sweep specification

enum class SweepVar { p_beta_dbm, d_alpha_beta_m, rs, zeta };

inline std::string to_string(SweepVar v) {
    switch (v) {
        case SweepVar::p_beta_dbm: return "p_beta_dbm";
        case SweepVar::d_alpha_beta_m: return "d_alpha_beta_m";
        case SweepVar::rs: return "rs";
        case SweepVar::zeta: return "zeta";
    }
    return "?";
}

inline SweepVar parse_sweep_var(const std::string& s) {
    if (s == "p_beta" || s == "p_beta_dbm") return SweepVar::p_beta_dbm;
    if (s == "d_alpha_beta" || s == "d_alpha_beta_m") return SweepVar::d_alpha_beta_m;
    if (s == "rs") return SweepVar::rs;
    if (s == "zeta") return SweepVar::zeta;
    throw std::invalid_argument("unknown sweep variable '" + s + "'");
}

enum class Pairing { gpm, rpm };
enum class Algorithm { eg, ga };

/// A scheme token such as "gpm-noma", "rpm-noma-nan" or "gpm-noma-an-ga".
/// Omitted parts default to GPM, NOMA, AN and exhaustive search.
struct Scheme {
    Pairing pairing = Pairing::gpm;
    Access access = Access::noma;
    bool an = true;
    Algorithm algorithm = Algorithm::eg;

    std::string name() const {
        std::string s = pairing == Pairing::gpm ? "gpm" : "rpm";
        s += access == Access::noma ? "-noma" : "-oma";
        s += an ? "-an" : "-nan";
        s += algorithm == Algorithm::eg ? "-eg" : "-ga";
        return s;
    }

    static Scheme parse(const std::string& token) {
        Scheme s;
        std::string lower;
        for (char c : token) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        std::istringstream in(lower);
        std::string part;
        bool any = false;
        while (std::getline(in, part, '-')) {
            any = true;
            if (part == "gpm") s.pairing = Pairing::gpm;
            else if (part == "rpm") s.pairing = Pairing::rpm;
            else if (part == "noma") s.access = Access::noma;
            else if (part == "oma") s.access = Access::oma;
            else if (part == "an") s.an = true;
            else if (part == "nan") s.an = false;
            else if (part == "eg") s.algorithm = Algorithm::eg;
            else if (part == "ga") s.algorithm = Algorithm::ga;
            else throw std::invalid_argument("unknown scheme component '" + part + "' in '" + token + "'");
        }
        if (!any) throw std::invalid_argument("empty scheme token");
        if (s.access == Access::oma && s.algorithm == Algorithm::ga)
            throw std::invalid_argument("scheme '" + token + "': OMA has no power split to search with GA");
        return s;
    }
};

struct SweepSpec {
    SweepVar variable = SweepVar::p_beta_dbm;
    std::vector<double> values;
    std::vector<Scheme> schemes;
    long replications = 1000;
    long first_rep = 0;  // replication indices [first_rep, first_rep + replications)
    std::uint64_t seed = 42;
    GaConfig ga;
    unsigned threads = 1;

    void validate() const {
        if (values.empty()) throw std::invalid_argument("sweep: no values");
        if (schemes.empty()) throw std::invalid_argument("sweep: no schemes");
        if (replications < 1) throw std::invalid_argument("sweep: replications must be >= 1");
        if (first_rep < 0) throw std::invalid_argument("sweep: first_rep must be >= 0");
        if (variable == SweepVar::d_alpha_beta_m)
            for (double v : values)
                if (!(v > 0)) throw std::invalid_argument("sweep: d_alpha_beta values must be positive");
    }
};

/// Values from..to inclusive in steps of `step` (rounded to the step grid).
inline std::vector<double> linspace_step(double from, double to, double step) {
    if (!(step > 0)) throw std::invalid_argument("step must be positive");
    if (to < from) throw std::invalid_argument("'to' must not be below 'from'");
    std::vector<double> out;
    long n = std::lround(std::floor((to - from) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(from + static_cast<double>(i) * step);
    return out;
}

// ---------------------------------------------------------------------------
// Metrics

inline constexpr std::size_t kMetricCount = 8;
inline constexpr std::array<const char*, kMetricCount> kMetricNames = {
    "sops", "sop_alpha", "sop_beta", "d_beta", "d_alpha", "lambda_star", "offloaded_tasks", "rate_beta"};

inline std::size_t metric_index(const std::string& name) {
    for (std::size_t i = 0; i < kMetricCount; ++i)
        if (name == kMetricNames[i]) return i;
    throw std::invalid_argument("unknown metric '" + name + "'");
}

struct PairMetrics {
    std::array<double, kMetricCount> values{};
    bool feasible = false;
};

/// Sums over the pairs of one (scheme, value, replication) cell.
struct RepRecord {
    std::string scheme;
    double value = 0.0;
    long rep = 0;
    long pairs = 0;
    long infeasible = 0;
    std::array<double, kMetricCount> sum{};
    std::array<double, kMetricCount> sum2{};
};

struct MetricStats {
    double mean = 0.0;
    double std_error = 0.0;
};

struct SweepRow {
    std::string scheme;
    double value = 0.0;
    long replications = 0;
    long pairs = 0;
    double infeasible_fraction = 0.0;
    std::array<MetricStats, kMetricCount> metrics{};

    const MetricStats& metric(const std::string& name) const { return metrics[metric_index(name)]; }
};

struct SweepResult {
    std::vector<RepRecord> reps;
    std::vector<SweepRow> rows;
};

inline SystemParams apply_sweep_value(SystemParams p, SweepVar var, double value) {
    switch (var) {
        case SweepVar::p_beta_dbm: p.p_edge_dbm = value; break;
        case SweepVar::rs: p.secrecy_rate_target = value; break;
        case SweepVar::zeta: p.sop_tolerance = value; break;
        case SweepVar::d_alpha_beta_m: break;  // applied to the pair geometry
    }
    p.validate();
    return p;
}

/// Optimizes one pair and collects its metrics at the chosen plan.
inline PairMetrics evaluate_pair(const SystemParams& params, const Scheme& scheme, const LinkGeometry& geo,
                                 const ChannelGains& gains, const GaConfig& ga) {
    auto ctx = OptContext::make(params, geo, gains, scheme.access, scheme.an);
    OptResult r;
    if (scheme.access == Access::oma) r = oma_baseline(ctx);
    else if (scheme.algorithm == Algorithm::ga) r = ga_pats(ctx, ga);
    else r = exhaustive_search(ctx, params.lambda_step);
    const double lam = r.best.lambda;
    auto sec = ctx.sop->report(lam);
    auto link = ctx.link(lam);
    PairMetrics m;
    m.feasible = r.feasible;
    m.values = {sec.p_sops, sec.p_sop_alpha, sec.p_sop_beta, r.d_beta, r.d_alpha, lam,
                static_cast<double>(params.m_tasks - r.best.m_beta), link.rate_beta()};
    return m;
}

/// Seed of replication `rep`; shared by every scheme and sweep value.
inline std::uint64_t replication_seed(std::uint64_t master, long rep) {
    return derive_seed(master, static_cast<std::uint64_t>(rep));
}

inline RepRecord run_replication(const SystemParams& params, const Scheme& scheme, SweepVar var, double value,
                                 long rep, std::uint64_t master_seed, const GaConfig& ga_base) {
    const auto rs = replication_seed(master_seed, rep);
    const auto p = apply_sweep_value(params, var, value);
    const auto scen = generate_scenario(p, derive_seed(rs, 0));
    const auto groups = assign_groups(scen.vehicles, p);
    const auto pairing = scheme.pairing == Pairing::gpm ? pair_gpm(groups, scen.vehicles)
                                                         : pair_rpm(groups, scen.vehicles, derive_seed(rs, 1));
    const bool geometric = scheme.an && p.an_mode == AnMode::geometric;
    RepRecord rec;
    rec.scheme = scheme.name();
    rec.value = value;
    rec.rep = rep;
    ChannelDraw draw;
    for (const auto& [center_id, edge_id] : pairing.pairs) {
        const auto& va = detail::find_vehicle(scen.vehicles, center_id);
        const auto& vb = detail::find_vehicle(scen.vehicles, edge_id);
        double l_beta = vb.horiz_dist_m;
        if (var == SweepVar::d_alpha_beta_m) {
            double dir = vb.horiz_dist_m >= va.horiz_dist_m ? 1.0 : -1.0;
            l_beta = va.horiz_dist_m + dir * value;
        }
        auto geo = make_geometry(va.horiz_dist_m, l_beta, scen.eavesdropper.horiz_dist_m, p);
        // Channels are keyed by the edge vehicle so pairings see the same fading.
        Stream rng(derive_seed(rs, {2, static_cast<std::uint64_t>(edge_id)}));
        draw_channels_into(draw, p, rng, DrawOptions{geometric, geometric});
        auto gains = make_gains(draw, geo, p, p.an_mode, scheme.an);
        GaConfig ga = ga_base;
        ga.seed = derive_seed(rs, {3, static_cast<std::uint64_t>(edge_id)});
        auto m = evaluate_pair(p, scheme, geo, gains, ga);
        ++rec.pairs;
        if (!m.feasible) ++rec.infeasible;
        for (std::size_t i = 0; i < kMetricCount; ++i) {
            rec.sum[i] += m.values[i];
            rec.sum2[i] += m.values[i] * m.values[i];
        }
    }
    return rec;
}

/// Aggregates replication records into one row per (scheme, value). Records
/// are combined in replication order, so pooled runs reproduce a single run.
inline std::vector<SweepRow> summarize(std::vector<RepRecord> reps) {
    std::vector<std::string> scheme_order;
    std::vector<double> value_order;
    for (const auto& r : reps) {
        if (std::find(scheme_order.begin(), scheme_order.end(), r.scheme) == scheme_order.end())
            scheme_order.push_back(r.scheme);
        if (std::find(value_order.begin(), value_order.end(), r.value) == value_order.end())
            value_order.push_back(r.value);
    }
    std::stable_sort(reps.begin(), reps.end(), [](const RepRecord& a, const RepRecord& b) { return a.rep < b.rep; });
    std::vector<SweepRow> rows;
    for (const auto& s : scheme_order) {
        for (double v : value_order) {
            RepRecord tot;
            long n_reps = 0;
            for (const auto& r : reps) {
                if (r.scheme != s || r.value != v) continue;
                ++n_reps;
                tot.pairs += r.pairs;
                tot.infeasible += r.infeasible;
                for (std::size_t i = 0; i < kMetricCount; ++i) {
                    tot.sum[i] += r.sum[i];
                    tot.sum2[i] += r.sum2[i];
                }
            }
            if (n_reps == 0) continue;
            SweepRow row;
            row.scheme = s;
            row.value = v;
            row.replications = n_reps;
            row.pairs = tot.pairs;
            row.infeasible_fraction = tot.pairs ? static_cast<double>(tot.infeasible) / static_cast<double>(tot.pairs) : 0.0;
            for (std::size_t i = 0; i < kMetricCount; ++i) {
                auto e = detail::finish(tot.sum[i], tot.sum2[i], tot.pairs);
                row.metrics[i] = {e.mean, e.std_error};
            }
            rows.push_back(row);
        }
    }
    return rows;
}

/// Runs every (scheme, value, replication) cell. Cells are independent and are
/// written to fixed slots, so the worker count never changes the output.
inline SweepResult run_sweep(const SweepSpec& spec, const SystemParams& params,
                             const std::function<void(long, long)>& progress = {}) {
    spec.validate();
    params.validate();
    spec.ga.validate();
    const long n_cells = static_cast<long>(spec.schemes.size() * spec.values.size()) * spec.replications;
    SweepResult out;
    out.reps.resize(static_cast<std::size_t>(n_cells));
    std::atomic<long> next{0}, done{0};
    auto worker = [&] {
        for (long c; (c = next.fetch_add(1)) < n_cells;) {
            long rep = c % spec.replications;
            long rest = c / spec.replications;
            auto v = static_cast<std::size_t>(rest % static_cast<long>(spec.values.size()));
            auto s = static_cast<std::size_t>(rest / static_cast<long>(spec.values.size()));
            out.reps[static_cast<std::size_t>(c)] = run_replication(params, spec.schemes[s], spec.variable,
                                                                    spec.values[v], spec.first_rep + rep, spec.seed,
                                                                    spec.ga);
            long d = ++done;
            if (progress) progress(d, n_cells);
        }
    };
    unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    out.rows = summarize(out.reps);
    return out;
}

// ---------------------------------------------------------------------------
// CSV I/O

namespace detail {

inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string fmt6(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, ',')) out.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

/// Header + data rows of a CSV, skipping '#' metadata lines.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t col(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw std::runtime_error("CSV: missing column '" + name + "'");
    }
};

inline CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto cells = split_csv_line(line);
        if (t.header.empty()) {
            t.header = cells;
            continue;
        }
        if (cells.size() != t.header.size())
            throw std::runtime_error("CSV: row has " + std::to_string(cells.size()) + " cells, header has " +
                                     std::to_string(t.header.size()));
        t.rows.push_back(std::move(cells));
    }
    if (t.header.empty()) throw std::runtime_error("CSV: no header");
    return t;
}

inline double csv_double(const std::string& s) { return to_double("csv", s); }

}  // namespace detail

/// '# key=value' audit header: code version, sweep definition and every resolved parameter.
inline void write_metadata(std::ostream& os, const SystemParams& params, const std::map<std::string, std::string>& extra) {
    os << "# tool=nomasec-sim\n# version=" << kVersion << '\n';
    for (const auto& [k, v] : extra) os << "# " << k << '=' << v << '\n';
    std::istringstream in(serialize_params(params));
    std::string line;
    while (std::getline(in, line)) {
        auto eq = line.find('=');
        os << "# param." << detail::trim(line.substr(0, eq)) << '=' << detail::trim(line.substr(eq + 1)) << '\n';
    }
}

inline std::map<std::string, std::string> sweep_metadata(const SweepSpec& spec) {
    std::map<std::string, std::string> m;
    m["variable"] = to_string(spec.variable);
    std::string vals, schemes;
    for (double v : spec.values) vals += (vals.empty() ? "" : ";") + detail::fmt17(v);
    for (const auto& s : spec.schemes) schemes += (schemes.empty() ? "" : ";") + s.name();
    m["values"] = vals;
    m["schemes"] = schemes;
    m["replications"] = std::to_string(spec.replications);
    m["first_rep"] = std::to_string(spec.first_rep);
    m["seed"] = std::to_string(spec.seed);
    m["ga.population"] = std::to_string(spec.ga.population);
    m["ga.iterations"] = std::to_string(spec.ga.iterations);
    m["ga.crossover_prob"] = detail::fmt17(spec.ga.crossover_prob);
    m["ga.mutation_prob"] = detail::fmt17(spec.ga.mutation_prob);
    m["ga.tolerance"] = detail::fmt17(spec.ga.tolerance);
    m["ga.patience"] = std::to_string(spec.ga.patience);
    m["ga.eps0"] = detail::fmt17(spec.ga.eps0);
    m["ga.penalty_weight"] = detail::fmt17(spec.ga.penalty_weight);
    return m;
}

inline void write_summary_csv(std::ostream& os, const std::vector<SweepRow>& rows, SweepVar var) {
    os << "scheme,variable,value,replications,pairs,infeasible_fraction";
    for (auto* m : kMetricNames) os << ',' << m << "_mean," << m << "_stderr";
    os << '\n';
    for (const auto& r : rows) {
        os << r.scheme << ',' << to_string(var) << ',' << detail::fmt17(r.value) << ',' << r.replications << ','
           << r.pairs << ',' << detail::fmt17(r.infeasible_fraction);
        for (const auto& m : r.metrics) os << ',' << detail::fmt17(m.mean) << ',' << detail::fmt17(m.std_error);
        os << '\n';
    }
}

inline void write_reps_csv(std::ostream& os, const std::vector<RepRecord>& reps) {
    os << "scheme,value,rep,pairs,infeasible";
    for (auto* m : kMetricNames) os << ',' << m << "_sum," << m << "_sum2";
    os << '\n';
    for (const auto& r : reps) {
        os << r.scheme << ',' << detail::fmt17(r.value) << ',' << r.rep << ',' << r.pairs << ',' << r.infeasible;
        for (std::size_t i = 0; i < kMetricCount; ++i)
            os << ',' << detail::fmt17(r.sum[i]) << ',' << detail::fmt17(r.sum2[i]);
        os << '\n';
    }
}

inline std::vector<RepRecord> read_reps_csv(const std::string& text) {
    auto t = detail::parse_csv(text);
    std::vector<RepRecord> out;
    for (const auto& row : t.rows) {
        RepRecord r;
        r.scheme = row[t.col("scheme")];
        r.value = detail::csv_double(row[t.col("value")]);
        r.rep = static_cast<long>(detail::to_integer("rep", row[t.col("rep")]));
        r.pairs = static_cast<long>(detail::to_integer("pairs", row[t.col("pairs")]));
        r.infeasible = static_cast<long>(detail::to_integer("infeasible", row[t.col("infeasible")]));
        for (std::size_t i = 0; i < kMetricCount; ++i) {
            r.sum[i] = detail::csv_double(row[t.col(std::string(kMetricNames[i]) + "_sum")]);
            r.sum2[i] = detail::csv_double(row[t.col(std::string(kMetricNames[i]) + "_sum2")]);
        }
        out.push_back(r);
    }
    return out;
}

/// Combines replication files from split invocations. Duplicate
/// (scheme, value, rep) cells are an error.
inline std::vector<SweepRow> pool_reps(const std::vector<std::vector<RepRecord>>& parts) {
    std::vector<RepRecord> all;
    std::map<std::tuple<std::string, double, long>, int> seen;
    for (const auto& p : parts)
        for (const auto& r : p) {
            if (seen[{r.scheme, r.value, r.rep}]++)
                throw std::runtime_error("pool: replication " + std::to_string(r.rep) + " of " + r.scheme +
                                         " appears twice");
            all.push_back(r);
        }
    return summarize(std::move(all));
}

inline std::vector<SweepRow> read_summary_csv(const std::string& text, std::string* variable = nullptr) {
    auto t = detail::parse_csv(text);
    std::vector<SweepRow> out;
    for (const auto& row : t.rows) {
        SweepRow r;
        r.scheme = row[t.col("scheme")];
        if (variable) *variable = row[t.col("variable")];
        r.value = detail::csv_double(row[t.col("value")]);
        r.replications = static_cast<long>(detail::to_integer("replications", row[t.col("replications")]));
        r.pairs = static_cast<long>(detail::to_integer("pairs", row[t.col("pairs")]));
        r.infeasible_fraction = detail::csv_double(row[t.col("infeasible_fraction")]);
        for (std::size_t i = 0; i < kMetricCount; ++i) {
            r.metrics[i].mean = detail::csv_double(row[t.col(std::string(kMetricNames[i]) + "_mean")]);
            r.metrics[i].std_error = detail::csv_double(row[t.col(std::string(kMetricNames[i]) + "_stderr")]);
        }
        out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Analytic validation

struct ValidationGrid {
    std::vector<double> p_beta_dbm{0, 10, 20, 30};
    std::vector<double> lambdas{0.1, 0.3, 0.45};
    std::vector<double> d_alpha_beta_m;  // empty: the configured reference pair
    std::vector<bool> an{true, false};
    long mc_trials = 1000000;
    int low_nodes = 250;
    std::uint64_t seed = 42;
    unsigned threads = 1;
    double abs_tol = 0.02;
    double rel_tol = 0.05;
    double self_convergence_tol = 1e-6;
};

struct ValidationRow {
    bool an = true;
    double p_beta_dbm = 0, lambda = 0, d_alpha_beta_m = 0;
    double alpha_closed = 0, alpha_semi = 0, alpha_printed = 0;
    double beta_gl = 0, beta_gl_low = 0, beta_semi = 0, beta_printed = 0;
    McSopResult mc;
    bool shipped_ok = false, semi_ok = false, convergence_ok = false;
    bool independence_ok = false;  // report only
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    double max_dev_shipped = 0, mean_dev_shipped = 0;
    double max_dev_semi = 0;
    double max_self_convergence = 0;
    double max_dev_printed_alpha = 0, max_dev_printed_beta = 0;
    bool passed = false;
};

inline ValidationReport validate_analytics(const SystemParams& params, const ValidationGrid& grid) {
    params.validate();
    ValidationReport rep;
    std::vector<double> ds = grid.d_alpha_beta_m;
    if (ds.empty()) ds.push_back(std::abs(params.ref_beta_m - params.ref_alpha_m));
    auto within = [&](double a, double mc) { return std::abs(a - mc) <= std::max(grid.abs_tol, grid.rel_tol * mc); };
    double sum_dev = 0;
    int n_dev = 0;
    bool all = true;
    for (bool an : grid.an)
        for (double d : ds)
            for (double pb : grid.p_beta_dbm)
                for (double lam : grid.lambdas) {
                    auto p = params;
                    p.p_edge_dbm = pb;
                    double dir = params.ref_beta_m >= params.ref_alpha_m ? 1.0 : -1.0;
                    auto geo = make_geometry(p.ref_alpha_m, p.ref_alpha_m + dir * d, p.ref_eve_m, p);
                    auto in = make_sop_inputs(p, geo, lam, Access::noma, an);
                    ValidationRow r;
                    r.an = an;
                    r.p_beta_dbm = pb;
                    r.lambda = lam;
                    r.d_alpha_beta_m = d;
                    r.alpha_closed = sop_alpha_closed(in).value;
                    r.alpha_semi = sop_alpha_semianalytic(in);
                    r.alpha_printed = sop_alpha_as_printed(in);
                    r.beta_gl = sop_beta_quadrature(in);
                    auto low = in;
                    low.quad_nodes = grid.low_nodes;
                    r.beta_gl_low = sop_beta_quadrature(low);
                    r.beta_semi = sop_beta_semianalytic(in);
                    r.beta_printed = sop_beta_as_printed(in);
                    McConfig mc;
                    mc.trials = grid.mc_trials;
                    mc.seed = grid.seed;
                    mc.an_mode = p.an_mode;
                    mc.an_enabled = an;
                    mc.threads = grid.threads;
                    OffloadPlan plan;
                    plan.lambda = lam;
                    r.mc = mc_sop(geo, plan, p, mc);
                    const double ma = r.mc.alpha.mean, mb = r.mc.beta.mean;
                    r.shipped_ok = within(r.alpha_closed, ma) && within(r.beta_gl, mb);
                    r.semi_ok = std::abs(r.alpha_semi - ma) <= grid.abs_tol && std::abs(r.beta_semi - mb) <= grid.abs_tol;
                    double conv = std::abs(r.beta_gl - r.beta_gl_low);
                    r.convergence_ok = conv <= grid.self_convergence_tol;
                    r.independence_ok = std::abs(r.mc.sops.mean - r.mc.sops_from_marginals()) <=
                                        3.0 * r.mc.sops.std_error + 1e-12;
                    double dev = std::max(std::abs(r.alpha_closed - ma), std::abs(r.beta_gl - mb));
                    rep.max_dev_shipped = std::max(rep.max_dev_shipped, dev);
                    sum_dev += dev;
                    ++n_dev;
                    rep.max_dev_semi = std::max(
                        {rep.max_dev_semi, std::abs(r.alpha_semi - ma), std::abs(r.beta_semi - mb)});
                    rep.max_self_convergence = std::max(rep.max_self_convergence, conv);
                    if (std::isfinite(r.alpha_printed))
                        rep.max_dev_printed_alpha = std::max(rep.max_dev_printed_alpha, std::abs(r.alpha_printed - r.alpha_semi));
                    else
                        rep.max_dev_printed_alpha = std::numeric_limits<double>::infinity();
                    rep.max_dev_printed_beta = std::max(rep.max_dev_printed_beta, std::abs(r.beta_printed - r.beta_semi));
                    all = all && r.shipped_ok && r.semi_ok && r.convergence_ok;
                    rep.rows.push_back(r);
                }
    rep.mean_dev_shipped = n_dev ? sum_dev / n_dev : 0.0;
    rep.passed = all;
    return rep;
}

inline void write_validation_csv(std::ostream& os, const ValidationReport& rep) {
    os << "# max_dev_shipped=" << detail::fmt17(rep.max_dev_shipped) << '\n'
       << "# mean_dev_shipped=" << detail::fmt17(rep.mean_dev_shipped) << '\n'
       << "# max_dev_semi=" << detail::fmt17(rep.max_dev_semi) << '\n'
       << "# max_self_convergence=" << detail::fmt17(rep.max_self_convergence) << '\n'
       << "# max_dev_printed_alpha=" << detail::fmt17(rep.max_dev_printed_alpha) << '\n'
       << "# max_dev_printed_beta=" << detail::fmt17(rep.max_dev_printed_beta) << '\n'
       << "# passed=" << (rep.passed ? "true" : "false") << '\n';
    os << "an,p_beta_dbm,lambda,d_alpha_beta_m,alpha_closed,alpha_semi,alpha_printed,alpha_mc,alpha_mc_se,"
          "beta_gl,beta_gl_low,beta_semi,beta_printed,beta_mc,beta_mc_se,sops_mc,sops_mc_marginal,sops_mc_se,"
          "shipped_ok,semi_ok,convergence_ok,independence_ok\n";
    for (const auto& r : rep.rows) {
        auto f = detail::fmt17;
        os << (r.an ? "an" : "nan") << ',' << f(r.p_beta_dbm) << ',' << f(r.lambda) << ',' << f(r.d_alpha_beta_m) << ','
           << f(r.alpha_closed) << ',' << f(r.alpha_semi) << ',' << f(r.alpha_printed) << ',' << f(r.mc.alpha.mean)
           << ',' << f(r.mc.alpha.std_error) << ',' << f(r.beta_gl) << ',' << f(r.beta_gl_low) << ','
           << f(r.beta_semi) << ',' << f(r.beta_printed) << ',' << f(r.mc.beta.mean) << ',' << f(r.mc.beta.std_error)
           << ',' << f(r.mc.sops.mean) << ',' << f(r.mc.sops_from_marginals()) << ',' << f(r.mc.sops.std_error) << ','
           << r.shipped_ok << ',' << r.semi_ok << ',' << r.convergence_ok << ',' << r.independence_ok << '\n';
    }
}

// ---------------------------------------------------------------------------
// SVG plots

struct FigureSpec {
    std::string title;
    std::vector<std::string> metrics;
    std::string y_label;
};

inline FigureSpec figure_spec(const std::string& kind) {
    if (kind == "fig3") return {"System secrecy outage probability", {"sops"}, "SOPS"};
    if (kind == "fig4") return {"Secrecy outage probability per vehicle", {"sop_alpha", "sop_beta"}, "SOP"};
    if (kind == "fig5") return {"SOPS versus pair distance", {"sops"}, "SOPS"};
    if (kind == "fig6") return {"Task completion delay", {"d_beta", "d_alpha"}, "delay (s)"};
    if (kind == "fig7") return {"Power allocation ratio", {"lambda_star"}, "lambda*"};
    if (kind == "fig8") return {"Achievable rate of the edge vehicle", {"rate_beta"}, "rate (bit/s/Hz)"};
    if (kind == "fig9") return {"Tasks offloaded by the edge vehicle", {"offloaded_tasks"}, "tasks"};
    throw std::invalid_argument("unknown figure kind '" + kind + "' (expected fig3..fig9)");
}

/// Renders a line chart of the summary CSV. Pure view of the data: the same
/// CSV always yields the same bytes.
inline std::string render_svg(const std::vector<SweepRow>& rows, const std::string& kind, const std::string& x_label) {
    if (rows.empty()) throw std::runtime_error("plot: no data rows");
    const auto fig = figure_spec(kind);
    struct Series {
        std::string label;
        std::vector<std::pair<double, double>> pts;
    };
    std::vector<Series> series;
    std::vector<std::string> schemes;
    for (const auto& r : rows)
        if (std::find(schemes.begin(), schemes.end(), r.scheme) == schemes.end()) schemes.push_back(r.scheme);
    for (const auto& m : fig.metrics)
        for (const auto& s : schemes) {
            Series ser;
            ser.label = fig.metrics.size() > 1 ? s + " " + m : s;
            for (const auto& r : rows)
                if (r.scheme == s) ser.pts.emplace_back(r.value, r.metric(m).mean);
            std::sort(ser.pts.begin(), ser.pts.end());
            series.push_back(ser);
        }
    double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
    for (const auto& s : series)
        for (auto [x, y] : s.pts) {
            if (!std::isfinite(y)) continue;
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    if (!std::isfinite(y0)) throw std::runtime_error("plot: no finite values");
    const bool log_y = y0 > 0 && y1 / y0 > 1e3;
    auto ty = [&](double y) { return log_y ? std::log10(y) : y; };
    double ly0 = ty(y0), ly1 = ty(y1);
    if (ly1 - ly0 < 1e-12) {
        ly0 -= 0.5;
        ly1 += 0.5;
    }
    if (x1 - x0 < 1e-12) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    const double W = 720, H = 460, L = 80, R = 220, T = 40, B = 60;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (ty(y) - ly0) / (ly1 - ly0) * (H - T - B); };
    static const std::array<const char*, 8> palette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                       "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
    std::ostringstream os;
    auto f = detail::fmt6;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
       << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << fig.title << "</text>\n";
    os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        double xv = x0 + (x1 - x0) * i / 5.0;
        double lyv = ly0 + (ly1 - ly0) * i / 5.0;
        double yv = log_y ? std::pow(10.0, lyv) : lyv;
        os << "<line x1=\"" << f(px(xv)) << "\" y1=\"" << H - B << "\" x2=\"" << f(px(xv)) << "\" y2=\"" << H - B + 5
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << f(px(xv)) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << f(xv)
           << "</text>\n";
        os << "<line x1=\"" << L - 5 << "\" y1=\"" << f(py(yv)) << "\" x2=\"" << L << "\" y2=\"" << f(py(yv))
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << L - 8 << "\" y=\"" << f(py(yv) + 4) << "\" text-anchor=\"end\">" << f(yv) << "</text>\n";
    }
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << x_label
       << "</text>\n";
    os << "<text x=\"18\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << (T + H - B) / 2 << ")\">" << fig.y_label << (log_y ? " (log scale)" : "") << "</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = palette[i % palette.size()];
        std::string pts;
        for (auto [x, y] : series[i].pts) {
            if (!std::isfinite(y) || (log_y && y <= 0)) continue;
            pts += f(px(x)) + "," + f(py(y)) + " ";
        }
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"" << pts << "\"/>\n";
        for (auto [x, y] : series[i].pts) {
            if (!std::isfinite(y) || (log_y && y <= 0)) continue;
            os << "<circle cx=\"" << f(px(x)) << "\" cy=\"" << f(py(y)) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        double ly = T + 10 + 20.0 * static_cast<double>(i);
        os << "<line x1=\"" << W - R + 15 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 40 << "\" y2=\"" << ly
           << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << W - R + 46 << "\" y=\"" << ly + 4 << "\">" << series[i].label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace nomasec
