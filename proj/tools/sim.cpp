// Command-line front end: sweeps, analytic validation, plots and single-pair tools.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nomasec/nomasec.hpp>

using namespace nomasec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;

struct ParamOptions {
    std::string config;
    std::vector<std::string> sets;

    void attach(CLI::App* app) {
        app->add_option("--config", config, "Parameter file (key = value lines); defaults to $NOMASEC_CONFIG");
        app->add_option("--set", sets, "Override one parameter, e.g. --set p_edge_dbm=20 (repeatable)");
    }

    SystemParams resolve() const {
        ConfigMap overrides;
        for (const auto& s : sets) {
            auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
            overrides[detail::trim(s.substr(0, eq))] = detail::trim(s.substr(eq + 1));
        }
        std::optional<std::string> path;
        if (!config.empty()) path = config;
        return resolve_params(path, overrides);
    }
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string part;
    while (std::getline(in, part, ',')) {
        auto t = detail::trim(part);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void add_ga_options(CLI::App* app, GaConfig& ga) {
    app->add_option("--ga-population", ga.population, "GA population size");
    app->add_option("--ga-iterations", ga.iterations, "GA generation limit");
    app->add_option("--ga-crossover", ga.crossover_prob, "GA crossover probability");
    app->add_option("--ga-mutation", ga.mutation_prob, "GA mutation probability");
    app->add_option("--ga-tolerance", ga.tolerance, "GA early-stop tolerance");
    app->add_option("--ga-patience", ga.patience, "Generations within tolerance before stopping");
    app->add_option("--ga-penalty", ga.penalty_weight, "Penalty weight (negative: 10 x max delay)");
    app->add_option("--ga-grid-step", ga.grid_step, "Snap lambda genes to this grid (0: continuous)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secure NOMA relaying with MEC offloading: simulation tool"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    // sweep -------------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write a summary CSV");
    ParamOptions sweep_params;
    sweep_params.attach(sweep);
    std::string sw_var = "p_beta", sw_values, sw_schemes = "gpm-noma", sw_out = "results.csv", sw_reps_out;
    double sw_from = 0, sw_to = 30, sw_step = 2;
    SweepSpec spec;
    bool sw_quiet = false;
    sweep->add_option("--var", sw_var, "p_beta | d_alpha_beta | rs | zeta");
    sweep->add_option("--from", sw_from, "First sweep value");
    sweep->add_option("--to", sw_to, "Last sweep value");
    sweep->add_option("--step", sw_step, "Sweep step");
    sweep->add_option("--values", sw_values, "Explicit comma-separated values (overrides --from/--to/--step)");
    sweep->add_option("--schemes", sw_schemes, "Comma-separated schemes, e.g. gpm-noma,rpm-noma,gpm-oma,gpm-noma-nan");
    sweep->add_option("--reps", spec.replications, "Replications (paired seeds)");
    sweep->add_option("--first-rep", spec.first_rep, "Index of the first replication (for split runs)");
    sweep->add_option("--seed", spec.seed, "Master seed");
    sweep->add_option("--threads", spec.threads, "Worker threads (0: hardware)");
    sweep->add_option("--out", sw_out, "Summary CSV path");
    sweep->add_option("--reps-out", sw_reps_out, "Per-replication CSV path (input for 'pool')");
    sweep->add_flag("--quiet", sw_quiet, "No progress output");
    add_ga_options(sweep, spec.ga);

    // validate ----------------------------------------------------------
    auto* validate = app.add_subcommand("validate", "Compare analytic SOPs with Monte Carlo");
    ParamOptions val_params;
    val_params.attach(validate);
    std::string val_grid = "default", val_out = "validation.csv";
    ValidationGrid grid;
    validate->add_option("--grid", val_grid, "default | quick")->check(CLI::IsMember({"default", "quick"}));
    validate->add_option("--trials", grid.mc_trials, "Monte Carlo trials per grid point");
    validate->add_option("--seed", grid.seed, "Monte Carlo seed");
    validate->add_option("--threads", grid.threads, "Worker threads (0: hardware)");
    validate->add_option("--out", val_out, "Report CSV path");

    // plot --------------------------------------------------------------
    auto* plot = app.add_subcommand("plot", "Render a summary CSV as SVG");
    std::string pl_kind = "fig3", pl_in, pl_out;
    plot->add_option("--kind", pl_kind, "fig3 ... fig9")->required();
    plot->add_option("--in", pl_in, "Summary CSV from 'sweep' or 'pool'")->required();
    plot->add_option("--out", pl_out, "SVG path")->required();

    // pool --------------------------------------------------------------
    auto* pool = app.add_subcommand("pool", "Merge per-replication CSVs from split sweeps");
    std::vector<std::string> po_in;
    std::string po_out = "pooled.csv";
    pool->add_option("--in", po_in, "Per-replication CSV files")->required()->expected(1, -1);
    pool->add_option("--out", po_out, "Summary CSV path");

    // pair-demo ---------------------------------------------------------
    auto* demo = app.add_subcommand("pair-demo", "Generate one scenario and print its pairing");
    ParamOptions demo_params;
    demo_params.attach(demo);
    std::uint64_t demo_seed = 42;
    std::string demo_method = "gpm", demo_out;
    demo->add_option("--seed", demo_seed, "Scenario seed");
    demo->add_option("--method", demo_method, "gpm | rpm")->check(CLI::IsMember({"gpm", "rpm"}));
    demo->add_option("--out", demo_out, "Scenario CSV path (default: stdout)");

    // optimize-one ------------------------------------------------------
    auto* one = app.add_subcommand("optimize-one", "Optimize a single relay pair");
    ParamOptions one_params;
    one_params.attach(one);
    double l_alpha = std::nan(""), l_beta = std::nan(""), l_eve = std::nan("");
    std::string one_scheme = "gpm-noma-an-eg", one_trace;
    std::uint64_t one_seed = 42;
    GaConfig one_ga;
    one->add_option("--l-alpha", l_alpha, "Relay position (m); default from ref_alpha_m");
    one->add_option("--l-beta", l_beta, "Edge vehicle position (m); default from ref_beta_m");
    one->add_option("--l-eve", l_eve, "Eavesdropper position (m); default from ref_eve_m");
    one->add_option("--scheme", one_scheme, "Access/AN/algorithm token, e.g. noma-an-ga or oma");
    one->add_option("--seed", one_seed, "Channel and GA seed");
    one->add_option("--trace", one_trace, "GA trace CSV path");
    add_ga_options(one, one_ga);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*sweep) {
            auto params = sweep_params.resolve();
            spec.variable = parse_sweep_var(sw_var);
            if (!sw_values.empty()) {
                for (const auto& v : split_list(sw_values)) spec.values.push_back(detail::to_double("--values", v));
            } else {
                spec.values = linspace_step(sw_from, sw_to, sw_step);
            }
            for (const auto& s : split_list(sw_schemes)) spec.schemes.push_back(Scheme::parse(s));
            std::function<void(long, long)> progress;
            if (!sw_quiet)
                progress = [](long done, long total) {
                    if (done == total || done % 100 == 0) std::fprintf(stderr, "\r%ld/%ld cells", done, total);
                    if (done == total) std::fputc('\n', stderr);
                };
            auto result = run_sweep(spec, params, progress);
            std::ostringstream os;
            write_metadata(os, params, sweep_metadata(spec));
            write_summary_csv(os, result.rows, spec.variable);
            write_file(sw_out, os.str());
            if (!sw_reps_out.empty()) {
                std::ostringstream rs;
                write_metadata(rs, params, sweep_metadata(spec));
                write_reps_csv(rs, result.reps);
                write_file(sw_reps_out, rs.str());
            }
            for (const auto& r : result.rows)
                if (r.infeasible_fraction > 0)
                    std::fprintf(stderr, "note: %s at %g: %.1f%% of pairs infeasible\n", r.scheme.c_str(), r.value,
                                 100.0 * r.infeasible_fraction);
            return kExitOk;
        }
        if (*validate) {
            auto params = val_params.resolve();
            if (val_grid == "quick") {
                grid.p_beta_dbm = {10};
                grid.lambdas = {0.1, 0.45};
                if (validate->count("--trials") == 0) grid.mc_trials = 100000;
            }
            auto rep = validate_analytics(params, grid);
            std::ostringstream os;
            write_metadata(os, params,
                           {{"grid", val_grid},
                            {"mc_trials", std::to_string(grid.mc_trials)},
                            {"seed", std::to_string(grid.seed)}});
            write_validation_csv(os, rep);
            write_file(val_out, os.str());
            std::printf("max |analytic - MC| (shipped)   : %.3g\n", rep.max_dev_shipped);
            std::printf("mean |analytic - MC| (shipped)  : %.3g\n", rep.mean_dev_shipped);
            std::printf("max |semi-analytic - MC|        : %.3g\n", rep.max_dev_semi);
            std::printf("max |GL500 - GL250|             : %.3g\n", rep.max_self_convergence);
            std::printf("max |printed - semi| alpha/beta : %.3g / %.3g (report only)\n", rep.max_dev_printed_alpha,
                        rep.max_dev_printed_beta);
            std::printf("%s\n", rep.passed ? "PASS" : "FAIL");
            return rep.passed ? kExitOk : kExitValidation;
        }
        if (*plot) {
            std::string variable;
            auto rows = read_summary_csv(read_text_file(pl_in), &variable);
            auto svg = render_svg(rows, pl_kind, variable);
            write_file(pl_out, svg);
            return kExitOk;
        }
        if (*pool) {
            std::vector<std::vector<RepRecord>> parts;
            std::string header;
            for (const auto& f : po_in) {
                auto text = read_text_file(f);
                if (header.empty()) {
                    // Keep the first file's metadata block as the audit trail.
                    std::istringstream in(text);
                    std::string line;
                    while (std::getline(in, line) && !line.empty() && line[0] == '#')
                        if (line.rfind("# first_rep=", 0) != 0 && line.rfind("# replications=", 0) != 0)
                            header += line + '\n';
                }
                parts.push_back(read_reps_csv(text));
            }
            auto rows = pool_reps(parts);
            std::string var = "value";
            if (auto pos = header.find("# variable="); pos != std::string::npos)
                var = header.substr(pos + 11, header.find('\n', pos) - pos - 11);
            std::ostringstream os;
            os << header << "# pooled_files=" << po_in.size() << '\n';
            write_summary_csv(os, rows, parse_sweep_var(var));
            write_file(po_out, os.str());
            return kExitOk;
        }
        if (*demo) {
            auto params = demo_params.resolve();
            auto scen = generate_scenario(params, demo_seed);
            auto groups = assign_groups(scen.vehicles, params);
            auto pairing = demo_method == "gpm" ? pair_gpm(groups, scen.vehicles)
                                                : pair_rpm(groups, scen.vehicles, derive_seed(demo_seed, 1));
            auto csv = scenario_to_csv(scen, groups, pairing);
            if (demo_out.empty()) std::cout << csv;
            else write_file(demo_out, csv);
            std::fprintf(stderr, "%zu pairs, %zu unpaired, eavesdropper at %.1f m\n", pairing.pairs.size(),
                         pairing.unpaired.size(), scen.eavesdropper.horiz_dist_m);
            return kExitOk;
        }
        if (*one) {
            auto params = one_params.resolve();
            auto scheme = Scheme::parse(one_scheme);
            if (std::isnan(l_alpha)) l_alpha = params.ref_alpha_m;
            if (std::isnan(l_beta)) l_beta = params.ref_beta_m;
            if (std::isnan(l_eve)) l_eve = params.ref_eve_m;
            auto geo = make_geometry(l_alpha, l_beta, l_eve, params);
            bool geometric = scheme.an && params.an_mode == AnMode::geometric;
            Stream rng(derive_seed(one_seed, 2));
            ChannelDraw draw;
            draw_channels_into(draw, params, rng, DrawOptions{geometric, geometric});
            auto gains = make_gains(draw, geo, params, params.an_mode, scheme.an);
            auto ctx = OptContext::make(params, geo, gains, scheme.access, scheme.an);
            one_ga.seed = derive_seed(one_seed, 3);
            if (!one_trace.empty()) one_ga.record_trace = true;
            OptResult r;
            if (scheme.access == Access::oma) r = oma_baseline(ctx);
            else if (scheme.algorithm == Algorithm::ga) r = ga_pats(ctx, one_ga);
            else r = exhaustive_search(ctx, params.lambda_step);
            auto sec = ctx.sop->report(r.best.lambda);
            std::printf("scheme        %s\n", scheme.name().c_str());
            std::printf("feasible      %s\n", r.feasible ? "yes" : "no");
            std::printf("lambda        %.6g\n", r.best.lambda);
            std::printf("m_alpha       %d\n", r.best.m_alpha);
            std::printf("m_beta        %d\n", r.best.m_beta);
            std::printf("D_beta (s)    %.6g\n", r.d_beta);
            std::printf("D_alpha (s)   %.6g\n", r.d_alpha);
            std::printf("SOP_alpha     %.6g\n", sec.p_sop_alpha);
            std::printf("SOP_beta      %.6g\n", sec.p_sop_beta);
            std::printf("SOPS          %.6g\n", sec.p_sops);
            std::printf("evaluations   %ld\n", r.evaluations);
            if (!one_trace.empty()) {
                std::ostringstream os;
                write_trace_csv(os, r);
                write_file(one_trace, os.str());
            }
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid argument: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
