// System configuration for the NOMA-MEC secure offloading simulator.
//
// All internal math runs in linear SI units (W, Hz, m, s). dBm values are kept
// only as the configured representation and converted through the accessors.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nomasec {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// dBm -> W.
inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }

/// Labels of the fading links. Each link's |h|^2 is exponential with rate 1/variance.
enum class Link : int {
    bb = 0,          // BS transmit antennas -> BS receive antenna (self-interference)
    b_alpha,         // BS -> center vehicle
    be,              // BS -> eavesdropper
    beta_alpha,      // edge vehicle -> center vehicle
    alpha_b,         // center vehicle -> BS
    alpha_e,         // center vehicle -> eavesdropper
    beta_e,          // edge vehicle -> eavesdropper
    alpha_alpha,     // relay self-interference loop
};
inline constexpr std::size_t kLinkCount = 8;

inline constexpr std::array<std::string_view, kLinkCount> kLinkNames = {
    "bb", "b_alpha", "be", "beta_alpha", "alpha_b", "alpha_e", "beta_e", "alpha_alpha"};

enum class AnMode { model, geometric };

inline std::string_view to_string(AnMode m) { return m == AnMode::model ? "model" : "geometric"; }

inline AnMode parse_an_mode(std::string_view s) {
    if (s == "model") return AnMode::model;
    if (s == "geometric") return AnMode::geometric;
    throw ConfigError("an_mode: expected 'model' or 'geometric', got '" + std::string(s) + "'");
}

struct SystemParams {
    int n_vehicles = 40;
    int m_tasks = 10;
    int quad_nodes = 500;
    double cell_radius_m = 500.0;
    double center_radius_m = 300.0;
    int bs_antennas = 10;
    double bandwidth_hz = 1e6;
    double p_an_dbm = 40.0;
    double p_center_dbm = 10.0;
    double p_edge_dbm = 20.0;
    double noise_density_dbm_hz = -174.0;
    double f_mec_hz = 5e10;
    double f_local_hz = 5e8;
    double cycles_per_bit = 1000.0;
    double task_bits = 1e5;
    double path_loss_exp = 3.0;
    double secrecy_rate_target = 0.1;
    double sop_tolerance = 0.5;
    double max_delay_s = 3.0;
    double bs_height_m = 10.0;
    double max_speed_mps = 20.0;
    double p_si_dbm = -70.0;
    std::array<double, kLinkCount> channel_variances{1, 1, 1, 1, 1, 1, 1, 1};
    std::uint64_t rng_seed = 42;

    // Simulator knobs that are not physical constants.
    AnMode an_mode = AnMode::model;
    double min_separation_m = 1.0;   // floor on vehicle-vehicle distances
    double lambda_step = 0.005;      // exhaustive-search grid for the power allocation ratio
    // Reference pair used by the analytic validation grid (signed distances to the MEC).
    double ref_alpha_m = 280.0;
    double ref_beta_m = 420.0;
    double ref_eve_m = 150.0;

    // --- linear accessors -------------------------------------------------
    double p_an_w() const { return dbm_to_watts(p_an_dbm); }
    /// Per-antenna AN power P_B / (K-1).
    double p_an_per_antenna_w() const { return p_an_w() / (bs_antennas - 1); }
    double p_center_w() const { return dbm_to_watts(p_center_dbm); }
    double p_edge_w() const { return dbm_to_watts(p_edge_dbm); }
    double p_si_w() const { return dbm_to_watts(p_si_dbm); }
    double noise_power_w() const { return dbm_to_watts(noise_density_dbm_hz) * bandwidth_hz; }
    double variance(Link l) const { return channel_variances[static_cast<std::size_t>(l)]; }
    /// Exponential rate gamma_j = 1 / sigma_j^2.
    double rate(Link l) const { return 1.0 / variance(l); }

    void validate() const;
};

inline double noise_power(const SystemParams& p) { return p.noise_power_w(); }

namespace detail {

inline void require(bool ok, std::string_view field, std::string_view what) {
    if (!ok) throw ConfigError(std::string(field) + ": " + std::string(what));
}

inline std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (trim(v.substr(pos)).empty()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError(key + ": not a number: '" + v + "'");
}

inline long long to_integer(const std::string& key, const std::string& v) {
    double d = to_double(key, v);
    if (d != std::floor(d) || std::abs(d) > 9.0e15) throw ConfigError(key + ": not an integer: '" + v + "'");
    return static_cast<long long>(d);
}

inline std::uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        auto u = std::stoull(v, &pos, 0);
        if (trim(v.substr(pos)).empty()) return u;
    } catch (const std::exception&) {
    }
    throw ConfigError(key + ": not an unsigned integer: '" + v + "'");
}

inline std::string fmt_double(double d) {
    std::ostringstream os;
    os.precision(17);
    os << d;
    return os.str();
}

}  // namespace detail

inline void SystemParams::validate() const {
    using detail::require;
    require(n_vehicles > 0, "n_vehicles", "must be positive");
    require(m_tasks >= 0, "m_tasks", "must be non-negative");
    require(quad_nodes >= 2, "quad_nodes", "must be >= 2");
    require(cell_radius_m > 0, "cell_radius_m", "must be positive");
    require(center_radius_m > 0, "center_radius_m", "must be positive");
    require(center_radius_m < cell_radius_m, "center_radius_m", "must be smaller than cell_radius_m");
    require(bs_antennas >= 3, "bs_antennas", "must be >= 3");
    require(bandwidth_hz > 0, "bandwidth_hz", "must be positive");
    require(std::isfinite(p_an_dbm), "p_an_dbm", "must be finite");
    require(std::isfinite(p_center_dbm), "p_center_dbm", "must be finite");
    require(std::isfinite(p_edge_dbm), "p_edge_dbm", "must be finite");
    require(std::isfinite(p_si_dbm), "p_si_dbm", "must be finite");
    require(std::isfinite(noise_density_dbm_hz), "noise_density_dbm_hz", "must be finite");
    require(f_mec_hz > 0, "f_mec_hz", "must be positive");
    require(f_local_hz > 0, "f_local_hz", "must be positive");
    require(cycles_per_bit > 0, "cycles_per_bit", "must be positive");
    require(task_bits > 0, "task_bits", "must be positive");
    require(path_loss_exp > 0, "path_loss_exp", "must be positive");
    require(secrecy_rate_target > 0, "secrecy_rate_target", "must be positive");
    require(sop_tolerance > 0 && sop_tolerance <= 1, "sop_tolerance", "must lie in (0, 1]");
    require(max_delay_s > 0, "max_delay_s", "must be positive");
    require(bs_height_m > 0, "bs_height_m", "must be positive");
    require(max_speed_mps > 0, "max_speed_mps", "must be positive");
    for (std::size_t i = 0; i < kLinkCount; ++i)
        require(channel_variances[i] > 0 && std::isfinite(channel_variances[i]),
                "variance." + std::string(kLinkNames[i]), "must be positive");
    require(min_separation_m > 0, "min_separation_m", "must be positive");
    require(lambda_step > 0 && lambda_step < 0.25, "lambda_step", "must lie in (0, 0.25)");
    require(std::abs(ref_alpha_m) <= center_radius_m, "ref_alpha_m", "must lie inside the center group");
    require(std::abs(ref_beta_m) > center_radius_m && std::abs(ref_beta_m) <= cell_radius_m, "ref_beta_m",
            "must lie inside the edge group");
    require(std::abs(ref_eve_m) <= cell_radius_m, "ref_eve_m", "must lie inside the cell");
}

/// Flat key -> value map, the canonical config representation.
using ConfigMap = std::map<std::string, std::string>;

/// Parses `key = value` lines; `#` starts a comment. Duplicate keys: last one wins.
inline ConfigMap parse_config_text(std::string_view text) {
    ConfigMap out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto t = detail::trim(line);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        auto key = detail::trim(std::string_view(t).substr(0, eq));
        auto val = detail::trim(std::string_view(t).substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        out[key] = val;
    }
    return out;
}

/// Applies `overrides` on top of `base`, then validates.
inline SystemParams apply_config(SystemParams base, const ConfigMap& overrides) {
    using namespace detail;
    auto& p = base;
    for (const auto& [key, v] : overrides) {
        auto dbl = [&](double& f) { f = to_double(key, v); };
        auto integer = [&](int& f) { f = static_cast<int>(to_integer(key, v)); };
        if (key == "n_vehicles") integer(p.n_vehicles);
        else if (key == "m_tasks") integer(p.m_tasks);
        else if (key == "quad_nodes") integer(p.quad_nodes);
        else if (key == "cell_radius_m") dbl(p.cell_radius_m);
        else if (key == "center_radius_m") dbl(p.center_radius_m);
        else if (key == "bs_antennas") integer(p.bs_antennas);
        else if (key == "bandwidth_hz") dbl(p.bandwidth_hz);
        else if (key == "p_an_dbm") dbl(p.p_an_dbm);
        else if (key == "p_center_dbm") dbl(p.p_center_dbm);
        else if (key == "p_edge_dbm") dbl(p.p_edge_dbm);
        else if (key == "noise_density_dbm_hz") dbl(p.noise_density_dbm_hz);
        else if (key == "f_mec_hz") dbl(p.f_mec_hz);
        else if (key == "f_local_hz") dbl(p.f_local_hz);
        else if (key == "cycles_per_bit") dbl(p.cycles_per_bit);
        else if (key == "task_bits") dbl(p.task_bits);
        else if (key == "path_loss_exp") dbl(p.path_loss_exp);
        else if (key == "secrecy_rate_target") dbl(p.secrecy_rate_target);
        else if (key == "sop_tolerance") dbl(p.sop_tolerance);
        else if (key == "max_delay_s") dbl(p.max_delay_s);
        else if (key == "bs_height_m") dbl(p.bs_height_m);
        else if (key == "max_speed_mps") dbl(p.max_speed_mps);
        else if (key == "p_si_dbm") dbl(p.p_si_dbm);
        else if (key == "rng_seed") p.rng_seed = to_u64(key, v);
        else if (key == "an_mode") p.an_mode = parse_an_mode(v);
        else if (key == "min_separation_m") dbl(p.min_separation_m);
        else if (key == "lambda_step") dbl(p.lambda_step);
        else if (key == "ref_alpha_m") dbl(p.ref_alpha_m);
        else if (key == "ref_beta_m") dbl(p.ref_beta_m);
        else if (key == "ref_eve_m") dbl(p.ref_eve_m);
        else if (key.rfind("variance.", 0) == 0) {
            auto label = std::string_view(key).substr(9);
            bool found = false;
            for (std::size_t i = 0; i < kLinkCount; ++i)
                if (kLinkNames[i] == label) {
                    p.channel_variances[i] = to_double(key, v);
                    found = true;
                }
            if (!found) throw ConfigError(key + ": unknown channel label");
        } else {
            throw ConfigError(key + ": unknown configuration key");
        }
    }
    p.validate();
    return p;
}

inline SystemParams load_params(std::string_view config_text) {
    return apply_config(SystemParams{}, parse_config_text(config_text));
}

/// Canonical serialization; load_params(serialize_params(p)) == p.
inline std::string serialize_params(const SystemParams& p) {
    using detail::fmt_double;
    std::ostringstream os;
    os << "n_vehicles = " << p.n_vehicles << '\n'
       << "m_tasks = " << p.m_tasks << '\n'
       << "quad_nodes = " << p.quad_nodes << '\n'
       << "cell_radius_m = " << fmt_double(p.cell_radius_m) << '\n'
       << "center_radius_m = " << fmt_double(p.center_radius_m) << '\n'
       << "bs_antennas = " << p.bs_antennas << '\n'
       << "bandwidth_hz = " << fmt_double(p.bandwidth_hz) << '\n'
       << "p_an_dbm = " << fmt_double(p.p_an_dbm) << '\n'
       << "p_center_dbm = " << fmt_double(p.p_center_dbm) << '\n'
       << "p_edge_dbm = " << fmt_double(p.p_edge_dbm) << '\n'
       << "noise_density_dbm_hz = " << fmt_double(p.noise_density_dbm_hz) << '\n'
       << "f_mec_hz = " << fmt_double(p.f_mec_hz) << '\n'
       << "f_local_hz = " << fmt_double(p.f_local_hz) << '\n'
       << "cycles_per_bit = " << fmt_double(p.cycles_per_bit) << '\n'
       << "task_bits = " << fmt_double(p.task_bits) << '\n'
       << "path_loss_exp = " << fmt_double(p.path_loss_exp) << '\n'
       << "secrecy_rate_target = " << fmt_double(p.secrecy_rate_target) << '\n'
       << "sop_tolerance = " << fmt_double(p.sop_tolerance) << '\n'
       << "max_delay_s = " << fmt_double(p.max_delay_s) << '\n'
       << "bs_height_m = " << fmt_double(p.bs_height_m) << '\n'
       << "max_speed_mps = " << fmt_double(p.max_speed_mps) << '\n'
       << "p_si_dbm = " << fmt_double(p.p_si_dbm) << '\n';
    for (std::size_t i = 0; i < kLinkCount; ++i)
        os << "variance." << kLinkNames[i] << " = " << fmt_double(p.channel_variances[i]) << '\n';
    os << "rng_seed = " << p.rng_seed << '\n'
       << "an_mode = " << to_string(p.an_mode) << '\n'
       << "min_separation_m = " << fmt_double(p.min_separation_m) << '\n'
       << "lambda_step = " << fmt_double(p.lambda_step) << '\n'
       << "ref_alpha_m = " << fmt_double(p.ref_alpha_m) << '\n'
       << "ref_beta_m = " << fmt_double(p.ref_beta_m) << '\n'
       << "ref_eve_m = " << fmt_double(p.ref_eve_m) << '\n';
    return os.str();
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/// Environment variable that may point at a config file.
inline constexpr const char* kConfigEnvVar = "NOMASEC_CONFIG";

/// Resolution order: defaults < file (explicit path, else $NOMASEC_CONFIG) < overrides.
inline SystemParams resolve_params(const std::optional<std::string>& path, const ConfigMap& overrides) {
    ConfigMap merged;
    std::optional<std::string> file = path;
    if (!file) {
        if (const char* env = std::getenv(kConfigEnvVar); env && *env) file = env;
    }
    if (file) merged = parse_config_text(read_text_file(*file));
    for (const auto& [k, v] : overrides) merged[k] = v;
    return apply_config(SystemParams{}, merged);
}

inline bool operator==(const SystemParams& a, const SystemParams& b) {
    return serialize_params(a) == serialize_params(b);
}

}  // namespace nomasec
