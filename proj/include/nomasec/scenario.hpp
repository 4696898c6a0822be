// Road scenarios, vehicle grouping, and vehicle pairing.
//
// Geometry is one-dimensional: every vehicle carries a signed horizontal
// distance to the MEC (the sign selects road side A (>= 0) or B (< 0)) and a
// signed speed (positive = moving toward the MEC).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "params.hpp"
#include "rng.hpp"

namespace nomasec {

struct Vehicle {
    int id = 0;
    double horiz_dist_m = 0.0;
    double speed_mps = 0.0;

    bool side_a() const { return horiz_dist_m >= 0.0; }
    double abs_dist() const { return std::abs(horiz_dist_m); }
    /// A stationary vehicle counts as moving toward the MEC.
    bool toward_mec() const { return speed_mps >= 0.0; }
};

struct EavesdropperPlacement {
    double horiz_dist_m = 0.0;
};

struct GroupAssignment {
    std::vector<int> center_ids;
    std::vector<int> edge_ids;
};

struct PairingResult {
    std::vector<std::pair<int, int>> pairs;  // (center_id, edge_id)
    std::vector<int> unpaired;
};

struct Scenario {
    std::vector<Vehicle> vehicles;
    EavesdropperPlacement eavesdropper;
};

inline Scenario generate_scenario(const SystemParams& params, std::uint64_t seed) {
    Stream rng(derive_seed(seed, 0x5ce7a510ULL));
    std::uniform_real_distribution<double> pos(-params.cell_radius_m, params.cell_radius_m);
    std::uniform_real_distribution<double> spd(-params.max_speed_mps, params.max_speed_mps);
    Scenario s;
    s.vehicles.reserve(static_cast<std::size_t>(params.n_vehicles));
    for (int i = 0; i < params.n_vehicles; ++i) {
        Vehicle v;
        v.id = i;
        v.horiz_dist_m = pos(rng);
        v.speed_mps = spd(rng);
        s.vehicles.push_back(v);
    }
    std::uniform_real_distribution<double> eve(0.0, params.cell_radius_m);
    double l_e = eve(rng);
    bool side_b = std::bernoulli_distribution(0.5)(rng);
    s.eavesdropper.horiz_dist_m = side_b ? -l_e : l_e;
    return s;
}

/// Closed ball: |l| == R_MC belongs to the center group.
inline bool in_center_group(double horiz_dist_m, double center_radius_m) {
    return std::abs(horiz_dist_m) <= center_radius_m;
}

inline GroupAssignment assign_groups(const std::vector<Vehicle>& vehicles, const SystemParams& params) {
    GroupAssignment g;
    for (const auto& v : vehicles) {
        if (in_center_group(v.horiz_dist_m, params.center_radius_m)) g.center_ids.push_back(v.id);
        else g.edge_ids.push_back(v.id);
    }
    std::sort(g.center_ids.begin(), g.center_ids.end());
    std::sort(g.edge_ids.begin(), g.edge_ids.end());
    return g;
}

namespace detail {

inline const Vehicle& find_vehicle(const std::vector<Vehicle>& vs, int id) {
    auto it = std::find_if(vs.begin(), vs.end(), [id](const Vehicle& v) { return v.id == id; });
    if (it == vs.end()) throw std::invalid_argument("vehicle id " + std::to_string(id) + " not in scenario");
    return *it;
}

/// Edge vehicles of one side, farthest from the MEC first; ties by lower id.
inline std::vector<Vehicle> edge_order(const std::vector<Vehicle>& edges) {
    auto out = edges;
    std::sort(out.begin(), out.end(), [](const Vehicle& a, const Vehicle& b) {
        if (a.abs_dist() != b.abs_dist()) return a.abs_dist() > b.abs_dist();
        return a.id < b.id;
    });
    return out;
}

inline void split_by_side(const GroupAssignment& groups, const std::vector<Vehicle>& vehicles,
                          std::vector<Vehicle> (&centers)[2], std::vector<Vehicle> (&edges)[2]) {
    for (int id : groups.center_ids) {
        const auto& v = find_vehicle(vehicles, id);
        centers[v.side_a() ? 0 : 1].push_back(v);
    }
    for (int id : groups.edge_ids) {
        const auto& v = find_vehicle(vehicles, id);
        edges[v.side_a() ? 0 : 1].push_back(v);
    }
}

/// Distance between an edge vehicle and a candidate relay on the same side.
inline double pair_distance(const Vehicle& edge, const Vehicle& center) {
    return std::abs(edge.horiz_dist_m - center.horiz_dist_m);
}

/// Index in `pool` of the candidate minimizing (or maximizing) the distance to `edge`
/// among those whose direction flag equals `toward`; -1 if none. Ties: lower id.
inline int pick(const std::vector<Vehicle>& pool, const Vehicle& edge, bool toward, bool nearest) {
    int best = -1;
    for (int i = 0; i < static_cast<int>(pool.size()); ++i) {
        const auto& c = pool[static_cast<std::size_t>(i)];
        if (c.toward_mec() != toward) continue;
        if (best < 0) {
            best = i;
            continue;
        }
        const auto& b = pool[static_cast<std::size_t>(best)];
        double dc = pair_distance(edge, c), db = pair_distance(edge, b);
        bool better = nearest ? dc < db : dc > db;
        if (better || (dc == db && c.id < b.id)) best = i;
    }
    return best;
}

}  // namespace detail

/// Grouping-and-pairing method. Edge vehicles are served farthest-first per
/// road side. An edge vehicle moving toward the MEC takes the nearest
/// same-direction relay, otherwise the farthest opposite-direction one. An edge
/// vehicle moving away takes the farthest away-moving relay, otherwise the
/// nearest toward-moving one. "Near"/"far" are measured from the edge vehicle.
inline PairingResult pair_gpm(const GroupAssignment& groups, const std::vector<Vehicle>& vehicles) {
    std::vector<Vehicle> centers[2], edges[2];
    detail::split_by_side(groups, vehicles, centers, edges);
    PairingResult r;
    for (int side = 0; side < 2; ++side) {
        auto& pool = centers[side];
        for (const auto& e : detail::edge_order(edges[side])) {
            bool toward = e.toward_mec();
            // First choice: same direction as the edge vehicle.
            int idx = detail::pick(pool, e, toward, /*nearest=*/toward);
            if (idx < 0) idx = detail::pick(pool, e, !toward, /*nearest=*/!toward);
            if (idx < 0) {
                r.unpaired.push_back(e.id);
                continue;
            }
            r.pairs.emplace_back(pool[static_cast<std::size_t>(idx)].id, e.id);
            pool.erase(pool.begin() + idx);
        }
        for (const auto& c : pool) r.unpaired.push_back(c.id);
    }
    std::sort(r.unpaired.begin(), r.unpaired.end());
    return r;
}

/// Random pairing baseline: each edge vehicle (farthest-first) draws a relay
/// uniformly from the remaining same-side center vehicles.
inline PairingResult pair_rpm(const GroupAssignment& groups, const std::vector<Vehicle>& vehicles,
                              std::uint64_t seed) {
    std::vector<Vehicle> centers[2], edges[2];
    detail::split_by_side(groups, vehicles, centers, edges);
    Stream rng(derive_seed(seed, 0x7a1c0ULL));
    PairingResult r;
    for (int side = 0; side < 2; ++side) {
        auto& pool = centers[side];
        std::sort(pool.begin(), pool.end(), [](const Vehicle& a, const Vehicle& b) { return a.id < b.id; });
        for (const auto& e : detail::edge_order(edges[side])) {
            if (pool.empty()) {
                r.unpaired.push_back(e.id);
                continue;
            }
            std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
            auto idx = pick(rng);
            r.pairs.emplace_back(pool[idx].id, e.id);
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
        }
        for (const auto& c : pool) r.unpaired.push_back(c.id);
    }
    std::sort(r.unpaired.begin(), r.unpaired.end());
    return r;
}

// ---------------------------------------------------------------------------
// CSV dump/load: id,l_m,speed_mps,group,pair_id  (eavesdropper row: id -1, group "eve")

inline std::string scenario_to_csv(const Scenario& s, const GroupAssignment& g, const PairingResult& p) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "id,l_m,speed_mps,group,pair_id\n";
    for (const auto& v : s.vehicles) {
        bool center = std::find(g.center_ids.begin(), g.center_ids.end(), v.id) != g.center_ids.end();
        int partner = -1;
        for (const auto& [c, e] : p.pairs) {
            if (c == v.id) partner = e;
            if (e == v.id) partner = c;
        }
        os << v.id << ',' << v.horiz_dist_m << ',' << v.speed_mps << ',' << (center ? "C" : "E") << ',' << partner
           << '\n';
    }
    os << -1 << ',' << s.eavesdropper.horiz_dist_m << ',' << 0 << ",eve," << -1 << '\n';
    return os.str();
}

struct LoadedScenario {
    Scenario scenario;
    GroupAssignment groups;
    PairingResult pairing;
};

inline LoadedScenario scenario_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("id,l_m,speed_mps,group,pair_id", 0) != 0)
        throw std::runtime_error("scenario csv: missing header");
    LoadedScenario out;
    std::vector<std::pair<int, int>> partners;
    bool have_eve = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string f[5];
        for (auto& x : f)
            if (!std::getline(ls, x, ',')) throw std::runtime_error("scenario csv: short row '" + line + "'");
        int id = std::stoi(f[0]);
        double l = std::stod(f[1]), sp = std::stod(f[2]);
        if (f[3] == "eve") {
            out.scenario.eavesdropper.horiz_dist_m = l;
            have_eve = true;
            continue;
        }
        out.scenario.vehicles.push_back({id, l, sp});
        if (f[3] == "C") out.groups.center_ids.push_back(id);
        else if (f[3] == "E") out.groups.edge_ids.push_back(id);
        else throw std::runtime_error("scenario csv: bad group '" + f[3] + "'");
        partners.emplace_back(id, std::stoi(f[4]));
    }
    if (!have_eve) throw std::runtime_error("scenario csv: missing eavesdropper row");
    for (const auto& [id, partner] : partners) {
        bool center = std::find(out.groups.center_ids.begin(), out.groups.center_ids.end(), id) !=
                      out.groups.center_ids.end();
        if (partner < 0) out.pairing.unpaired.push_back(id);
        else if (center) out.pairing.pairs.emplace_back(id, partner);
    }
    std::sort(out.groups.center_ids.begin(), out.groups.center_ids.end());
    std::sort(out.groups.edge_ids.begin(), out.groups.edge_ids.end());
    std::sort(out.pairing.unpaired.begin(), out.pairing.unpaired.end());
    return out;
}

}  // namespace nomasec
