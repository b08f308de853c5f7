#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "phimax/grid.hpp"
#include "phimax/phi_function.hpp"
#include "phimax/sobolev.hpp"

namespace phimax {

// Flat dotted-key config: one `key = value` per line, '#' comments.
struct KVConfig {
    std::map<std::string, std::string> map;

    bool has(const std::string& key) const { return map.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback = "") const;

    // Canonical text: sorted "key = value" lines; hashed into reports.
    std::string canonical() const;

    static KVConfig parse_text(const std::string& text);
    static KVConfig parse_file(const std::string& path);

    // Environment overrides: PREFIX + key with '.' spelled as "__",
    // e.g. PHIMAX_grid__h=0.01 overrides grid.h.
    void apply_env(const char* prefix = "PHIMAX_");
};

// Fully validated run description. Construction collects every
// validation problem and throws config_error listing all of them.
struct ExperimentConfig {
    KVConfig kv;
    std::uint64_t hash = 0;

    Grid grid;
    PhiFunction phi;
    std::vector<std::pair<std::string, GridField>> fields;

    double norm_tol = 1e-8;
    double r_max = 8.0;
    double radius_tol = 1e-9;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_dir;

    // verify command
    double verify_R = 2.0;
    double verify_eps = 0.1;
    int verify_draws = 100;

    // continuity command
    PerturbationFamily continuity_family;
    ContinuityOptions continuity;
    double continuity_ratio = 0.1; // final output gap must drop below ratio * first
};

ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig build_config(KVConfig kv);

// Named field generators available to configs and tests: indicator, tent,
// quartic_bump, cos2_bump, smooth_plateau, gaussian, constant, zero,
// random_bumps, file.
GridField build_field(const Grid& grid, const KVConfig& kv, const std::string& prefix,
                      std::uint64_t seed, std::vector<std::string>& issues);

// Spatial-function catalog lookup for phi.p_field / phi.a_field blocks.
SpatialFunction build_spatial(const KVConfig& kv, const std::string& prefix,
                              std::vector<std::string>& issues);

} // namespace phimax
