#pragma once

// Run configuration shared by the CLI verbs: JSON in, validated struct out,
// with defaults echoed back and a stable hash of the effective configuration.

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace slitstone {

struct RunConfig {
    int k = 2;
    std::vector<double> a;  // length 2k-1; defaults to zeros

    double L = 8.0;
    double h = 0.015625;  // L/512
    double omega = 1.8;
    double tol = 1e-10;
    long max_iter = 0;  // 0: 200 * (L/h)

    std::string boundary_mode = "datum";
    std::vector<double> enrich_b;        // boundary_mode "enriched"
    std::map<int, double> exact_terms;   // boundary_mode "exact": index m -> coeff of u_{m+1/2}
    double exact_tau = 0.0;              // exact boundary is the expansion translated by this

    int N = 0;  // 0: 2k-2
    int rounds = 3;
    std::vector<double> radii;  // default {L/2, 5L/8, 3L/4}
    int ntheta = 4096;

    std::string variant = "lex";
    std::string simd = "auto";

    double tau = 1.0;        // barrier verb: starting translation
    double tau_cap = 1048576.0;
    int J = 40;
    std::vector<double> alpha;  // admissible verb: profile coefficients

    std::string out_dir = ".";
    bool strict = false;
};

// Parses and validates; unknown keys and type/range violations raise
// ConfigError naming the offending field. Defaults fill everything absent.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config_file(const std::string& path);

// Full effective configuration (defaults included), canonical key order.
nlohmann::json config_echo(const RunConfig& c);

// FNV-1a 64-bit hash of the canonical echo, as 16 hex digits.
std::string config_hash(const RunConfig& c);

}  // namespace slitstone
