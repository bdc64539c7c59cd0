#include "slitstone/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>

#include "slitstone/errors.hpp"

namespace slitstone {

namespace {

using nlohmann::json;

double num_field(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigError(key, "must be a number");
    return j[key].get<double>();
}

long int_field(const json& j, const char* key, long fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) throw ConfigError(key, "must be an integer");
    return j[key].get<long>();
}

bool bool_field(const json& j, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_boolean()) throw ConfigError(key, "must be a boolean");
    return j[key].get<bool>();
}

std::string str_field(const json& j, const char* key, const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_string()) throw ConfigError(key, "must be a string");
    return j[key].get<std::string>();
}

std::vector<double> vec_field(const json& j, const char* key) {
    std::vector<double> out;
    if (!j.contains(key)) return out;
    if (!j[key].is_array()) throw ConfigError(key, "must be an array of numbers");
    for (const auto& v : j[key]) {
        if (!v.is_number()) throw ConfigError(key, "must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

RunConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");

    static const std::set<std::string> known{
        "k",      "a",      "L",         "h",          "omega",     "tol",
        "max_iter", "boundary_mode", "enrich_b", "exact_terms", "exact_tau", "N",
        "rounds", "radii",  "ntheta",    "variant",    "simd",      "tau",
        "tau_cap", "J",     "alpha",     "out_dir",    "strict"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!known.count(key)) throw ConfigError(key, "unknown key");
    }

    RunConfig c;
    c.k = static_cast<int>(int_field(j, "k", 2));
    if (c.k < 1) throw ConfigError("k", "must be >= 1");
    if (c.k > 14) throw ConfigError("k", "must be <= 14");

    c.a = vec_field(j, "a");
    if (c.a.empty()) c.a.assign(static_cast<std::size_t>(2 * c.k - 1), 0.0);
    if (c.a.size() != static_cast<std::size_t>(2 * c.k - 1)) {
        throw ConfigError("a", "needs exactly 2k-1 entries");
    }
    for (double v : c.a) {
        if (!std::isfinite(v)) throw ConfigError("a", "entries must be finite");
    }

    c.L = num_field(j, "L", 8.0);
    if (!(c.L >= 4.0)) throw ConfigError("L", "must be at least 4");
    c.h = num_field(j, "h", c.L / 512.0);
    if (!(c.h > 0.0)) throw ConfigError("h", "must be positive");
    {
        const double steps = c.L / c.h;
        if (std::fabs(steps - std::round(steps)) > 1e-9 * steps || std::round(steps) < 2.0) {
            throw ConfigError("h", "L/h must be an integer");
        }
    }

    c.omega = num_field(j, "omega", 1.8);
    if (!(c.omega > 0.0 && c.omega < 2.0)) throw ConfigError("omega", "must lie in (0, 2)");
    c.tol = num_field(j, "tol", 1e-10);
    if (!(c.tol > 0.0)) throw ConfigError("tol", "must be positive");
    c.max_iter = int_field(j, "max_iter", 0);
    if (c.max_iter < 0) throw ConfigError("max_iter", "must be >= 0");

    c.boundary_mode = str_field(j, "boundary_mode", "datum");
    if (c.boundary_mode != "datum" && c.boundary_mode != "enriched" &&
        c.boundary_mode != "exact") {
        throw ConfigError("boundary_mode", "must be datum, enriched, or exact");
    }
    c.enrich_b = vec_field(j, "enrich_b");
    for (double v : c.enrich_b) {
        if (!std::isfinite(v)) throw ConfigError("enrich_b", "entries must be finite");
    }

    if (j.contains("exact_terms")) {
        if (!j["exact_terms"].is_object()) {
            throw ConfigError("exact_terms", "must be an object of index -> coefficient");
        }
        for (const auto& [key, value] : j["exact_terms"].items()) {
            int m = 0;
            try {
                std::size_t pos = 0;
                m = std::stoi(key, &pos);
                if (pos != key.size()) throw std::invalid_argument(key);
            } catch (const std::exception&) {
                throw ConfigError("exact_terms", "keys must be integer indices");
            }
            if (!value.is_number()) throw ConfigError("exact_terms", "values must be numbers");
            c.exact_terms[m] = value.get<double>();
        }
    }
    c.exact_tau = num_field(j, "exact_tau", 0.0);
    if (!std::isfinite(c.exact_tau)) throw ConfigError("exact_tau", "must be finite");
    if (c.boundary_mode == "exact" && c.exact_terms.empty()) {
        throw ConfigError("exact_terms", "required when boundary_mode is exact");
    }

    c.N = static_cast<int>(int_field(j, "N", 0));
    if (c.N < 0) throw ConfigError("N", "must be >= 0");
    if (c.N == 0) c.N = 2 * c.k - 2;
    c.rounds = static_cast<int>(int_field(j, "rounds", 3));
    if (c.rounds < 1) throw ConfigError("rounds", "must be >= 1");

    c.radii = vec_field(j, "radii");
    if (c.radii.empty()) c.radii = {c.L / 2.0, 5.0 * c.L / 8.0, 3.0 * c.L / 4.0};
    for (double r : c.radii) {
        if (!(r > 0.0)) throw ConfigError("radii", "entries must be positive");
        if (!(r <= c.L - c.h)) throw ConfigError("radii", "entries must fit inside the mesh");
    }

    c.ntheta = static_cast<int>(int_field(j, "ntheta", 4096));
    if (c.ntheta < 8) throw ConfigError("ntheta", "must be at least 8");

    c.variant = str_field(j, "variant", "lex");
    if (c.variant != "lex" && c.variant != "redblack") {
        throw ConfigError("variant", "must be lex or redblack");
    }
    c.simd = str_field(j, "simd", "auto");
    if (c.simd != "auto" && c.simd != "scalar" && c.simd != "avx2") {
        throw ConfigError("simd", "must be auto, scalar, or avx2");
    }

    c.tau = num_field(j, "tau", 1.0);
    if (!(c.tau > 0.0)) throw ConfigError("tau", "must be positive");
    c.tau_cap = num_field(j, "tau_cap", 1048576.0);
    if (!(c.tau_cap >= c.tau)) throw ConfigError("tau_cap", "must be >= tau");
    c.J = static_cast<int>(int_field(j, "J", 40));
    if (c.J < 1) throw ConfigError("J", "must be >= 1");

    c.alpha = vec_field(j, "alpha");
    if (!c.alpha.empty() && c.alpha.size() != static_cast<std::size_t>(2 * c.k - 2)) {
        throw ConfigError("alpha", "needs exactly 2k-2 entries");
    }
    for (double v : c.alpha) {
        if (!std::isfinite(v)) throw ConfigError("alpha", "entries must be finite");
    }

    c.out_dir = str_field(j, "out_dir", ".");
    c.strict = bool_field(j, "strict", false);
    return c;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("<config>", "cannot open " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        throw ConfigError("<config>", std::string("JSON parse error: ") + e.what());
    }
    return parse_config(j);
}

nlohmann::json config_echo(const RunConfig& c) {
    nlohmann::json j;
    j["k"] = c.k;
    j["a"] = c.a;
    j["L"] = c.L;
    j["h"] = c.h;
    j["omega"] = c.omega;
    j["tol"] = c.tol;
    j["max_iter"] = c.max_iter;
    j["boundary_mode"] = c.boundary_mode;
    j["enrich_b"] = c.enrich_b;
    nlohmann::json terms = nlohmann::json::object();
    for (const auto& [m, coef] : c.exact_terms) terms[std::to_string(m)] = coef;
    j["exact_terms"] = terms;
    j["exact_tau"] = c.exact_tau;
    j["N"] = c.N;
    j["rounds"] = c.rounds;
    j["radii"] = c.radii;
    j["ntheta"] = c.ntheta;
    j["variant"] = c.variant;
    j["simd"] = c.simd;
    j["tau"] = c.tau;
    j["tau_cap"] = c.tau_cap;
    j["J"] = c.J;
    j["alpha"] = c.alpha;
    j["out_dir"] = c.out_dir;
    j["strict"] = c.strict;
    return j;
}

std::string config_hash(const RunConfig& c) {
    const std::string dump = config_echo(c).dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace slitstone
