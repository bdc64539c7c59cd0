// Command-line front end: solve | expand | classify | pair | barrier | admissible.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slitstone/admissibility.hpp"
#include "slitstone/config.hpp"
#include "slitstone/errors.hpp"
#include "slitstone/expansion.hpp"
#include "slitstone/slit_basis.hpp"
#include "slitstone/solution_io.hpp"
#include "slitstone/symmetry.hpp"
#include "slitstone/vi_solver.hpp"

namespace {

using namespace slitstone;

constexpr int kExitOk = 0;
constexpr int kExitNotConverged = 2;
constexpr int kExitConfig = 3;
constexpr int kExitRadius = 4;
constexpr int kExitVerdict = 5;
constexpr int kExitBarrier = 6;

constexpr double kPairAlphaTol = 0.01;
constexpr double kPairPTol = 0.02;
constexpr double kPairDefectTol = 0.05;
constexpr double kPairDefectFloor = 1e-3;

// Report emitter that keeps every float at 17 significant digits; the stock
// JSON serializer prints shortest round-trip forms instead.
class JsonWriter {
   public:
    void open_obj() { begin("{"); }
    void close_obj() { end("}"); }
    void open_obj(const std::string& key) { begin(quoted(key) + ": {"); }
    void open_arr(const std::string& key) { begin(quoted(key) + ": ["); }
    void close_arr() { end("]"); }

    // JSON has no literal for non-finite numbers; those become null.
    void field(const std::string& key, double v) {
        item(quoted(key) + ": " + (std::isfinite(v) ? format_g17(v) : std::string("null")));
    }
    void field(const std::string& key, int v) { item(quoted(key) + ": " + std::to_string(v)); }
    void field(const std::string& key, long v) { item(quoted(key) + ": " + std::to_string(v)); }
    void field(const std::string& key, bool v) {
        item(quoted(key) + ": " + (v ? "true" : "false"));
    }
    void field(const std::string& key, const std::string& v) {
        item(quoted(key) + ": " + quoted(v));
    }
    void field(const std::string& key, const char* v) { field(key, std::string(v)); }
    void field(const std::string& key, const std::vector<double>& v) {
        std::string s = quoted(key) + ": [";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ", ";
            s += std::isfinite(v[i]) ? format_g17(v[i]) : std::string("null");
        }
        s += "]";
        item(s);
    }
    void raw_item(const std::string& s) { item(s); }

    std::string str() const { return body_ + "\n"; }

   private:
    static std::string quoted(const std::string& s) {
        std::string out = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        out += "\"";
        return out;
    }

    void begin(const std::string& tok) {
        prefix();
        body_ += tok;
        fresh_ = true;
        ++depth_;
    }
    void end(const std::string& tok) {
        --depth_;
        body_ += "\n" + std::string(2 * static_cast<std::size_t>(depth_), ' ') + tok;
        fresh_ = false;
    }
    void item(const std::string& s) {
        prefix();
        body_ += s;
    }
    void prefix() {
        if (!body_.empty()) body_ += fresh_ ? "\n" : ",\n";
        body_ += std::string(2 * static_cast<std::size_t>(depth_), ' ');
        fresh_ = false;
    }

    std::string body_;
    int depth_ = 0;
    bool fresh_ = false;
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os << text;
    if (!os) throw IoError("write failed for " + path);
}

void emit(const std::string& out_dir, const std::string& name, const JsonWriter& jw) {
    std::filesystem::create_directories(out_dir);
    const std::string path = out_dir + "/" + name;
    write_text(path, jw.str());
    std::cout << jw.str();
}

void echo_config(JsonWriter& jw, const RunConfig& c) {
    jw.field("config_hash", config_hash(c));
    jw.open_obj("config");
    jw.field("k", c.k);
    jw.field("a", c.a);
    jw.field("L", c.L);
    jw.field("h", c.h);
    jw.field("omega", c.omega);
    jw.field("tol", c.tol);
    jw.field("max_iter", c.max_iter);
    jw.field("boundary_mode", c.boundary_mode);
    jw.field("enrich_b", c.enrich_b);
    jw.open_obj("exact_terms");
    for (const auto& [m, coef] : c.exact_terms) jw.field(std::to_string(m), coef);
    jw.close_obj();
    jw.field("exact_tau", c.exact_tau);
    jw.field("N", c.N);
    jw.field("rounds", c.rounds);
    jw.field("radii", c.radii);
    jw.field("ntheta", c.ntheta);
    jw.field("variant", c.variant);
    jw.field("simd", c.simd);
    jw.field("tau", c.tau);
    jw.field("tau_cap", c.tau_cap);
    jw.field("J", c.J);
    jw.field("alpha", c.alpha);
    jw.field("out_dir", c.out_dir);
    jw.field("strict", c.strict);
    jw.close_obj();
}

SlitExpansion exact_expansion_of(const RunConfig& c) {
    SlitExpansion e;
    for (const auto& [m, coef] : c.exact_terms) e.set_term(m, coef);
    if (e.empty()) throw ConfigError("exact_terms", "must name at least one term");
    return e;
}

// The datum carried by an exact boundary instance: the nonnegative-index part
// of the far field about the origin. Rejects instances that do not have the
// u_{2k-1/2} + lower-order shape.
InfinityDatum datum_of_exact(const RunConfig& c, const SlitExpansion& e) {
    const SlitExpansion far = translate_expansion(e, -c.exact_tau, std::max(c.J, 2 * c.k));
    const int lead = 2 * c.k - 1;
    if (far.highest_index() > lead) {
        throw ConfigError("exact_terms", "far field grows faster than the k implies");
    }
    if (far.coeff(lead) != 1.0) {
        throw ConfigError("exact_terms", "far field needs a unit leading coefficient");
    }
    std::vector<double> a(static_cast<std::size_t>(2 * c.k - 1), 0.0);
    for (int l = 1; l <= 2 * c.k - 1; ++l) a[static_cast<std::size_t>(l - 1)] = far.coeff(lead - l);
    return make_datum(c.k, a);
}

SolveOptions options_of(const RunConfig& c) {
    SolveOptions opt;
    opt.omega = c.omega;
    opt.tol = c.tol;
    opt.max_iter = c.max_iter;
    opt.variant = c.variant;
    opt.simd = c.simd;
    return opt;
}

struct SolveProduct {
    DiscreteSolution sol;
    bool expanded = false;
    ExpansionReport report;
};

SolveProduct run_solve_pipeline(const RunConfig& c) {
    const Mesh mesh = Mesh::make(c.L, c.h);
    const SolveOptions opt = options_of(c);
    SolveProduct out;
    if (c.boundary_mode == "datum") {
        const InfinityDatum d = validate_datum(c.k, c.a);
        if (c.rounds > 1) {
            RefinementResult ref =
                solve_with_expansion_refinement(d, mesh, c.N, c.rounds, opt, c.radii, c.ntheta);
            out.sol = std::move(ref.solution);
        } else {
            out.sol = solve_psor(assemble(d, mesh), opt);
        }
    } else if (c.boundary_mode == "enriched") {
        const InfinityDatum d = validate_datum(c.k, c.a);
        out.sol = solve_psor(assemble_enriched(d, mesh, c.enrich_b), opt);
    } else {
        const SlitExpansion e = exact_expansion_of(c);
        const InfinityDatum d = datum_of_exact(c, e);
        out.sol = solve_psor(assemble_exact(d, mesh, e, c.exact_tau), opt);
    }
    if (out.sol.converged) {
        try {
            out.report = extract_b(out.sol, c.radii, c.N, c.ntheta);
            out.expanded = true;
        } catch (const RadiusBelowContactClosure&) {
            out.expanded = false;
        }
    }
    return out;
}

void describe_contact(JsonWriter& jw, const DiscreteSolution& sol) {
    const ContactReport contact = contact_set(sol);
    jw.field("M_emp", contact.M_emp);
    jw.field("touches_left_edge", contact.touches_left_edge);
    jw.open_arr("contact_intervals");
    for (const auto& iv : contact.intervals) {
        jw.raw_item("[" + format_g17(iv.left) + ", " + format_g17(iv.right) + "]");
    }
    jw.close_arr();
}

void describe_solution(JsonWriter& jw, const DiscreteSolution& sol) {
    jw.field("converged", sol.converged);
    jw.field("iterations", sol.iterations);
    jw.field("residual", sol.residual);
    jw.field("scale", sol.scale);
    jw.field("variant", sol.variant);
    jw.field("kernel", sol.kernel);
    jw.field("energy", discrete_energy(sol.mesh, sol.values));
    describe_contact(jw, sol);
}

int cmd_solve(const RunConfig& c) {
    SolveProduct p = run_solve_pipeline(c);
    std::filesystem::create_directories(c.out_dir);
    write_solution_file(c.out_dir + "/solution.sol", p.sol);

    JsonWriter jw;
    jw.open_obj();
    jw.field("command", "solve");
    echo_config(jw, c);
    describe_solution(jw, p.sol);
    if (p.expanded) {
        jw.field("b", p.report.b);
        jw.field("b_deviation", p.report.deviation);
        jw.field("b_flagged", p.report.flagged);
    }
    jw.close_obj();
    emit(c.out_dir, "solve_summary.json", jw);
    return p.sol.converged ? kExitOk : kExitNotConverged;
}

int cmd_expand(const RunConfig& c, const std::string& solution_path, bool have_config) {
    DiscreteSolution sol = read_solution_file(solution_path);
    std::vector<double> radii = c.radii;
    if (!have_config) {
        radii = {sol.mesh.L / 2.0, 5.0 * sol.mesh.L / 8.0, 3.0 * sol.mesh.L / 4.0};
    }
    const int N = have_config ? c.N : 2 * sol.k - 2;
    ExpansionReport rep = extract_b(sol, radii, std::max(N, 1), c.ntheta);
    std::filesystem::create_directories(c.out_dir);
    {
        std::ofstream os(c.out_dir + "/expansion.csv", std::ios::binary);
        if (!os) throw IoError("cannot open " + c.out_dir + "/expansion.csv for writing");
        write_expansion_csv(os, rep);
    }

    JsonWriter jw;
    jw.open_obj();
    jw.field("command", "expand");
    if (have_config) echo_config(jw, c);
    jw.field("solution_file", solution_path);
    jw.field("N", rep.N);
    jw.field("radii", rep.radii);
    jw.field("M_emp", rep.M_emp);
    jw.field("b", rep.b);
    jw.field("deviation", rep.deviation);
    jw.field("flagged", rep.flagged);
    jw.close_obj();
    emit(c.out_dir, "expand_summary.json", jw);
    if (rep.flagged && c.strict) {
        std::cerr << "deviation across radii exceeds the 1% threshold\n";
        return kExitNotConverged;
    }
    return kExitOk;
}

void describe_classification(JsonWriter& jw, const ClassificationReport& rep) {
    jw.field("half_space", rep.half_space);
    jw.field("reason", rep.reason);
    jw.field("endpoint", rep.endpoint);
    jw.field("tau", rep.tau);
    jw.field("alpha", rep.alpha);
    jw.field("P_coeffs", rep.P_coeffs);
    jw.field("fit_residual", rep.fit_residual);
    jw.field("representation_residual", rep.representation_residual);
    jw.field("M_emp", rep.M_emp);
}

int cmd_classify(const RunConfig& c, const std::string& solution_path, bool have_config) {
    DiscreteSolution sol;
    if (!solution_path.empty()) {
        sol = read_solution_file(solution_path);
    } else {
        if (!have_config) throw ConfigError("classify", "needs --config or a solution file");
        SolveProduct p = run_solve_pipeline(c);
        if (!p.sol.converged) return kExitNotConverged;
        sol = std::move(p.sol);
    }
    ClassificationReport rep = classify_half_space(sol, c.ntheta);

    JsonWriter jw;
    jw.open_obj();
    jw.field("command", "classify");
    if (have_config) echo_config(jw, c);
    describe_classification(jw, rep);
    jw.close_obj();
    emit(c.out_dir, "classification.json", jw);
    return rep.half_space ? kExitOk : kExitVerdict;
}

int cmd_pair(const RunConfig& c) {
    const Mesh mesh = Mesh::make(c.L, c.h);
    const SolveOptions opt = options_of(c);
    PairResult pr;
    if (c.boundary_mode == "exact") {
        // Closed-form pair: the expansion translated by +tau against its
        // conjugate translated by -tau.
        const SlitExpansion e = exact_expansion_of(c);
        const InfinityDatum d = datum_of_exact(c, e);
        const DiscreteSolution plus = solve_psor(assemble_exact(d, mesh, e, c.exact_tau), opt);
        if (!plus.converged) throw NotConverged("pair: plus solve did not converge");
        const DiscreteSolution minus = solve_psor(
            assemble_exact(conjugate_datum(d), mesh, conjugate_expansion(e), -c.exact_tau), opt);
        if (!minus.converged) throw NotConverged("pair: minus solve did not converge");
        pr = pair_run(plus, minus, d, c.radii, c.N, c.ntheta);
    } else if (c.boundary_mode == "datum") {
        const InfinityDatum d = validate_datum(c.k, c.a);
        pr = pair_run(d, mesh, opt, c.radii, c.N, c.ntheta);
    } else {
        throw ConfigError("boundary_mode", "pair runs with datum or exact boundaries");
    }

    double bscale = 0.0;
    for (double v : pr.b_plus.b) bscale = std::max(bscale, std::fabs(v));
    for (double v : pr.b_minus.b) bscale = std::max(bscale, std::fabs(v));
    const double defect_tol = kPairDefectTol * std::max(kPairDefectFloor, bscale);

    const bool both_half_space = pr.plus_report.half_space && pr.minus_report.half_space;
    const bool alpha_ok =
        both_half_space && std::isfinite(pr.alpha_mirror_error) &&
        pr.alpha_mirror_error <= kPairAlphaTol;
    const bool p_ok = std::isfinite(pr.pair_P_deviation) && pr.pair_P_deviation <= kPairPTol;
    const bool defect_ok = pr.defect <= defect_tol;
    const bool pass = both_half_space && alpha_ok && p_ok && defect_ok;

    JsonWriter jw;
    jw.open_obj();
    jw.field("command", "pair");
    echo_config(jw, c);
    jw.open_obj("plus");
    describe_classification(jw, pr.plus_report);
    jw.close_obj();
    jw.open_obj("minus");
    describe_classification(jw, pr.minus_report);
    jw.close_obj();
    jw.field("b_plus", pr.b_plus.b);
    jw.field("b_minus", pr.b_minus.b);
    jw.open_obj("pair");
    jw.field("defect", pr.defect);
    jw.field("defect_tol", defect_tol);
    jw.field("repr_misfit_plus", pr.repr_misfit_plus);
    jw.field("repr_misfit_minus", pr.repr_misfit_minus);
    jw.field("alpha_mirror_error", pr.alpha_mirror_error);
    jw.field("alpha_mirror_tol", kPairAlphaTol);
    jw.field("P_deviation", pr.pair_P_deviation);
    jw.field("P_deviation_tol", kPairPTol);
    jw.close_obj();
    jw.field("symmetric_pair", pass);
    jw.close_obj();
    emit(c.out_dir, "pair_report.json", jw);
    return pass ? kExitOk : kExitVerdict;
}

int cmd_barrier(const RunConfig& c) {
    const InfinityDatum d = validate_datum(c.k, c.a);
    BarrierResult b = find_barrier(d, c.tau, c.tau_cap, c.J);

    JsonWriter jw;
    jw.open_obj();
    jw.field("command", "barrier");
    echo_config(jw, c);
    jw.field("tau", b.tau);
    jw.field("alpha", b.alpha_w);
    jw.field("alpha_u", b.profile.alpha);
    jw.field("M_est", b.M_est);
    jw.field("gap_coeff", b.gap_coeff);
    jw.field("admissible", b.cert.admissible);
    jw.field("zero_margin", b.cert.zero_margin);
    jw.field("margin", b.cert.margin);
    jw.open_obj("Q");
    for (const auto& [m, coef] : b.Q.terms()) jw.field(std::to_string(m), coef);
    jw.close_obj();
    jw.close_obj();
    emit(c.out_dir, "barrier_report.json", jw);
    return kExitOk;
}

int cmd_admissible(const RunConfig& c, const std::string& alpha_csv, bool have_config) {
    std::vector<double> alpha = c.alpha;
    int k = c.k;
    if (!alpha_csv.empty()) {
        alpha.clear();
        std::stringstream ss(alpha_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                alpha.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw ConfigError("alpha", "cannot parse entry '" + tok + "'");
            }
        }
        k = static_cast<int>(alpha.size() + 2) / 2;
    }
    if (alpha.empty() && have_config) {
        alpha.assign(static_cast<std::size_t>(2 * k - 2), 0.0);
    }
    const Profile prof = validate_profile(k, alpha);
    const AdmissibilityCertificate cert = profile_admissible(prof);

    JsonWriter jw;
    jw.open_obj();
    jw.field("command", "admissible");
    if (have_config) echo_config(jw, c);
    jw.field("k", k);
    jw.field("alpha", alpha);
    jw.field("admissible", cert.admissible);
    jw.field("zero_margin", cert.zero_margin);
    jw.field("margin", cert.margin);
    jw.field("trace_poly", cert.trace_poly);
    jw.field("slit_poly", cert.slit_poly);
    jw.field("trace_roots", cert.trace_roots);
    jw.field("slit_roots", cert.slit_roots);
    jw.close_obj();
    emit(c.out_dir, "admissible_report.json", jw);
    return kExitOk;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"thin obstacle solver and classifier on the slit plane"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string radii_csv;
    std::string alpha_csv;
    std::string solution_path;
    double tau = 0.0;
    bool strict = false;
    bool have_tau = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_flag("--strict", strict, "fail on flagged deviations");
        sub->add_option("--radii", radii_csv, "comma-separated extraction radii");
        sub->add_option("--tau", tau, "translation parameter")->each([&](const std::string&) {
            have_tau = true;
        });
    };

    CLI::App* solve = app.add_subcommand("solve", "solve the discrete obstacle problem");
    add_common(solve);
    CLI::App* expand = app.add_subcommand("expand", "extract decay coefficients from a solution");
    add_common(expand);
    expand->add_option("solution", solution_path, "SLITSTONE-SOL v1 file")->required();
    CLI::App* classify = app.add_subcommand("classify", "test a solution for half-space contact");
    add_common(classify);
    classify->add_option("solution", solution_path, "SLITSTONE-SOL v1 file");
    CLI::App* pair = app.add_subcommand("pair", "solve a datum and its conjugate, check symmetry");
    add_common(pair);
    CLI::App* barrier = app.add_subcommand("barrier", "construct a dominating translated profile");
    add_common(barrier);
    CLI::App* admissible = app.add_subcommand("admissible", "check a profile coefficient vector");
    add_common(admissible);
    admissible->add_option("alpha", alpha_csv, "comma-separated alpha values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const bool have_config = !config_path.empty();
    RunConfig c = have_config ? load_config_file(config_path) : parse_config(nlohmann::json::object());
    if (!out_dir.empty()) c.out_dir = out_dir;
    if (strict) c.strict = true;
    if (have_tau) {
        if (!(tau > 0.0)) throw ConfigError("tau", "must be positive");
        c.tau = tau;
        c.exact_tau = tau;
    }
    if (!radii_csv.empty()) {
        c.radii.clear();
        std::stringstream ss(radii_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                c.radii.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw ConfigError("radii", "cannot parse entry '" + tok + "'");
            }
        }
        for (double r : c.radii) {
            if (!(r > 0.0)) throw ConfigError("radii", "entries must be positive");
        }
    }

    if (solve->parsed()) return cmd_solve(c);
    if (expand->parsed()) return cmd_expand(c, solution_path, have_config);
    if (classify->parsed()) return cmd_classify(c, solution_path, have_config);
    if (pair->parsed()) return cmd_pair(c);
    if (barrier->parsed()) return cmd_barrier(c);
    if (admissible->parsed()) return cmd_admissible(c, alpha_csv, have_config);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "ConfigError: " << e.what() << "\n";
        return kExitConfig;
    } catch (const CoefficientOutOfRange& e) {
        std::cerr << "CoefficientOutOfRange: " << e.what() << "\n";
        return kExitConfig;
    } catch (const LengthMismatch& e) {
        std::cerr << "LengthMismatch: " << e.what() << "\n";
        return kExitConfig;
    } catch (const MeshError& e) {
        std::cerr << "MeshError: " << e.what() << "\n";
        return kExitConfig;
    } catch (const CircleOutsideMesh& e) {
        std::cerr << "CircleOutsideMesh: " << e.what() << "\n";
        return kExitConfig;
    } catch (const RadiusBelowContactClosure& e) {
        std::cerr << "RadiusBelowContactClosure: " << e.what() << "\n";
        return kExitRadius;
    } catch (const BarrierSearchExhausted& e) {
        std::cerr << "BarrierSearchExhausted: " << e.what() << "\n";
        return kExitBarrier;
    } catch (const NotConverged& e) {
        std::cerr << "NotConverged: " << e.what() << "\n";
        return kExitNotConverged;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
