// Acceptance gate: one line and one verdict per criterion, exit code is the
// number of failed criteria. argv[1] is the CLI executable path.

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "oracles.hpp"
#include "slitstone/admissibility.hpp"
#include "slitstone/errors.hpp"
#include "slitstone/expansion.hpp"
#include "slitstone/slit_basis.hpp"
#include "slitstone/solution_io.hpp"
#include "slitstone/symmetry.hpp"
#include "slitstone/vi_solver.hpp"
#include "testutil.hpp"

using namespace slitstone;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string g_cli;
std::string g_tmp;
int g_failures = 0;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

void report(int id, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << detail
              << std::endl;
    if (!pass) ++g_failures;
}

void run_criterion(int id, const std::function<std::pair<bool, std::string>()>& body) {
    try {
        const auto [pass, detail] = body();
        report(id, pass, detail);
    } catch (const std::exception& e) {
        report(id, false, std::string("exception: ") + e.what());
    }
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

SlitExpansion pure_model() {
    SlitExpansion e;
    e.set_term(3, 1.0);
    return e;
}

InfinityDatum datum_of_exact(const SlitExpansion& e, int k, double tau) {
    std::vector<double> a(2 * static_cast<std::size_t>(k) - 1);
    for (std::size_t l = 1; l <= a.size(); ++l) {
        a[l - 1] = oracle::shifted_datum_coeff(e.terms(), k, static_cast<int>(l), tau);
    }
    return make_datum(k, a);
}

DiscreteSolution solve_exact_level(double h, double omega, double tol, double tau) {
    const Mesh mesh = Mesh::make(8.0, h);
    SolveOptions opt;
    opt.omega = omega;
    opt.tol = tol;
    opt.variant = "redblack";
    const SlitExpansion e = pure_model();
    DiscreteSolution sol = solve_psor(assemble_exact(datum_of_exact(e, 2, tau), mesh, e, tau), opt);
    if (!sol.converged) throw NotConverged("acceptance: exact solve did not converge");
    return sol;
}

int run_cli(const std::string& args, const std::string& log) {
    return testutil::run_cmd("\"" + g_cli + "\" " + args + " > " + log + ".out 2> " + log +
                             ".err");
}

// Shared exact-translate solves, computed once.
struct SharedSolves {
    DiscreteSolution s256;
    DiscreteSolution s512;
    DiscreteSolution s1024;
    double secs256 = 0.0;
    double secs512 = 0.0;
    double secs1024 = 0.0;
};

double node_error(const DiscreteSolution& sol, double tau) {
    double err = 0.0;
    for (int j = 0; j < sol.mesh.ny; ++j) {
        for (int i = 0; i < sol.mesh.nx; ++i) {
            const double want = eval_u(3, PlanePoint(sol.mesh.x1(i) - tau, sol.mesh.x2(j)));
            err = std::max(err, std::fabs(sol.value(i, j) - want));
        }
    }
    return err / sol.scale;
}

std::pair<bool, std::string> criterion1() {
    const double t0 = now_seconds();
    oracle::Rng rng(101);
    bool ok = true;
    std::string what;

    for (int t = 0; t < 200 && ok; ++t) {
        const int m = static_cast<int>(rng.integer(0, 6));
        const PlanePoint p(-rng.uniform(0.01, 50.0), 0.0);
        if (eval_u(m, p) != 0.0) {
            ok = false;
            what = "slit value not exactly zero";
        }
    }

    for (int t = 0; t < 200 && ok; ++t) {
        const int m = static_cast<int>(rng.integer(0, 5));
        const double r = rng.uniform(0.2, 4.0);
        const double th = rng.uniform(-M_PI + 1e-6, M_PI - 1e-6);
        const PlanePoint p(r * std::cos(th), r * std::sin(th));
        for (double lam : {0.5, 2.0, 3.7}) {
            const PlanePoint ps(lam * p.x1, lam * p.x2);
            const double want = std::pow(lam, m + 0.5) * eval_u(m, p);
            const double scale = std::fabs(want) + 1.0;
            if (std::fabs(eval_u(m, ps) - want) / scale > 1e-12) {
                ok = false;
                what = "homogeneity above 1e-12";
            }
        }
    }

    double e1 = 0.0;
    double e2 = 0.0;
    for (int t = 0; t < 100; ++t) {
        const int m = static_cast<int>(rng.integer(0, 4));
        const double r = rng.uniform(0.3, 4.0);
        const double th = rng.uniform(-2.8, 2.8);
        const double x1 = r * std::cos(th);
        const double x2 = std::fabs(r * std::sin(th)) + 0.05;
        const auto g = oracle::grad_complex(m, x1, x2);
        const double scale = std::hypot(g[0], g[1]) + 1.0;
        const auto f1 = oracle::grad_fd(m, x1, x2, 1e-3);
        const auto f2 = oracle::grad_fd(m, x1, x2, 5e-4);
        e1 = std::max(e1, std::max(std::fabs(f1[0] - g[0]), std::fabs(f1[1] - g[1])) / scale);
        e2 = std::max(e2, std::max(std::fabs(f2[0] - g[0]), std::fabs(f2[1] - g[1])) / scale);
    }
    const double order = std::log2(e1 / e2);
    if (order < 1.9) {
        ok = false;
        what = "finite difference order " + fmt(order);
    }

    double gram_err = 0.0;
    for (int l = 1; l <= 16; ++l) {
        const CircleTrace tr =
            circle_trace_of(1.0, 4096, [l](PlanePoint p) { return std::cos((l - 0.5) * p.theta); });
        for (int j = 1; j <= 16; ++j) {
            const double want = (j == l) ? 1.0 : 0.0;
            gram_err = std::max(gram_err, std::fabs(half_mode_coeff(tr, j) - want));
        }
    }
    if (gram_err > 1e-10) {
        ok = false;
        what = "gram identity error " + fmt(gram_err);
    }

    const double secs = now_seconds() - t0;
    if (secs >= 10.0) {
        ok = false;
        what = "suite took " + fmt(secs) + " s";
    }
    if (ok) {
        what = "vanishing/homogeneity/gradient order " + fmt(order) + "/gram " + fmt(gram_err) +
               " in " + fmt(secs) + " s";
    }
    return {ok, what};
}

std::pair<bool, std::string> criterion2(const SharedSolves& shared) {
    const double err256 = node_error(shared.s256, 0.5);
    const double err512 = node_error(shared.s512, 0.5);
    const double err1024 = node_error(shared.s1024, 0.5);
    const double r1 = err256 / err512;
    const double r2 = err512 / err1024;
    const double worst_secs = std::max({shared.secs256, shared.secs512, shared.secs1024});
    const bool ok = err512 <= 0.05 && r1 >= 1.5 && r2 >= 1.5 && worst_secs <= 300.0;
    return {ok, "errors " + fmt(err256) + "/" + fmt(err512) + "/" + fmt(err1024) + ", ratios " +
                    fmt(r1) + "," + fmt(r2) + ", slowest solve " + fmt(worst_secs) + " s"};
}

std::pair<bool, std::string> criterion3(const SharedSolves& shared) {
    const ContactReport contact = contact_set(shared.s512);
    const double h = shared.s512.mesh.h;
    if (contact.intervals.size() != 1) {
        return {false, "contact has " + std::to_string(contact.intervals.size()) + " intervals"};
    }
    const double right = contact.intervals[0].right;
    const double gap = std::fabs(right - 0.5);
    const bool ok = gap <= 2.0 * h;
    return {ok, "contact right endpoint " + fmt(right) + ", distance from 0.5 is " + fmt(gap) +
                    " (" + fmt(gap / h) + " h, window 2 h); the discrete free boundary lags the" +
                    " continuum endpoint at first order in the mesh, so the window is missed"};
}

std::pair<bool, std::string> criterion4(const SharedSolves& shared) {
    SlitExpansion e = pure_model();
    const double b1 = oracle::shifted_tail_coeff(e.terms(), 1, 0.5);
    const double b2 = oracle::shifted_tail_coeff(e.terms(), 2, 0.5);
    std::vector<double> rich1, rich2;
    for (double R : {4.0, 5.0, 6.0}) {
        const ExpansionReport cf = extract_b(shared.s512, {R}, 2);
        const ExpansionReport cf2 = extract_b(shared.s1024, {R}, 2);
        rich1.push_back((4.0 * cf2.b[0] - cf.b[0]) / 3.0);
        rich2.push_back((4.0 * cf2.b[1] - cf.b[1]) / 3.0);
    }
    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    auto spread = [](const std::vector<double>& v) {
        double lo = v[0];
        double hi = v[0];
        for (double x : v) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        return hi - lo;
    };
    const double m1 = mean(rich1);
    const double m2 = mean(rich2);
    const double rel1 = std::fabs(m1 - b1) / std::fabs(b1);
    const double rel2 = std::fabs(m2 - b2) / std::fabs(b2);
    const double bscale = std::max(1.0, std::max(std::fabs(b1), std::fabs(b2)));
    const double sp = std::max(spread(rich1), spread(rich2)) / bscale;
    const bool ok = rel1 <= 0.005 && rel2 <= 0.005 && sp <= 0.01;
    return {ok, "relative errors " + fmt(rel1) + "," + fmt(rel2) + " (0.5% cap), radius spread " +
                    fmt(sp) + " (1% cap)"};
}

std::pair<bool, std::string> criterion5() {
    const Mesh mesh = Mesh::make(8.0, 0.125);
    SolveOptions opt;
    opt.omega = 1.9;
    opt.tol = 1e-10;
    opt.variant = "redblack";
    oracle::Rng rng(505);
    double worst_lower = 0.0;
    double worst_upper = 0.0;
    double worst_tau = 0.0;
    for (int k : {2, 3}) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> a(2 * static_cast<std::size_t>(k) - 1);
            for (auto& v : a) v = rng.uniform(-1.0, 1.0);
            const InfinityDatum d = validate_datum(k, a);
            const SlitExpansion p = d.expansion();

            BarrierResult bb = find_barrier(d);
            for (;;) {
                if (!bb.cert.admissible) return {false, "barrier certificate not admissible"};
                if (bb.tau > 1048576.0) return {false, "barrier translation above 2^20"};
                double worst = 0.0;
                for (int j = 0; j < mesh.ny; ++j) {
                    for (int i = 0; i < mesh.nx; ++i) {
                        if (!mesh.is_dirichlet(i, j)) continue;
                        const PlanePoint pt(mesh.x1(i), mesh.x2(j));
                        worst = std::min(worst, eval_barrier_Q(bb, pt) - eval_expansion(p, pt));
                    }
                }
                if (worst >= 0.0) break;
                if (bb.tau * 2.0 > 1048576.0) {
                    return {false, "no dominating translation below 2^20"};
                }
                bb = barrier(d, bb.tau * 2.0);
            }
            worst_tau = std::max(worst_tau, bb.tau);

            LcpSystem sys_u = assemble(d, mesh);
            const DiscreteSolution u = solve_psor(sys_u, opt);
            LcpSystem sys_p = assemble(d, mesh);
            sys_p.constrained = false;
            const DiscreteSolution ph = solve_psor(sys_p, opt);
            const BarrierResult& bref = bb;
            LcpSystem sys_q = assemble_custom(mesh, [&bref](double x, double y) {
                return eval_barrier_Q(bref, PlanePoint(x, y));
            });
            const DiscreteSolution qh = solve_psor(sys_q, opt);
            if (!u.converged || !ph.converged || !qh.converged) {
                return {false, "a comparison solve did not converge"};
            }

            const double eps = 10.0 * opt.tol * std::max(sys_u.scale, sys_q.scale);
            double lower = 0.0;
            double upper = 0.0;
            for (std::size_t n = 0; n < u.values.size(); ++n) {
                lower = std::min(lower, u.values[n] - ph.values[n]);
                upper = std::min(upper, qh.values[n] - u.values[n]);
            }
            if (lower < -eps || upper < -eps) {
                return {false, "sandwich violated at k=" + std::to_string(k) + " trial " +
                                   std::to_string(trial) + ": lower " + fmt(lower) + ", upper " +
                                   fmt(upper) + ", eps " + fmt(eps)};
            }
            worst_lower = std::min(worst_lower, lower);
            worst_upper = std::min(worst_upper, upper);
        }
    }
    return {true, "40 data dominated (max translation " + fmt(worst_tau) +
                      "), worst sandwich slacks " + fmt(worst_lower) + "/" + fmt(worst_upper)};
}

std::pair<bool, std::string> criterion6(const SharedSolves& shared) {
    const double lead = 3.5 * 3.5;
    double worst0 = 0.0;
    double worst05 = 0.0;

    const DiscreteSolution s0 = solve_exact_level(0.03125, 1.9875, 1e-10, 0.0);
    {
        const LineGradient g = line_gradient(s0, contact_set(s0));
        const PFit fit = compute_P(g, 2);
        const double W = std::max(std::fabs(fit.window_lo), std::fabs(fit.window_hi));
        worst0 = std::fabs(fit.coeffs[5] - lead) / lead;
        for (int i = 0; i < 5; ++i) {
            worst0 = std::max(worst0, std::fabs(fit.coeffs[i]) /
                                          (lead * std::pow(W, 5 - i)));
        }
    }
    {
        const LineGradient g = line_gradient(shared.s256, contact_set(shared.s256));
        const PFit fit = compute_P(g, 2);
        for (int i = 0; i <= 5; ++i) {
            double want = 0.0;
            double binom = 1.0;
            for (int x = 0; x < i; ++x) binom = binom * (5 - x) / (x + 1);
            want = lead * binom * std::pow(-0.5, 5 - i);
            worst05 = std::max(worst05, std::fabs(fit.coeffs[i] - want) / std::fabs(want));
        }
    }
    const bool ok = worst0 <= 0.05 && worst05 <= 0.05;
    return {ok, "centered deviation " + fmt(worst0) + ", translated deviation " + fmt(worst05) +
                    " (5% cap)"};
}

std::pair<bool, std::string> criterion7() {
    const std::string dir = g_tmp + "/c7";
    fs::create_directories(dir);
    const double h = 0.015625;
    const json cfg{{"boundary_mode", "exact"},
                   {"exact_terms", {{"3", 1.0}, {"2", 0.25}, {"1", 0.5}}},
                   {"exact_tau", 0.5},
                   {"L", 8.0},
                   {"h", h},
                   {"omega", 1.9937},
                   {"tol", 1e-10},
                   {"variant", "redblack"},
                   {"radii", {4.0, 5.0, 6.0}},
                   {"out_dir", dir}};
    testutil::spit(dir + "/cfg.json", cfg.dump(2));
    const int rc = run_cli("pair --config \"" + dir + "/cfg.json\"", dir + "/pair");
    if (rc != 0) return {false, "pair exited with " + std::to_string(rc)};
    const json rep = json::parse(testutil::slurp(dir + "/pair_report.json"));
    const double tp = rep["plus"]["tau"].get<double>();
    const double tm = rep["minus"]["tau"].get<double>();
    const double am = rep["pair"]["alpha_mirror_error"].get<double>();
    const double pd = rep["pair"]["P_deviation"].get<double>();
    const bool ok = std::fabs(tp - 0.5) <= 2.0 * h && std::fabs(tm + 0.5) <= 2.0 * h &&
                    am <= 0.01 && pd <= 0.02;
    return {ok, "exit 0, endpoints " + fmt(tp) + "/" + fmt(tm) + ", alpha mirror " + fmt(am) +
                    " (1% cap), P deviation " + fmt(pd) + " (2% cap)"};
}

std::pair<bool, std::string> criterion8() {
    oracle::Rng rng(808);
    int disagreements = 0;
    int ties = 0;
    int checked = 0;
    for (int k : {2, 3}) {
        for (int trial = 0; trial < 250; ++trial) {
            std::vector<double> alpha(2 * static_cast<std::size_t>(k) - 1);
            for (auto& v : alpha) v = rng.uniform(-2.0, 2.0);
            const Profile prof = validate_profile(k, alpha);
            const AdmissibilityCertificate cert = profile_admissible(prof);
            const oracle::SignSample sample =
                oracle::sample_admissible(k, alpha, 1000000, 1e-6, 1e3);
            const double eps = 1e-9;
            const bool tie = cert.zero_margin || std::fabs(cert.margin) <= eps ||
                             std::fabs(sample.min_rel) <= eps;
            if (tie) {
                ++ties;
                continue;
            }
            ++checked;
            if (cert.admissible != sample.nonneg) ++disagreements;
        }
    }
    const bool ok = disagreements == 0;
    return {ok, std::to_string(checked) + " decisive draws agree, " + std::to_string(ties) +
                    " near-boundary ties flagged and excluded, " +
                    std::to_string(disagreements) + " disagreements"};
}

std::pair<bool, std::string> criterion9() {
    const double t0 = now_seconds();
    std::vector<double> defects;
    std::vector<double> misfits;
    for (int step = 0; step <= 4; ++step) {
        const double s = 0.25 * step;
        const std::string dir = g_tmp + "/c9_" + std::to_string(step);
        fs::create_directories(dir);
        const json cfg{{"k", 2},
                       {"a", {0.4 * s, -0.8 * s, 0.0}},
                       {"L", 8.0},
                       {"h", 0.015625},
                       {"omega", 1.9937},
                       {"tol", 1e-10},
                       {"variant", "redblack"},
                       {"radii", {4.0, 5.0, 6.0}},
                       {"out_dir", dir}};
        testutil::spit(dir + "/cfg.json", cfg.dump(2));
        const int rc = run_cli("pair --config \"" + dir + "/cfg.json\"", dir + "/pair");
        if (rc != 0 && rc != 5) {
            return {false, "pair step " + std::to_string(step) + " exited with " +
                               std::to_string(rc)};
        }
        const json rep = json::parse(testutil::slurp(dir + "/pair_report.json"));
        defects.push_back(rep["pair"]["defect"].get<double>());
        misfits.push_back(std::max(rep["pair"]["repr_misfit_plus"].get<double>(),
                                   rep["pair"]["repr_misfit_minus"].get<double>()));
    }
    bool mono = true;
    for (std::size_t i = 1; i < defects.size(); ++i) {
        if (!(defects[i] > defects[i - 1])) mono = false;
        if (!(misfits[i] > misfits[i - 1])) mono = false;
    }
    const double secs = now_seconds() - t0;
    std::string series = "defects";
    for (double d : defects) series += " " + fmt(d);
    series += "; misfits";
    for (double m : misfits) series += " " + fmt(m);
    const bool ok = mono && secs <= 1800.0;
    return {ok, series + (mono ? "; both strictly increasing, rank correlation 1" :
                                 "; monotonicity violated") +
                    ", " + fmt(secs) + " s"};
}

std::pair<bool, std::string> criterion10() {
    const Mesh mesh = Mesh::make(8.0, 0.125);
    const InfinityDatum d = validate_datum(2, {0.3, -0.2, 0.1});
    SolveOptions opt;
    opt.omega = 1.95;
    opt.tol = 1e-10;
    opt.variant = "redblack";
    const DiscreteSolution sol = solve_psor(assemble(d, mesh), opt);
    if (!sol.converged) return {false, "solve did not converge"};
    const ExpansionReport r1 = extract_b(sol, {4.0, 5.0, 6.0}, 2);

    const std::string path = g_tmp + "/c10.sol";
    write_solution_file(path, sol);
    const DiscreteSolution back = read_solution_file(path);
    if (back.values.size() != sol.values.size() ||
        std::memcmp(back.values.data(), sol.values.data(),
                    sol.values.size() * sizeof(double)) != 0) {
        return {false, "solution values changed across the file round trip"};
    }
    const ExpansionReport r2 = extract_b(back, {4.0, 5.0, 6.0}, 2);
    if (r1.b.size() != r2.b.size() ||
        std::memcmp(r1.b.data(), r2.b.data(), r1.b.size() * sizeof(double)) != 0) {
        return {false, "extracted coefficients changed across the file round trip"};
    }
    return {true, "solution and re-extracted coefficients are bit-identical after the round trip"};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli = argv[1];
    g_tmp = (fs::current_path() / "acceptance_tmp").string();
    std::error_code ec;
    fs::remove_all(g_tmp, ec);
    fs::create_directories(g_tmp);

    run_criterion(1, criterion1);

    SharedSolves shared;
    bool have_shared = false;
    try {
        double t0 = now_seconds();
        shared.s256 = solve_exact_level(0.03125, 1.9875, 1e-10, 0.5);
        shared.secs256 = now_seconds() - t0;
        t0 = now_seconds();
        shared.s512 = solve_exact_level(0.015625, 1.9937, 1e-10, 0.5);
        shared.secs512 = now_seconds() - t0;
        t0 = now_seconds();
        shared.s1024 = solve_exact_level(0.0078125, 1.99687, 1e-9, 0.5);
        shared.secs1024 = now_seconds() - t0;
        have_shared = true;
    } catch (const std::exception& e) {
        const std::string why = std::string("shared exact solves failed: ") + e.what();
        report(2, false, why);
        report(3, false, why);
        report(4, false, why);
    }
    if (have_shared) {
        run_criterion(2, [&] { return criterion2(shared); });
        run_criterion(3, [&] { return criterion3(shared); });
        run_criterion(4, [&] { return criterion4(shared); });
    }

    run_criterion(5, criterion5);
    if (have_shared) {
        run_criterion(6, [&] { return criterion6(shared); });
    } else {
        report(6, false, "shared exact solves failed");
    }
    run_criterion(7, criterion7);
    run_criterion(8, criterion8);
    run_criterion(9, criterion9);
    run_criterion(10, criterion10);

    std::cout << (g_failures == 0 ? "all criteria passed"
                                  : std::to_string(g_failures) + " criterion(s) failed")
              << std::endl;
    return g_failures;
}
