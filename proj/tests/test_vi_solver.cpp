#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "oracles.hpp"
#include "slitstone/admissibility.hpp"
#include "slitstone/errors.hpp"
#include "slitstone/vi_solver.hpp"

using namespace slitstone;

namespace {

double omega_for(const Mesh& m) { return 2.0 / (1.0 + std::sin(M_PI / (m.nx - 1))); }

SolveOptions fast_opts(const Mesh& m, double tol = 1e-10) {
    SolveOptions opt;
    opt.omega = omega_for(m);
    opt.tol = tol;
    opt.variant = "redblack";
    opt.simd = "auto";
    return opt;
}

DiscreteSolution solve_exact_translate(const Mesh& mesh, double tau, double tol = 1e-10) {
    SlitExpansion e;
    e.set_term(3, 1.0);
    std::vector<double> a(3);
    for (int l = 1; l <= 3; ++l) {
        a[static_cast<std::size_t>(l - 1)] = oracle::shifted_datum_coeff(e.terms(), 2, l, tau);
    }
    const InfinityDatum d = make_datum(2, a);
    return solve_psor(assemble_exact(d, mesh, e, tau), fast_opts(mesh, tol));
}

}  // namespace

TEST_CASE("mesh validation") {
    const Mesh m = Mesh::make(8.0, 1.0);
    CHECK(m.nx == 17);
    CHECK(m.ny == 9);
    CHECK(m.x1(0) == -8.0);
    CHECK(m.x1(16) == 8.0);
    CHECK(m.is_dirichlet(0, 0));
    CHECK(m.is_dirichlet(16, 0));
    CHECK(m.is_dirichlet(5, 8));
    CHECK(!m.is_dirichlet(5, 0));
    CHECK(m.is_thin(5, 0));
    CHECK(!m.is_thin(0, 0));
    CHECK(!m.is_thin(16, 0));

    CHECK_THROWS_AS(Mesh::make(8.0, 0.3), MeshError);
    CHECK_THROWS_AS(Mesh::make(3.0, 0.5), MeshError);
    CHECK_THROWS_AS(Mesh::make(8.0, -1.0), MeshError);
}

TEST_CASE("assemble fills Dirichlet nodes with the datum") {
    const Mesh m = Mesh::make(8.0, 0.5);
    const InfinityDatum d = validate_datum(2, {0.0, 0.0, 0.0});
    const LcpSystem sys = assemble(d, m);
    CHECK(sys.constrained);
    CHECK(sys.scale > 0.0);
    const SlitExpansion p = d.expansion();
    double expect_scale = 0.0;
    for (int j = 0; j < m.ny; ++j) {
        for (int i = 0; i < m.nx; ++i) {
            const double v = sys.boundary[m.idx(i, j)];
            if (m.is_dirichlet(i, j)) {
                const double want = eval_expansion(p, PlanePoint(m.x1(i), m.x2(j)));
                CHECK(v == doctest::Approx(want).epsilon(1e-14));
                expect_scale = std::max(expect_scale, std::fabs(want));
            } else {
                CHECK(v == 0.0);
            }
        }
    }
    CHECK(sys.scale == doctest::Approx(expect_scale).epsilon(1e-15));
}

TEST_CASE("assemble_enriched perturbs only Dirichlet entries") {
    const Mesh m = Mesh::make(8.0, 0.5);
    const InfinityDatum d = validate_datum(2, {0.3, -0.2, 0.1});
    const LcpSystem plain = assemble(d, m);
    const LcpSystem rich = assemble_enriched(d, m, {0.1, 0.05});
    bool changed = false;
    for (int j = 0; j < m.ny; ++j) {
        for (int i = 0; i < m.nx; ++i) {
            const std::size_t n = m.idx(i, j);
            if (m.is_dirichlet(i, j)) {
                if (plain.boundary[n] != rich.boundary[n]) changed = true;
            } else {
                CHECK(plain.boundary[n] == rich.boundary[n]);
            }
        }
    }
    CHECK(changed);
    CHECK(rich.mode == BoundaryMode::enriched);
}

TEST_CASE("constant positive boundary reduces to the linear problem") {
    const Mesh m = Mesh::make(8.0, 0.5);
    LcpSystem sys = assemble_custom(m, [](double, double) { return 1.0; });
    SolveOptions opt = fast_opts(m, 1e-12);
    const DiscreteSolution sol = solve_psor(sys, opt);
    CHECK(sol.converged);

    sys.constrained = false;
    const DiscreteSolution lin = solve_psor(sys, opt);
    CHECK(lin.converged);

    double dmax = 0.0;
    double cmax = 0.0;
    for (std::size_t n = 0; n < sol.values.size(); ++n) {
        dmax = std::max(dmax, std::fabs(sol.values[n] - lin.values[n]));
        cmax = std::max(cmax, std::fabs(sol.values[n] - 1.0));
    }
    CHECK(dmax <= 1e-10);
    CHECK(cmax <= 1e-9);
    const ContactReport contact = contact_set(sol);
    CHECK(contact.intervals.empty());
}

TEST_CASE("exact model boundary reproduces the half-line contact set") {
    const Mesh m = Mesh::make(8.0, 0.125);
    const DiscreteSolution sol = solve_exact_translate(m, 0.0);
    REQUIRE(sol.converged);

    const ContactReport contact = contact_set(sol);
    REQUIRE(contact.intervals.size() == 1);
    CHECK(contact.touches_left_edge);
    CHECK(contact.intervals[0].left == doctest::Approx(-8.0 + m.h).epsilon(1e-12));
    CHECK(contact.intervals[0].right <= m.h + 1e-12);
    CHECK(contact.intervals[0].right >= -6.0 * m.h - 1e-12);
    CHECK(contact.M_emp < 4.0);

    for (int i = 1; i < m.nx - 1; ++i) {
        const double x = m.x1(i);
        if (x <= -0.75) CHECK(sol.active[static_cast<std::size_t>(i)] == 1);
        if (x >= 0.25) CHECK(sol.active[static_cast<std::size_t>(i)] == 0);
    }
    for (int i = 1; i < m.nx - 1; ++i) {
        if (sol.active[static_cast<std::size_t>(i)]) CHECK(sol.value(i, 0) == 0.0);
    }
}

TEST_CASE("translated exact boundary shifts the contact endpoint") {
    const Mesh m = Mesh::make(8.0, 0.125);
    const DiscreteSolution sol = solve_exact_translate(m, 0.5);
    REQUIRE(sol.converged);
    const ContactReport contact = contact_set(sol);
    REQUIRE(contact.intervals.size() == 1);
    CHECK(contact.touches_left_edge);
    CHECK(contact.intervals[0].right <= 0.5 + m.h + 1e-12);
    CHECK(contact.intervals[0].right >= 0.5 - 6.0 * m.h - 1e-12);
}

TEST_CASE("psor energy is nonincreasing along sweeps") {
    const Mesh m = Mesh::make(8.0, 0.5);
    const InfinityDatum d = validate_datum(2, {0.3, -0.2, 0.1});
    const LcpSystem sys = assemble(d, m);
    SolveOptions opt;
    opt.omega = 1.8;
    opt.tol = 1e-12;
    opt.variant = "lex";
    opt.simd = "scalar";
    double prev = 1e300;
    for (long iters : {2L, 4L, 8L, 16L, 32L, 64L}) {
        opt.max_iter = iters;
        const DiscreteSolution sol = solve_psor(sys, opt);
        const double e = discrete_energy(m, sol.values);
        CHECK(e <= prev + 1e-9 * std::fabs(prev));
        prev = e;
    }
}

TEST_CASE("max_iter exhaustion reports non-convergence") {
    const Mesh m = Mesh::make(8.0, 0.25);
    const InfinityDatum d = validate_datum(2, {0.3, -0.2, 0.1});
    SolveOptions opt = fast_opts(m);
    opt.max_iter = 3;
    const DiscreteSolution sol = solve_psor(assemble(d, m), opt);
    CHECK(!sol.converged);
    CHECK(sol.iterations == 3);
    CHECK(sol.residual > 0.0);
}

TEST_CASE("solution attains its maximum on the Dirichlet boundary") {
    const Mesh m = Mesh::make(8.0, 0.125);
    const InfinityDatum d = validate_datum(2, {0.5, -0.4, 0.3});
    const LcpSystem sys = assemble(d, m);
    const DiscreteSolution sol = solve_psor(sys, fast_opts(m));
    REQUIRE(sol.converged);
    double all = -1e300;
    double boundary = -1e300;
    for (int j = 0; j < m.ny; ++j) {
        for (int i = 0; i < m.nx; ++i) {
            const double v = sol.value(i, j);
            all = std::max(all, v);
            if (m.is_dirichlet(i, j)) boundary = std::max(boundary, v);
        }
    }
    CHECK(all <= boundary + 1e-10 * sol.scale);
}

TEST_CASE("discrete comparison sandwich against the translated barrier") {
    const Mesh m = Mesh::make(8.0, 0.125);
    oracle::Rng rng(41);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<double> a{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                              rng.uniform(-1.0, 1.0)};
        const InfinityDatum d = validate_datum(2, a);
        const SlitExpansion p = d.expansion();

        BarrierResult bb = find_barrier(d);
        for (;;) {
            double worst = 0.0;
            for (int j = 0; j < m.ny; ++j) {
                for (int i = 0; i < m.nx; ++i) {
                    if (!m.is_dirichlet(i, j)) continue;
                    const PlanePoint pt(m.x1(i), m.x2(j));
                    worst = std::min(worst,
                                     eval_barrier_Q(bb, pt) - eval_expansion(p, pt));
                }
            }
            if (worst >= 0.0) break;
            REQUIRE(bb.tau * 2.0 <= 1048576.0);
            bb = barrier(d, bb.tau * 2.0);
            REQUIRE(bb.cert.admissible);
        }

        SolveOptions opt = fast_opts(m);
        opt.omega = 1.9;
        LcpSystem sys_u = assemble(d, m);
        const DiscreteSolution u = solve_psor(sys_u, opt);
        REQUIRE(u.converged);

        LcpSystem sys_p = assemble(d, m);
        sys_p.constrained = false;
        const DiscreteSolution ph = solve_psor(sys_p, opt);
        REQUIRE(ph.converged);

        const BarrierResult& bref = bb;
        LcpSystem sys_q = assemble_custom(m, [&bref](double x, double y) {
            return eval_barrier_Q(bref, PlanePoint(x, y));
        });
        const DiscreteSolution qh = solve_psor(sys_q, opt);
        REQUIRE(qh.converged);

        const double eps = 10.0 * opt.tol * std::max(sys_u.scale, sys_q.scale);
        double lower = 0.0;
        double upper = 0.0;
        for (std::size_t n = 0; n < u.values.size(); ++n) {
            lower = std::min(lower, u.values[n] - ph.values[n]);
            upper = std::min(upper, qh.values[n] - u.values[n]);
        }
        CHECK(lower >= -eps);
        CHECK(upper >= -eps);
    }
}

TEST_CASE("grid convergence against the exact translate") {
    std::vector<double> errs;
    for (double h : {0.25, 0.125, 0.0625}) {
        const Mesh m = Mesh::make(8.0, h);
        const DiscreteSolution sol = solve_exact_translate(m, 0.5);
        REQUIRE(sol.converged);
        double err = 0.0;
        for (int j = 0; j < m.ny; ++j) {
            for (int i = 0; i < m.nx; ++i) {
                const double want = eval_u(3, PlanePoint(m.x1(i) - 0.5, m.x2(j)));
                err = std::max(err, std::fabs(sol.value(i, j) - want));
            }
        }
        errs.push_back(err / sol.scale);
    }
    CHECK(errs[0] / errs[1] >= 1.5);
    CHECK(errs[1] / errs[2] >= 1.5);
}

TEST_CASE("solves are deterministic") {
    const Mesh m = Mesh::make(8.0, 0.25);
    const InfinityDatum d = validate_datum(2, {0.3, -0.2, 0.1});
    for (const char* variant : {"lex", "redblack"}) {
        SolveOptions opt = fast_opts(m);
        opt.variant = variant;
        const DiscreteSolution s1 = solve_psor(assemble(d, m), opt);
        const DiscreteSolution s2 = solve_psor(assemble(d, m), opt);
        REQUIRE(s1.values.size() == s2.values.size());
        CHECK(std::memcmp(s1.values.data(), s2.values.data(),
                          s1.values.size() * sizeof(double)) == 0);
        CHECK(s1.active == s2.active);
        CHECK(s1.iterations == s2.iterations);
    }
}

TEST_CASE("expansion refinement settles the extracted tail") {
    const Mesh m = Mesh::make(8.0, 0.125);
    const InfinityDatum d = validate_datum(2, {0.3, -0.2, 0.1});
    const SolveOptions opt = fast_opts(m);
    const std::vector<double> radii{4.0, 5.0, 6.0};

    const RefinementResult one = solve_with_expansion_refinement(d, m, 2, 1, opt, radii);
    const DiscreteSolution plain = solve_psor(assemble(d, m), opt);
    CHECK(std::memcmp(one.solution.values.data(), plain.values.data(),
                      plain.values.size() * sizeof(double)) == 0);
    CHECK(one.b_rounds.size() == 1);

    const RefinementResult ref = solve_with_expansion_refinement(d, m, 2, 3, opt, radii);
    REQUIRE(ref.b_rounds.size() == 3);
    REQUIRE(ref.b_rounds[0].size() == 2);
    double d12 = 0.0;
    double d23 = 0.0;
    for (std::size_t j = 0; j < 2; ++j) {
        d12 = std::max(d12, std::fabs(ref.b_rounds[1][j] - ref.b_rounds[0][j]));
        d23 = std::max(d23, std::fabs(ref.b_rounds[2][j] - ref.b_rounds[1][j]));
    }
    CHECK(d23 < d12);
    CHECK(ref.solution.mode == BoundaryMode::enriched);
}
