#include "slitstone/vi_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slitstone/errors.hpp"
#include "slitstone/expansion.hpp"
#include "slitstone/simd/kernels.hpp"

namespace slitstone {

const char* to_string(BoundaryMode m) {
    switch (m) {
        case BoundaryMode::datum: return "datum";
        case BoundaryMode::enriched: return "enriched";
        case BoundaryMode::exact: return "exact";
    }
    return "datum";
}

BoundaryMode boundary_mode_from_string(const std::string& s) {
    if (s == "datum") return BoundaryMode::datum;
    if (s == "enriched") return BoundaryMode::enriched;
    if (s == "exact") return BoundaryMode::exact;
    throw ConfigError("boundary_mode", "must be datum, enriched, or exact");
}

Mesh Mesh::make(double L, double h) {
    if (!(h > 0.0)) throw MeshError("h must be positive");
    if (!(L >= 4.0)) throw MeshError("L must be at least 4");
    const double steps = L / h;
    const double rounded = std::round(steps);
    if (std::fabs(steps - rounded) > 1e-9 * steps || rounded < 2.0) {
        throw MeshError("L/h must be a (positive) integer");
    }
    Mesh m;
    m.L = L;
    m.h = h;
    const int n = static_cast<int>(rounded);
    m.nx = 2 * n + 1;
    m.ny = n + 1;
    return m;
}

namespace {

LcpSystem assemble_with(const Mesh& mesh, const std::function<double(double, double)>& f) {
    LcpSystem sys;
    sys.mesh = mesh;
    sys.boundary.assign(mesh.node_count(), 0.0);
    double scale = 0.0;
    for (int j = 0; j < mesh.ny; ++j) {
        for (int i = 0; i < mesh.nx; ++i) {
            if (!mesh.is_dirichlet(i, j)) continue;
            const double v = f(mesh.x1(i), mesh.x2(j));
            sys.boundary[mesh.idx(i, j)] = v;
            scale = std::max(scale, std::fabs(v));
        }
    }
    sys.scale = scale;
    return sys;
}

// Dirichlet nodes evaluated in one batch through the kernel layer; x1 is
// shifted by -tau so the boundary carries e(x1 - tau, x2).
LcpSystem assemble_expansion_boundary(const Mesh& mesh, const SlitExpansion& e, double tau) {
    std::vector<PlanePoint> pts;
    std::vector<std::size_t> where;
    pts.reserve(static_cast<std::size_t>(mesh.nx) + 2 * mesh.ny);
    for (int j = 0; j < mesh.ny; ++j) {
        for (int i = 0; i < mesh.nx; ++i) {
            if (!mesh.is_dirichlet(i, j)) continue;
            pts.emplace_back(mesh.x1(i) - tau, mesh.x2(j));
            where.push_back(mesh.idx(i, j));
        }
    }
    std::vector<double> vals(pts.size());
    eval_expansion_batch(e, pts.data(), vals.data(), pts.size());

    LcpSystem sys;
    sys.mesh = mesh;
    sys.boundary.assign(mesh.node_count(), 0.0);
    double scale = 0.0;
    for (std::size_t t = 0; t < where.size(); ++t) {
        sys.boundary[where[t]] = vals[t];
        scale = std::max(scale, std::fabs(vals[t]));
    }
    sys.scale = scale;
    return sys;
}

}  // namespace

LcpSystem assemble(const InfinityDatum& d, const Mesh& mesh) {
    LcpSystem sys = assemble_expansion_boundary(mesh, d.expansion(), 0.0);
    sys.k = d.k;
    sys.a = d.a;
    sys.mode = BoundaryMode::datum;
    return sys;
}

LcpSystem assemble_enriched(const InfinityDatum& d, const Mesh& mesh,
                            const std::vector<double>& b) {
    SlitExpansion e = d.expansion();
    for (std::size_t j = 1; j <= b.size(); ++j) e.add_term(-static_cast<int>(j), b[j - 1]);
    LcpSystem sys = assemble_expansion_boundary(mesh, e, 0.0);
    sys.k = d.k;
    sys.a = d.a;
    sys.mode = BoundaryMode::enriched;
    sys.enrich_b = b;
    return sys;
}

LcpSystem assemble_exact(const InfinityDatum& d, const Mesh& mesh, const SlitExpansion& exact,
                         double tau) {
    LcpSystem sys = assemble_expansion_boundary(mesh, exact, tau);
    sys.k = d.k;
    sys.a = d.a;
    sys.mode = BoundaryMode::exact;
    return sys;
}

LcpSystem assemble_custom(const Mesh& mesh,
                          const std::function<double(double, double)>& boundary_value) {
    return assemble_with(mesh, boundary_value);
}

namespace {

// One lexicographic projected SOR sweep: thin row first, then interior rows
// bottom to top, each left to right. This order is the reference the
// determinism contract pins down.
void psor_sweep_lex(double* v, int nx, int ny, double omega) {
    for (int i = 1; i <= nx - 2; ++i) {
        const double gs = ((v[i - 1] + v[i + 1]) + 2.0 * v[nx + i]) * 0.25;
        const double nv = v[i] + omega * (gs - v[i]);
        v[i] = nv > 0.0 ? nv : 0.0;
    }
    for (int j = 1; j <= ny - 2; ++j) {
        double* row = v + static_cast<std::size_t>(j) * nx;
        for (int i = 1; i <= nx - 2; ++i) {
            const double gs = ((row[i - 1] + row[i + 1]) + (row[i - nx] + row[i + nx])) * 0.25;
            row[i] = row[i] + omega * (gs - row[i]);
        }
    }
}

// Same sweep without the thin-row projection: plain SOR for the Dirichlet
// comparator problems.
void sor_sweep_lex_unconstrained(double* v, int nx, int ny, double omega) {
    for (int i = 1; i <= nx - 2; ++i) {
        const double gs = ((v[i - 1] + v[i + 1]) + 2.0 * v[nx + i]) * 0.25;
        v[i] = v[i] + omega * (gs - v[i]);
    }
    for (int j = 1; j <= ny - 2; ++j) {
        double* row = v + static_cast<std::size_t>(j) * nx;
        for (int i = 1; i <= nx - 2; ++i) {
            const double gs = ((row[i - 1] + row[i + 1]) + (row[i - nx] + row[i + nx])) * 0.25;
            row[i] = row[i] + omega * (gs - row[i]);
        }
    }
}

// max |laplacian| over thin-line nodes, even-reflection stencil.
double residual_thin_unconstrained(const double* v, int nx, double inv_h2) {
    double worst = 0.0;
    for (int i = 1; i <= nx - 2; ++i) {
        const double lap = ((v[i - 1] + v[i + 1]) + 2.0 * v[nx + i] - 4.0 * v[i]) * inv_h2;
        worst = std::max(worst, std::fabs(lap));
    }
    return worst;
}

}  // namespace

DiscreteSolution solve_psor(const LcpSystem& sys, const SolveOptions& opt) {
    return solve_psor(sys, opt, std::vector<double>(sys.mesh.node_count(), 0.0));
}

DiscreteSolution solve_psor(const LcpSystem& sys, const SolveOptions& opt,
                            const std::vector<double>& initial) {
    const Mesh& mesh = sys.mesh;
    if (initial.size() != mesh.node_count()) {
        throw MeshError("initial iterate has wrong size");
    }
    if (!(opt.omega > 0.0 && opt.omega < 2.0)) throw ConfigError("omega", "must lie in (0, 2)");
    if (!(opt.tol > 0.0)) throw ConfigError("tol", "must be positive");
    const bool redblack = sys.constrained && opt.variant == "redblack";
    if (opt.variant != "redblack" && opt.variant != "lex") {
        throw ConfigError("variant", "must be lex or redblack");
    }
    const simd::KernelTable* tbl = simd::select_kernels(opt.simd.c_str());
    if (tbl == nullptr) throw ConfigError("simd", "'" + opt.simd + "' is not available here");

    DiscreteSolution sol;
    sol.mesh = mesh;
    sol.values = initial;
    sol.k = sys.k;
    sol.a = sys.a;
    sol.mode = sys.mode;
    sol.enrich_b = sys.enrich_b;
    sol.variant = redblack ? "redblack" : "lex";
    sol.kernel = sys.constrained ? tbl->name : "scalar";

    // Dirichlet values are imposed on the iterate and never touched by sweeps.
    for (int j = 0; j < mesh.ny; ++j) {
        for (int i = 0; i < mesh.nx; ++i) {
            if (mesh.is_dirichlet(i, j)) sol.values[mesh.idx(i, j)] = sys.boundary[mesh.idx(i, j)];
        }
    }

    const long n = mesh.ny - 1;
    const long max_iter = opt.max_iter > 0 ? opt.max_iter : 200 * n;
    const long check_every = opt.check_every > 0 ? opt.check_every : 16;
    const double scale = sys.scale > 0.0 ? sys.scale : 1.0;
    sol.scale = sys.scale;
    const double inv_h2 = 1.0 / (mesh.h * mesh.h);

    double* v = sol.values.data();
    long iter = 0;
    bool converged = false;
    double residual = 0.0;
    while (iter < max_iter) {
        if (redblack) {
            tbl->psor_sweep_rb(v, mesh.nx, mesh.ny, opt.omega, 0);
            tbl->psor_sweep_rb(v, mesh.nx, mesh.ny, opt.omega, 1);
        } else if (sys.constrained) {
            psor_sweep_lex(v, mesh.nx, mesh.ny, opt.omega);
        } else {
            sor_sweep_lex_unconstrained(v, mesh.nx, mesh.ny, opt.omega);
        }
        ++iter;
        if (iter % check_every == 0 || iter == max_iter) {
            const double rt = sys.constrained
                                  ? tbl->residual_thin(v, mesh.nx, inv_h2)
                                  : residual_thin_unconstrained(v, mesh.nx, inv_h2);
            const double ri = tbl->residual_interior(v, mesh.nx, mesh.ny, inv_h2);
            residual = rt > ri ? rt : ri;
            if (residual <= opt.tol * scale) {
                converged = true;
                break;
            }
        }
    }
    sol.iterations = iter;
    sol.residual = residual;
    sol.converged = converged;

    // Projection clamps contact values to exactly 0, so the zero set of the
    // thin row is the discrete contact set.
    sol.active.assign(static_cast<std::size_t>(mesh.nx), 0);
    if (sys.constrained) {
        for (int i = 1; i <= mesh.nx - 2; ++i) {
            sol.active[static_cast<std::size_t>(i)] = v[i] == 0.0 ? 1 : 0;
        }
    }
    return sol;
}

ContactReport contact_set(const DiscreteSolution& sol) {
    const Mesh& mesh = sol.mesh;
    ContactReport report;
    int run_start = -1;
    for (int i = 1; i <= mesh.nx - 1; ++i) {
        const bool active = i <= mesh.nx - 2 && sol.active[static_cast<std::size_t>(i)] != 0;
        if (active && run_start < 0) run_start = i;
        if (!active && run_start >= 0) {
            ContactInterval iv;
            iv.i_left = run_start;
            iv.i_right = i - 1;
            iv.left = mesh.x1(run_start);
            iv.right = mesh.x1(i - 1);
            report.intervals.push_back(iv);
            run_start = -1;
        }
    }
    report.touches_left_edge = !report.intervals.empty() && report.intervals.front().i_left == 1;
    if (report.touches_left_edge) {
        // The origin-centered expansion converges outside the circle through
        // the closure endpoint, wherever it sits on the line.
        report.M_emp = std::fabs(report.intervals.front().right);
    } else {
        report.M_emp = mesh.L;  // contact never closes inside the mesh
    }
    return report;
}

double discrete_energy(const Mesh& mesh, const std::vector<double>& v) {
    double e = 0.0;
    // Thin-row horizontal edges carry half weight (the even reflection shares
    // them between the two half-planes); everything else has weight one.
    for (int i = 0; i <= mesh.nx - 2; ++i) {
        const double d = v[mesh.idx(i + 1, 0)] - v[mesh.idx(i, 0)];
        e += 0.5 * d * d;
    }
    for (int j = 1; j <= mesh.ny - 1; ++j) {
        for (int i = 0; i <= mesh.nx - 2; ++i) {
            const double d = v[mesh.idx(i + 1, j)] - v[mesh.idx(i, j)];
            e += d * d;
        }
    }
    for (int j = 0; j <= mesh.ny - 2; ++j) {
        for (int i = 0; i <= mesh.nx - 1; ++i) {
            const double d = v[mesh.idx(i, j + 1)] - v[mesh.idx(i, j)];
            e += d * d;
        }
    }
    return e;
}

RefinementResult solve_with_expansion_refinement(const InfinityDatum& d, const Mesh& mesh, int N,
                                                 int rounds, const SolveOptions& opt,
                                                 const std::vector<double>& radii, int ntheta) {
    if (rounds < 1) throw ConfigError("rounds", "must be at least 1");
    if (N < 1) throw ConfigError("N", "must be at least 1");

    RefinementResult out;
    LcpSystem sys = assemble(d, mesh);
    out.solution = solve_psor(sys, opt);
    out.b_rounds.push_back(extract_b(out.solution, radii, N, ntheta).b);
    for (int r = 2; r <= rounds; ++r) {
        sys = assemble_enriched(d, mesh, out.b_rounds.back());
        out.solution = solve_psor(sys, opt, out.solution.values);
        out.b_rounds.push_back(extract_b(out.solution, radii, N, ntheta).b);
    }
    return out;
}

}  // namespace slitstone
