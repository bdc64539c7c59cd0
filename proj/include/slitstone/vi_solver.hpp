#pragma once

// Finite-difference solver for the thin obstacle problem on the half-square
// [-L, L] x [0, L] (even symmetry in x2). The thin line x2 = 0 carries the
// complementarity conditions u >= 0, -Laplace u >= 0, u * Laplace u = 0; the
// discrete system is an LCP solved by projected SOR with a deterministic
// sweep order.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "slitstone/admissibility.hpp"
#include "slitstone/slit_basis.hpp"

namespace slitstone {

struct Mesh {
    double L = 8.0;
    double h = 0.015625;
    int nx = 0;  // 2 * (L/h) + 1 columns, x1 = -L + i h
    int ny = 0;  // L/h + 1 rows,      x2 = j h

    // Validates h > 0, L >= 4, L/h integral.
    static Mesh make(double L, double h);

    double x1(int i) const { return -L + i * h; }
    double x2(int j) const { return j * h; }
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    bool is_dirichlet(int i, int j) const {
        return i == 0 || i == nx - 1 || j == ny - 1;
    }
    bool is_thin(int i, int j) const { return j == 0 && i > 0 && i < nx - 1; }
    std::size_t node_count() const { return static_cast<std::size_t>(nx) * ny; }
};

enum class BoundaryMode { datum, enriched, exact };

const char* to_string(BoundaryMode m);
BoundaryMode boundary_mode_from_string(const std::string& s);

// Assembled discrete problem: mesh plus Dirichlet values (stored on boundary
// nodes of the values vector; every other entry is the zero initial iterate).
struct LcpSystem {
    Mesh mesh;
    std::vector<double> boundary;  // size nx*ny; nonzero only on Dirichlet nodes
    double scale = 0.0;            // max |boundary|
    bool constrained = true;       // false: plain Dirichlet problem, no obstacle

    // Provenance, carried into DiscreteSolution and the solution file.
    int k = 0;
    std::vector<double> a;
    BoundaryMode mode = BoundaryMode::datum;
    std::vector<double> enrich_b;  // enriched mode only
};

// Boundary data variants: the datum p, the enriched p + sum b_j u_{1/2-j},
// or an explicit expansion translated by tau (boundary value e(x1 - tau, x2),
// e.g. an exactly known shifted half-space solution).
LcpSystem assemble(const InfinityDatum& d, const Mesh& mesh);
LcpSystem assemble_enriched(const InfinityDatum& d, const Mesh& mesh,
                            const std::vector<double>& b);
LcpSystem assemble_exact(const InfinityDatum& d, const Mesh& mesh, const SlitExpansion& exact,
                         double tau = 0.0);
// Arbitrary boundary evaluator (tests and diagnostics).
LcpSystem assemble_custom(const Mesh& mesh,
                          const std::function<double(double, double)>& boundary_value);

struct SolveOptions {
    double omega = 1.8;
    double tol = 1e-10;
    long max_iter = 0;            // 0: defaults to 200 * (L/h)
    std::string variant = "lex";  // "lex" | "redblack"
    std::string simd = "auto";    // "auto" | "scalar" | "avx2"
    long check_every = 16;        // residual check cadence, fixed for determinism
};

struct DiscreteSolution {
    Mesh mesh;
    std::vector<double> values;
    std::vector<std::uint8_t> active;  // size nx; 1 where the thin value is exactly 0

    long iterations = 0;
    double residual = 0.0;
    bool converged = false;
    double scale = 0.0;
    std::string variant;
    std::string kernel;

    int k = 0;
    std::vector<double> a;
    BoundaryMode mode = BoundaryMode::datum;
    std::vector<double> enrich_b;

    double value(int i, int j) const { return values[mesh.idx(i, j)]; }
};

// Projected SOR from the given initial iterate (boundary values are imposed
// regardless). Non-convergence is reported through converged = false, with
// the best iterate retained. Systems with constrained = false run plain SOR
// with the scalar lexicographic sweep and an unconstrained thin-row residual;
// they are comparators, not members of the SIMD equivalence contract.
DiscreteSolution solve_psor(const LcpSystem& sys, const SolveOptions& opt);
DiscreteSolution solve_psor(const LcpSystem& sys, const SolveOptions& opt,
                            const std::vector<double>& initial);

struct ContactInterval {
    double left = 0.0;
    double right = 0.0;
    int i_left = 0;
    int i_right = 0;
};

struct ContactReport {
    std::vector<ContactInterval> intervals;  // ordered left to right
    bool touches_left_edge = false;          // contact reaches x1 = -L
    double M_emp = 0.0;  // radius of the circle through the left run's closure
                         // endpoint; L when the contact never closes
};

ContactReport contact_set(const DiscreteSolution& sol);

// Discrete Dirichlet energy of the even reflection (thin-row horizontal edges
// carry weight 1/2); decreases monotonically along PSOR sweeps.
double discrete_energy(const Mesh& mesh, const std::vector<double>& v);

struct RefinementResult {
    DiscreteSolution solution;
    std::vector<std::vector<double>> b_rounds;  // extracted b after each round
};

// Round 1 solves with datum boundary data; each later round re-extracts
// b_1..b_N on the given radii and re-solves with the enriched boundary,
// warm-started from the previous iterate.
RefinementResult solve_with_expansion_refinement(const InfinityDatum& d, const Mesh& mesh, int N,
                                                 int rounds, const SolveOptions& opt,
                                                 const std::vector<double>& radii,
                                                 int ntheta = 4096);

}  // namespace slitstone
