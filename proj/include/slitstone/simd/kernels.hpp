#pragma once

// Compute kernels with scalar reference implementations and AVX2 variants,
// selected at runtime. The scalar kernels are written with the same blocking
// and the same per-element operation trees as the vector code, so paired
// kernels produce bit-identical results (FMA contraction is disabled
// project-wide):
//   - expansion_eval: per-lane recurrence, bitwise equal,
//   - psor_sweep_rb:  nodes of one color are independent, bitwise equal,
//   - residual_*:     max-reductions are order-independent, bitwise equal,
//   - dot_blocked:    fixed 4-accumulator tree in both, bitwise equal.
// The lexicographic PSOR sweep is scalar only: its loop-carried dependence is
// the reference ordering of the determinism contract.

#include <cstddef>

namespace slitstone::simd {

// Evaluates, at n points, the expansion with dense coefficients coef[0..ncoef)
// for consecutive indices m = m_min..m_min+ncoef-1, given per-point seeds
//   rho[i]    = r_i^(m_min + 1/2)
//   clo[i]    = cos((m_min + 1/2) theta_i)
//   clom1[i]  = cos((m_min - 1/2) theta_i)
//   twocos[i] = 2 cos(theta_i)
// using the upward three-term recurrence c_{m+1} = twocos * c_m - c_{m-1}.
using ExpansionEvalFn = void (*)(const double* rho, const double* clo, const double* clom1,
                                 const double* twocos, const double* r, std::size_t n,
                                 const double* coef, std::size_t ncoef, double* out);

// One red-black half-sweep of projected SOR on the half-square grid
// (nx columns, ny rows, row-major, row 0 is the thin line). Updates nodes
// with (i + j) % 2 == color. Thin-line nodes use the even-reflection stencil
// and are projected onto v >= 0.
using PsorRbFn = void (*)(double* v, int nx, int ny, double omega, int color);

// max_i |((l + r) + (dn + up) - 4c)| * inv_h2 over interior nodes.
using ResidualInteriorFn = double (*)(const double* v, int nx, int ny, double inv_h2);

// max_i |min(c, -((l + r) + 2 up - 4c) * inv_h2)| over thin-line nodes.
using ResidualThinFn = double (*)(const double* v, int nx, double inv_h2);

// Dot product with a fixed 4-lane accumulator tree.
using DotBlockedFn = double (*)(const double* a, const double* b, std::size_t n);

struct KernelTable {
    const char* name;
    ExpansionEvalFn expansion_eval;
    PsorRbFn psor_sweep_rb;
    ResidualInteriorFn residual_interior;
    ResidualThinFn residual_thin;
    DotBlockedFn dot_blocked;
};

const KernelTable& scalar_kernels();
const KernelTable* avx2_kernels();  // nullptr when not compiled in
bool avx2_available();              // compiled in and supported by this CPU

// "auto" picks AVX2 when available, otherwise scalar; "scalar"/"avx2" force a
// table (nullptr if the forced table cannot run here).
const KernelTable* select_kernels(const char* name);
const KernelTable& kernels();  // select_kernels("auto")

}  // namespace slitstone::simd
