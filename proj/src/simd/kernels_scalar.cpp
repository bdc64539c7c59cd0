// Scalar reference kernels. Loop bodies mirror the AVX2 variants operation by
// operation (same association, no FMA) so paired kernels agree bitwise.

#include <cmath>
#include <cstddef>

#include "slitstone/simd/kernels.hpp"

namespace slitstone::simd {

namespace {

void expansion_eval_scalar(const double* rho, const double* clo, const double* clom1,
                           const double* twocos, const double* r, std::size_t n,
                           const double* coef, std::size_t ncoef, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        double cm1 = clom1[i];
        double c = clo[i];
        double rh = rho[i];
        const double tc = twocos[i];
        const double ri = r[i];
        for (std::size_t j = 0; j < ncoef; ++j) {
            acc = acc + (coef[j] * rh) * c;
            const double cn = tc * c - cm1;
            cm1 = c;
            c = cn;
            rh = rh * ri;
        }
        out[i] = acc;
    }
}

inline double rb_update_thin(const double* v, int nx, int i, double omega) {
    const double gs = ((v[i - 1] + v[i + 1]) + 2.0 * v[nx + i]) * 0.25;
    const double nv = v[i] + omega * (gs - v[i]);
    return nv > 0.0 ? nv : 0.0;
}

inline double rb_update_interior(const double* v, int nx, std::size_t c, double omega) {
    const double gs = ((v[c - 1] + v[c + 1]) + (v[c - nx] + v[c + nx])) * 0.25;
    return v[c] + omega * (gs - v[c]);
}

void psor_sweep_rb_scalar(double* v, int nx, int ny, double omega, int color) {
    {
        const int i0 = (color % 2 == 0) ? 2 : 1;
        for (int i = i0; i <= nx - 2; i += 2) v[i] = rb_update_thin(v, nx, i, omega);
    }
    for (int j = 1; j <= ny - 2; ++j) {
        const int parity = (color ^ j) & 1;
        const int i0 = (parity == 0) ? 2 : 1;
        const std::size_t row = static_cast<std::size_t>(j) * nx;
        for (int i = i0; i <= nx - 2; i += 2) {
            const std::size_t c = row + i;
            v[c] = rb_update_interior(v, nx, c, omega);
        }
    }
}

double residual_interior_scalar(const double* v, int nx, int ny, double inv_h2) {
    double acc = 0.0;
    for (int j = 1; j <= ny - 2; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * nx;
        for (int i = 1; i <= nx - 2; ++i) {
            const std::size_t c = row + i;
            const double lap =
                ((v[c - 1] + v[c + 1]) + (v[c - nx] + v[c + nx]) - 4.0 * v[c]) * inv_h2;
            const double a = std::fabs(lap);
            acc = a > acc ? a : acc;
        }
    }
    return acc;
}

double residual_thin_scalar(const double* v, int nx, double inv_h2) {
    double acc = 0.0;
    for (int i = 1; i <= nx - 2; ++i) {
        const double lap = ((v[i - 1] + v[i + 1]) + 2.0 * v[nx + i] - 4.0 * v[i]) * inv_h2;
        const double neg = -lap;
        const double m = v[i] < neg ? v[i] : neg;
        const double a = std::fabs(m);
        acc = a > acc ? a : acc;
    }
    return acc;
}

double dot_blocked_scalar(const double* a, const double* b, std::size_t n) {
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    const std::size_t n4 = n - (n % 4);
    for (std::size_t i = 0; i < n4; i += 4) {
        acc0 = acc0 + a[i] * b[i];
        acc1 = acc1 + a[i + 1] * b[i + 1];
        acc2 = acc2 + a[i + 2] * b[i + 2];
        acc3 = acc3 + a[i + 3] * b[i + 3];
    }
    double lane[4] = {acc0, acc1, acc2, acc3};
    for (std::size_t i = n4; i < n; ++i) lane[i - n4] = lane[i - n4] + a[i] * b[i];
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{
        "scalar",          expansion_eval_scalar, psor_sweep_rb_scalar,
        residual_interior_scalar, residual_thin_scalar, dot_blocked_scalar,
    };
    return table;
}

}  // namespace slitstone::simd
