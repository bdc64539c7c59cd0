// AVX2 kernel variants. Compiled with -mavx2 (no FMA: contraction would break
// bit-equivalence with the scalar reference). Each loop body keeps the exact
// operation tree of its scalar counterpart; remainders fall back to the same
// per-element code.

#include <cmath>
#include <cstddef>

#include "slitstone/simd/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

namespace slitstone::simd {

namespace {

// [x0 x2 x1 x3]: undoes the half-interleave of unpacklo/unpackhi.
constexpr int kFix = _MM_SHUFFLE(3, 1, 2, 0);

void expansion_eval_avx2(const double* rho, const double* clo, const double* clom1,
                         const double* twocos, const double* r, std::size_t n, const double* coef,
                         std::size_t ncoef, double* out) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        __m256d cm1 = _mm256_loadu_pd(clom1 + i);
        __m256d c = _mm256_loadu_pd(clo + i);
        __m256d rh = _mm256_loadu_pd(rho + i);
        const __m256d tc = _mm256_loadu_pd(twocos + i);
        const __m256d ri = _mm256_loadu_pd(r + i);
        for (std::size_t j = 0; j < ncoef; ++j) {
            const __m256d cj = _mm256_set1_pd(coef[j]);
            acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_mul_pd(cj, rh), c));
            const __m256d cn = _mm256_sub_pd(_mm256_mul_pd(tc, c), cm1);
            cm1 = c;
            c = cn;
            rh = _mm256_mul_pd(rh, ri);
        }
        _mm256_storeu_pd(out + i, acc);
    }
    for (; i < n; ++i) {
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

// Even lanes of two adjacent loads: [p0 p2 p4 p6] for p = &v[at].
inline __m256d load_stride2(const double* p) {
    const __m256d a = _mm256_loadu_pd(p);
    const __m256d b = _mm256_loadu_pd(p + 4);
    return _mm256_permute4x64_pd(_mm256_unpacklo_pd(a, b), kFix);
}

void psor_sweep_rb_avx2(double* v, int nx, int ny, double omega, int color) {
    const __m256d vomega = _mm256_set1_pd(omega);
    const __m256d quarter = _mm256_set1_pd(0.25);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d zero = _mm256_setzero_pd();

    for (int j = 0; j <= ny - 2; ++j) {
        const int parity = (color ^ j) & 1;
        const int i0 = (parity == 0) ? 2 : 1;
        const bool thin = j == 0;
        double* row = v + static_cast<std::size_t>(j) * nx;
        int i = i0;
        for (; i + 6 <= nx - 2; i += 8) {
            const __m256d a = _mm256_loadu_pd(row + i);
            const __m256d b = _mm256_loadu_pd(row + i + 4);
            const __m256d odds = _mm256_unpackhi_pd(a, b);  // [a1 b1 a3 b3]
            const __m256d t = _mm256_permute4x64_pd(_mm256_unpacklo_pd(a, b), kFix);
            const __m256d rgt = _mm256_permute4x64_pd(odds, kFix);
            const __m256d lft = load_stride2(row + i - 1);
            const __m256d up = load_stride2(row + nx + i);

            __m256d gs;
            if (thin) {
                gs = _mm256_mul_pd(
                    _mm256_add_pd(_mm256_add_pd(lft, rgt), _mm256_mul_pd(two, up)), quarter);
            } else {
                const __m256d dn = load_stride2(row - nx + i);
                gs = _mm256_mul_pd(_mm256_add_pd(_mm256_add_pd(lft, rgt), _mm256_add_pd(dn, up)),
                                   quarter);
            }
            __m256d nv = _mm256_add_pd(t, _mm256_mul_pd(vomega, _mm256_sub_pd(gs, t)));
            if (thin) nv = _mm256_max_pd(nv, zero);

            // Re-interleave the updated targets with the untouched odd lanes.
            const __m256d xa = _mm256_permute4x64_pd(nv, _MM_SHUFFLE(1, 1, 0, 0));
            const __m256d ya = _mm256_permute4x64_pd(odds, _MM_SHUFFLE(2, 2, 0, 0));
            const __m256d xb = _mm256_permute4x64_pd(nv, _MM_SHUFFLE(3, 3, 2, 2));
            const __m256d yb = _mm256_permute4x64_pd(odds, _MM_SHUFFLE(3, 3, 1, 1));
            _mm256_storeu_pd(row + i, _mm256_unpacklo_pd(xa, ya));
            _mm256_storeu_pd(row + i + 4, _mm256_unpacklo_pd(xb, yb));
        }
        if (thin) {
            for (; i <= nx - 2; i += 2) row[i] = rb_update_thin(v, nx, i, omega);
        } else {
            const std::size_t base = static_cast<std::size_t>(j) * nx;
            for (; i <= nx - 2; i += 2) {
                const std::size_t c = base + i;
                v[c] = rb_update_interior(v, nx, c, omega);
            }
        }
    }
}

inline double hmax(__m256d x) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, x);
    const double m0 = lane[0] > lane[1] ? lane[0] : lane[1];
    const double m1 = lane[2] > lane[3] ? lane[2] : lane[3];
    return m0 > m1 ? m0 : m1;
}

inline __m256d vabs(__m256d x) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

double residual_interior_avx2(const double* v, int nx, int ny, double inv_h2) {
    const __m256d vinv = _mm256_set1_pd(inv_h2);
    const __m256d four = _mm256_set1_pd(4.0);
    __m256d vacc = _mm256_setzero_pd();
    double acc = 0.0;
    for (int j = 1; j <= ny - 2; ++j) {
        const double* row = v + static_cast<std::size_t>(j) * nx;
        int i = 1;
        for (; i + 3 <= nx - 2; i += 4) {
            const __m256d c = _mm256_loadu_pd(row + i);
            const __m256d l = _mm256_loadu_pd(row + i - 1);
            const __m256d r = _mm256_loadu_pd(row + i + 1);
            const __m256d dn = _mm256_loadu_pd(row + i - nx);
            const __m256d up = _mm256_loadu_pd(row + i + nx);
            const __m256d lap = _mm256_mul_pd(
                _mm256_sub_pd(_mm256_add_pd(_mm256_add_pd(l, r), _mm256_add_pd(dn, up)),
                              _mm256_mul_pd(four, c)),
                vinv);
            vacc = _mm256_max_pd(vacc, vabs(lap));
        }
        for (; i <= nx - 2; ++i) {
            const double lap =
                ((row[i - 1] + row[i + 1]) + (row[i - nx] + row[i + nx]) - 4.0 * row[i]) * inv_h2;
            const double a = std::fabs(lap);
            acc = a > acc ? a : acc;
        }
    }
    const double vm = hmax(vacc);
    return vm > acc ? vm : acc;
}

double residual_thin_avx2(const double* v, int nx, double inv_h2) {
    const __m256d vinv = _mm256_set1_pd(inv_h2);
    const __m256d four = _mm256_set1_pd(4.0);
    const __m256d two = _mm256_set1_pd(2.0);
    __m256d vacc = _mm256_setzero_pd();
    double acc = 0.0;
    int i = 1;
    for (; i + 3 <= nx - 2; i += 4) {
        const __m256d c = _mm256_loadu_pd(v + i);
        const __m256d l = _mm256_loadu_pd(v + i - 1);
        const __m256d r = _mm256_loadu_pd(v + i + 1);
        const __m256d up = _mm256_loadu_pd(v + i + nx);
        const __m256d lap = _mm256_mul_pd(
            _mm256_sub_pd(_mm256_add_pd(_mm256_add_pd(l, r), _mm256_mul_pd(two, up)),
                          _mm256_mul_pd(four, c)),
            vinv);
        const __m256d m = _mm256_min_pd(c, _mm256_sub_pd(_mm256_setzero_pd(), lap));
        vacc = _mm256_max_pd(vacc, vabs(m));
    }
    for (; i <= nx - 2; ++i) {
        const double lap = ((v[i - 1] + v[i + 1]) + 2.0 * v[nx + i] - 4.0 * v[i]) * inv_h2;
        const double neg = -lap;
        const double m = v[i] < neg ? v[i] : neg;
        const double a = std::fabs(m);
        acc = a > acc ? a : acc;
    }
    const double vm = hmax(vacc);
    return vm > acc ? vm : acc;
}

double dot_blocked_avx2(const double* a, const double* b, std::size_t n) {
    __m256d vacc = _mm256_setzero_pd();
    const std::size_t n4 = n - (n % 4);
    for (std::size_t i = 0; i < n4; i += 4) {
        vacc = _mm256_add_pd(vacc,
                             _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, vacc);
    for (std::size_t i = n4; i < n; ++i) lane[i - n4] = lane[i - n4] + a[i] * b[i];
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace

const KernelTable* avx2_kernels() {
    static const KernelTable table{
        "avx2",          expansion_eval_avx2, psor_sweep_rb_avx2,
        residual_interior_avx2, residual_thin_avx2, dot_blocked_avx2,
    };
    return &table;
}

}  // namespace slitstone::simd

#else  // !__AVX2__

namespace slitstone::simd {
const KernelTable* avx2_kernels() { return nullptr; }
}  // namespace slitstone::simd

#endif
