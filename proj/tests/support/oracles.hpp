#pragma once

// Reference computations the tests compare library results against. Each is
// assembled from defining formulas only, never from the code paths under
// test.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "slitstone/slit_basis.hpp"

namespace oracle {

// |got - want| <= abs_tol + rel_tol * |want|.
inline bool near(double got, double want, double abs_tol, double rel_tol = 0.0) {
    return std::fabs(got - want) <= abs_tol + rel_tol * std::fabs(want);
}

// Deterministic uniform draws (splitmix64), identical on every platform.
struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        s += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    int integer(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

// Gradient of Re z^(m+1/2) through the principal-branch complex derivative:
// (d/dz) z^s = s z^(s-1) and grad Re f = (Re f', -Im f'). The principal log
// carries arg in (-pi, pi], the same branch the basis uses.
inline std::array<double, 2> grad_complex(int m, double x1, double x2) {
    const double s = m + 0.5;
    const std::complex<double> z(x1, x2);
    const std::complex<double> d = s * std::pow(z, std::complex<double>(s - 1.0, 0.0));
    return {d.real(), -d.imag()};
}

// Central finite differences of eval_u with step h.
inline std::array<double, 2> grad_fd(int m, double x1, double x2, double h) {
    using slitstone::PlanePoint;
    using slitstone::eval_u;
    return {(eval_u(m, PlanePoint(x1 + h, x2)) - eval_u(m, PlanePoint(x1 - h, x2))) / (2.0 * h),
            (eval_u(m, PlanePoint(x1, x2 + h)) - eval_u(m, PlanePoint(x1, x2 - h))) / (2.0 * h)};
}

// Five-point discrete Laplacian of u_{m+1/2} at an off-slit point.
inline double laplace5(int m, double x1, double x2, double h) {
    using slitstone::PlanePoint;
    using slitstone::eval_u;
    return (eval_u(m, PlanePoint(x1 + h, x2)) + eval_u(m, PlanePoint(x1 - h, x2)) +
            eval_u(m, PlanePoint(x1, x2 + h)) + eval_u(m, PlanePoint(x1, x2 - h)) -
            4.0 * eval_u(m, PlanePoint(x1, x2))) /
           (h * h);
}

// Coefficient of u_{m-j+1/2} in the Taylor series of u_{m+1/2}(x1 + sigma, x2):
// sigma^j / j! times the falling product (m+1/2)(m-1/2)...(m+1/2-j+1).
inline double translate_coeff(int m, int j, double sigma) {
    double c = 1.0;
    for (int i = 0; i < j; ++i) c *= (m + 0.5 - i) * sigma / (i + 1);
    return c;
}

// Coefficient at index m_out of the shifted expansion e(x1 + sigma, x2),
// e given by u-basis terms keyed by index.
inline double shift_coeff(const std::map<int, double>& terms, int m_out, double sigma) {
    double c = 0.0;
    for (const auto& [m, cm] : terms) {
        if (m >= m_out) c += cm * translate_coeff(m, m - m_out, sigma);
    }
    return c;
}

// Tail coefficient b_j (the u_{1/2-j} term) of the right-shifted expansion
// e(x1 - tau, x2).
inline double shifted_tail_coeff(const std::map<int, double>& terms, int j, double tau) {
    return shift_coeff(terms, -j, -tau);
}

// Datum coefficient a_l of the right-shifted expansion e(x1 - tau, x2) with
// leading index 2k-1.
inline double shifted_datum_coeff(const std::map<int, double>& terms, int k, int l, double tau) {
    return shift_coeff(terms, 2 * k - 1 - l, -tau);
}

struct SignSample {
    bool nonneg = true;
    double min_rel = 0.0;  // most negative relative sample value (0 when none sampled)
};

namespace detail {

// min over log-spaced r in [rmin, rmax] of p(r) / sum_i |c_i| r^i for the
// polynomial with ascending coefficients c.
inline SignSample sample_poly(const std::vector<double>& c, int n, double rmin, double rmax) {
    SignSample out;
    out.min_rel = 1e300;
    const double lr0 = std::log(rmin);
    const double dlr = (std::log(rmax) - lr0) / (n - 1);
    for (int i = 0; i < n; ++i) {
        const double r = std::exp(lr0 + i * dlr);
        double v = 0.0;
        double s = 0.0;
        for (std::size_t d = c.size(); d-- > 0;) {
            v = v * r + c[d];
            s = s * r + std::fabs(c[d]);
        }
        const double rel = s > 0.0 ? v / s : 0.0;
        if (rel < out.min_rel) out.min_rel = rel;
    }
    if (out.min_rel == 1e300) out.min_rel = 0.0;
    out.nonneg = out.min_rel >= 0.0;
    return out;
}

}  // namespace detail

// Trace sign condition of the profile q = u_{2k-1/2} + sum alpha_l u_{2k-1/2-l}
// on the positive axis: q(r, 0) = sqrt(r) * (r^{2k-1} + sum alpha_l r^{2k-1-l}).
inline SignSample sample_trace(int k, const std::vector<double>& alpha, int n, double rmin,
                               double rmax) {
    std::vector<double> c(static_cast<std::size_t>(2 * k), 0.0);
    c[static_cast<std::size_t>(2 * k - 1)] = 1.0;
    for (std::size_t l = 1; l < static_cast<std::size_t>(2 * k - 1) && l <= alpha.size(); ++l) {
        c[static_cast<std::size_t>(2 * k - 1) - l] = alpha[l - 1];
    }
    return detail::sample_poly(c, n, rmin, rmax);
}

// Slit sign condition: -d/dx2 of the profile on theta = pi. Termwise, from
// the gradient formula at theta = pi,
//   -d/dx2 u_{m+1/2} = (m+1/2) (-1)^{m+1} r^{m-1/2},
// so with m = 2k-1-l the condition is
//   sum_l alpha_l (2k-1/2-l) (-1)^l r^{2k-2-l} >= 0   (alpha_0 = 1).
inline SignSample sample_slit(int k, const std::vector<double>& alpha, int n, double rmin,
                              double rmax) {
    std::vector<double> c(static_cast<std::size_t>(2 * k - 1), 0.0);
    for (int l = 0; l <= 2 * k - 2; ++l) {
        const double al = l == 0 ? 1.0 : (static_cast<std::size_t>(l) <= alpha.size()
                                              ? alpha[static_cast<std::size_t>(l - 1)]
                                              : 0.0);
        const double sign = (l % 2 == 0) ? 1.0 : -1.0;
        c[static_cast<std::size_t>(2 * k - 2 - l)] = sign * al * (2.0 * k - 0.5 - l);
    }
    return detail::sample_poly(c, n, rmin, rmax);
}

// Both conditions together; nonneg mirrors the admissibility verdict.
inline SignSample sample_admissible(int k, const std::vector<double>& alpha, int n = 200000,
                                    double rmin = 1e-6, double rmax = 1e3) {
    const SignSample t = sample_trace(k, alpha, n, rmin, rmax);
    const SignSample s = sample_slit(k, alpha, n, rmin, rmax);
    SignSample out;
    out.min_rel = std::min(t.min_rel, s.min_rel);
    out.nonneg = out.min_rel >= 0.0;
    return out;
}

}  // namespace oracle
