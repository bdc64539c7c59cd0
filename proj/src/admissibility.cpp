#include "slitstone/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "slitstone/errors.hpp"

namespace slitstone {

namespace {

void check_shape(const char* what, int k, const std::vector<double>& v, int expected) {
    if (k < 1) throw LengthMismatch(std::string(what) + ": k must be >= 1");
    if (v.size() != static_cast<std::size_t>(expected)) {
        throw LengthMismatch(std::string(what) + ": expected " + std::to_string(expected) +
                             " coefficients, got " + std::to_string(v.size()));
    }
    for (double c : v) {
        if (!std::isfinite(c)) throw CoefficientOutOfRange(std::string(what) + ": non-finite coefficient");
    }
}

}  // namespace

SlitExpansion InfinityDatum::expansion() const {
    SlitExpansion e;
    e.set_term(2 * k - 1, 1.0);
    for (std::size_t l = 1; l <= a.size(); ++l) e.set_term(2 * k - 1 - static_cast<int>(l), a[l - 1]);
    return e;
}

InfinityDatum make_datum(int k, const std::vector<double>& a) {
    check_shape("datum a", k, a, 2 * k - 1);
    InfinityDatum d;
    d.k = k;
    d.a = a;
    const auto c = u_to_w_coeffs(k);
    d.a_tilde.resize(a.size());
    for (std::size_t l = 1; l <= a.size(); ++l) {
        d.a_tilde[l - 1] = a[l - 1] / c[static_cast<std::size_t>(2 * k) - l];
    }
    return d;
}

InfinityDatum validate_datum(int k, const std::vector<double>& a) {
    for (std::size_t l = 1; l <= a.size(); ++l) {
        if (std::isfinite(a[l - 1]) && std::fabs(a[l - 1]) > 1.0) {
            throw CoefficientOutOfRange("datum a[" + std::to_string(l) + "] = " +
                                        std::to_string(a[l - 1]) + " violates |a_l| <= 1");
        }
    }
    return make_datum(k, a);
}

InfinityDatum conjugate_datum(const InfinityDatum& d) {
    std::vector<double> a = d.a;
    for (std::size_t l = 1; l <= a.size(); ++l) {
        if (l % 2 == 1) a[l - 1] = -a[l - 1];
    }
    // Conjugation preserves magnitudes, so the shape-only constructor keeps
    // whatever gate the input already passed.
    return make_datum(d.k, a);
}

SlitExpansion Profile::expansion() const {
    SlitExpansion e;
    e.set_term(2 * k - 1, 1.0);
    for (std::size_t l = 1; l <= alpha.size(); ++l) {
        e.set_term(2 * k - 1 - static_cast<int>(l), alpha[l - 1]);
    }
    return e;
}

Profile validate_profile(int k, const std::vector<double>& alpha) {
    check_shape("profile alpha", k, alpha, 2 * k - 2);
    return Profile{k, alpha};
}

AdmissibilityCertificate profile_admissible(const Profile& p) {
    const int k = p.k;
    const int n = 2 * k - 2;

    AdmissibilityCertificate cert;
    // trace poly: r^(2k-1) + sum alpha_l r^(2k-1-l), ascending storage
    cert.trace_poly.assign(static_cast<std::size_t>(2 * k), 0.0);
    cert.trace_poly[static_cast<std::size_t>(2 * k - 1)] = 1.0;
    for (int l = 1; l <= n; ++l) cert.trace_poly[static_cast<std::size_t>(2 * k - 1 - l)] = p.alpha[l - 1];

    // slit poly: sum (-1)^l alpha_l (2k - 1/2 - l) r^(2k-2-l), alpha_0 = 1
    cert.slit_poly.assign(static_cast<std::size_t>(2 * k - 1), 0.0);
    cert.slit_poly[static_cast<std::size_t>(2 * k - 2)] = 2 * k - 0.5;
    for (int l = 1; l <= n; ++l) {
        const double sgn = (l % 2 == 0) ? 1.0 : -1.0;
        cert.slit_poly[static_cast<std::size_t>(2 * k - 2 - l)] = sgn * p.alpha[l - 1] * (2 * k - 0.5 - l);
    }

    const auto vt = poly::nonneg_on_positive_axis(cert.trace_poly);
    const auto vs = poly::nonneg_on_positive_axis(cert.slit_poly);
    cert.admissible = vt.nonneg && vs.nonneg;
    cert.zero_margin = cert.admissible && (vt.zero_margin || vs.zero_margin);
    cert.margin = std::min(vt.margin, vs.margin);
    cert.trace_roots = vt.roots;
    cert.slit_roots = vs.roots;
    return cert;
}

namespace {

// min over a sampled circle of Q - p, relative to max |p| there. Q evaluated
// as the exact shifted profile.
double min_gap_on_circle(const SlitExpansion& q, double tau, const SlitExpansion& pexp, double R,
                         int ntheta) {
    constexpr double kPi = std::numbers::pi;
    double min_rel = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    std::vector<double> gap(static_cast<std::size_t>(ntheta) + 1);
    std::vector<double> pv(gap.size());
    for (int t = 0; t <= ntheta; ++t) {
        double theta;
        if (t == ntheta) {
            theta = 0.0;  // the positive axis, where both traces live
        } else {
            theta = -kPi + (t + 0.5) * (2.0 * kPi / ntheta);
        }
        const PlanePoint x(R * std::cos(theta), R * std::sin(theta));
        const PlanePoint shifted(x.x1 + tau, x.x2);
        const double Q = eval_expansion(q, shifted);
        const double P = eval_expansion(pexp, x);
        gap[static_cast<std::size_t>(t)] = Q - P;
        pv[static_cast<std::size_t>(t)] = std::fabs(P);
    }
    for (double v : pv) scale = std::max(scale, v);
    if (scale == 0.0) scale = 1.0;
    for (double g : gap) min_rel = std::min(min_rel, g / scale);
    return min_rel;
}

}  // namespace

BarrierResult barrier(const InfinityDatum& d, double tau, int J) {
    const int k = d.k;
    const int n = 2 * k - 2;
    const auto c = u_to_w_coeffs(k);

    BarrierResult out;
    out.tau = tau;

    // Forward substitution for sum_{j=0}^{i} alpha_{i-j} tau^j / j! = a_tilde_i.
    out.alpha_w.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<double> taupow(static_cast<std::size_t>(n) + 1, 1.0);
    for (int j = 1; j <= n; ++j) taupow[static_cast<std::size_t>(j)] = taupow[static_cast<std::size_t>(j - 1)] * (tau / j);
    for (int i = 1; i <= n; ++i) {
        double s = d.a_tilde[static_cast<std::size_t>(i - 1)];
        for (int j = 1; j <= i; ++j) {
            const double prev = (i - j == 0) ? 1.0 : out.alpha_w[static_cast<std::size_t>(i - j - 1)];
            s -= taupow[static_cast<std::size_t>(j)] * prev;
        }
        out.alpha_w[static_cast<std::size_t>(i - 1)] = s;
    }

    std::vector<double> alpha_u(static_cast<std::size_t>(n));
    for (int l = 1; l <= n; ++l) {
        alpha_u[static_cast<std::size_t>(l - 1)] =
            out.alpha_w[static_cast<std::size_t>(l - 1)] * c[static_cast<std::size_t>(2 * k - l)];
    }
    out.profile = validate_profile(k, alpha_u);
    out.cert = profile_admissible(out.profile);
    out.Q = translate_expansion(out.profile.expansion(), tau, J);
    out.gap_coeff = out.Q.coeff(0) / c[1] - d.a_tilde[static_cast<std::size_t>(2 * k - 2)];

    out.M_est = 0.0;
    if (out.cert.admissible) {
        const SlitExpansion q = out.profile.expansion();
        const SlitExpansion pexp = d.expansion();
        double R = std::max(1.0, 2.0 * std::fabs(tau));
        for (int step = 0; step < 48; ++step) {
            if (min_gap_on_circle(q, tau, pexp, R, 256) >= -1e-12 &&
                min_gap_on_circle(q, tau, pexp, 2.0 * R, 256) >= -1e-12 &&
                min_gap_on_circle(q, tau, pexp, 4.0 * R, 256) >= -1e-12) {
                out.M_est = 2.0 * R;
                break;
            }
            R *= 2.0;
        }
    }
    return out;
}

BarrierResult find_barrier(const InfinityDatum& d, double tau0, double cap, int J) {
    for (double tau = tau0; tau <= cap; tau *= 2.0) {
        BarrierResult b = barrier(d, tau, J);
        if (b.cert.admissible && b.M_est > 0.0) return b;
    }
    throw BarrierSearchExhausted("no admissible translation up to tau = " + std::to_string(cap));
}

double eval_barrier_Q(const BarrierResult& b, const PlanePoint& p) {
    return eval_expansion(b.profile.expansion(), PlanePoint(p.x1 + b.tau, p.x2));
}

}  // namespace slitstone
