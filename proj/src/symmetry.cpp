#include "slitstone/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "slitstone/errors.hpp"

namespace slitstone {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

LineGradient line_gradient(const DiscreteSolution& sol, const ContactReport& contact,
                           double exclusion) {
    const Mesh& m = sol.mesh;
    if (m.ny < 3) throw MeshError("line_gradient needs at least three rows");
    const double ex = exclusion * m.h;

    LineGradient g;
    for (int i = 1; i <= m.nx - 2; ++i) {
        const double t = m.x1(i);
        if (t < -m.L + ex || t > m.L - ex) continue;
        bool near_endpoint = false;
        for (const ContactInterval& iv : contact.intervals) {
            if (std::fabs(t - iv.left) < ex || std::fabs(t - iv.right) < ex) {
                near_endpoint = true;
                break;
            }
        }
        if (near_endpoint) continue;
        g.t.push_back(t);
        g.dx1.push_back((sol.value(i + 1, 0) - sol.value(i - 1, 0)) / (2.0 * m.h));
        g.dx2.push_back((-3.0 * sol.value(i, 0) + 4.0 * sol.value(i, 1) - sol.value(i, 2)) /
                        (2.0 * m.h));
    }
    return g;
}

namespace {

// Multiply a polynomial (ascending coefficients) by (b + a t).
std::vector<double> mul_linear(const std::vector<double>& p, double b, double a) {
    std::vector<double> out(p.size() + 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        out[i] += b * p[i];
        out[i + 1] += a * p[i];
    }
    return out;
}

// Eigenvalue range of a small symmetric matrix by cyclic Jacobi rotations.
std::pair<double, double> sym_eig_range(std::vector<double> g, int n) {
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) off += std::fabs(g[static_cast<std::size_t>(p) * n + q]);
        }
        if (off < 1e-300) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = g[static_cast<std::size_t>(p) * n + q];
                if (apq == 0.0) continue;
                const double app = g[static_cast<std::size_t>(p) * n + p];
                const double aqq = g[static_cast<std::size_t>(q) * n + q];
                const double theta = 0.5 * std::atan2(2.0 * apq, aqq - app);
                const double c = std::cos(theta);
                const double s = std::sin(theta);
                for (int r = 0; r < n; ++r) {
                    const double grp = g[static_cast<std::size_t>(r) * n + p];
                    const double grq = g[static_cast<std::size_t>(r) * n + q];
                    g[static_cast<std::size_t>(r) * n + p] = c * grp - s * grq;
                    g[static_cast<std::size_t>(r) * n + q] = s * grp + c * grq;
                }
                for (int r = 0; r < n; ++r) {
                    const double gpr = g[static_cast<std::size_t>(p) * n + r];
                    const double gqr = g[static_cast<std::size_t>(q) * n + r];
                    g[static_cast<std::size_t>(p) * n + r] = c * gpr - s * gqr;
                    g[static_cast<std::size_t>(q) * n + r] = s * gpr + c * gqr;
                }
            }
        }
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int p = 0; p < n; ++p) {
        lo = std::min(lo, g[static_cast<std::size_t>(p) * n + p]);
        hi = std::max(hi, g[static_cast<std::size_t>(p) * n + p]);
    }
    return {lo, hi};
}

// Gaussian elimination with partial pivoting; a is n x n row-major.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> rhs, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::fabs(a[static_cast<std::size_t>(r) * n + col]) >
                std::fabs(a[static_cast<std::size_t>(piv) * n + col])) {
                piv = r;
            }
        }
        if (a[static_cast<std::size_t>(piv) * n + col] == 0.0) {
            throw IllConditionedFit("singular normal equations");
        }
        if (piv != col) {
            for (int c = 0; c < n; ++c) {
                std::swap(a[static_cast<std::size_t>(piv) * n + c],
                          a[static_cast<std::size_t>(col) * n + c]);
            }
            std::swap(rhs[static_cast<std::size_t>(piv)], rhs[static_cast<std::size_t>(col)]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = a[static_cast<std::size_t>(r) * n + col] /
                             a[static_cast<std::size_t>(col) * n + col];
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) {
                a[static_cast<std::size_t>(r) * n + c] -= f * a[static_cast<std::size_t>(col) * n + c];
            }
            rhs[static_cast<std::size_t>(r)] -= f * rhs[static_cast<std::size_t>(col)];
        }
    }
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = rhs[static_cast<std::size_t>(r)];
        for (int c = r + 1; c < n; ++c) s -= a[static_cast<std::size_t>(r) * n + c] * x[static_cast<std::size_t>(c)];
        x[static_cast<std::size_t>(r)] = s / a[static_cast<std::size_t>(r) * n + r];
    }
    return x;
}

}  // namespace

PFit compute_P(const LineGradient& g, int k) {
    const int ncoef = 4 * k - 2;  // degree 4k-3
    const std::size_t n = g.t.size();
    if (n < static_cast<std::size_t>(ncoef)) {
        throw WindowMismatch("not enough gradient samples for the fit degree");
    }
    const double lo = *std::min_element(g.t.begin(), g.t.end());
    const double hi = *std::max_element(g.t.begin(), g.t.end());
    if (!(hi - lo > 0.0)) throw WindowMismatch("degenerate fit window");

    std::vector<double> y(n);
    for (std::size_t s = 0; s < n; ++s) y[s] = g.dx1[s] * g.dx1[s] - g.dx2[s] * g.dx2[s];

    // Chebyshev design on xi = (2t - (lo+hi)) / (hi-lo); normal equations.
    const double sa = 2.0 / (hi - lo);
    const double sb = -(hi + lo) / (hi - lo);
    std::vector<double> G(static_cast<std::size_t>(ncoef) * ncoef, 0.0);
    std::vector<double> rhs(static_cast<std::size_t>(ncoef), 0.0);
    std::vector<double> row(static_cast<std::size_t>(ncoef));
    for (std::size_t s = 0; s < n; ++s) {
        const double xi = sa * g.t[s] + sb;
        row[0] = 1.0;
        if (ncoef > 1) row[1] = xi;
        for (int m = 2; m < ncoef; ++m) {
            row[static_cast<std::size_t>(m)] =
                2.0 * xi * row[static_cast<std::size_t>(m - 1)] - row[static_cast<std::size_t>(m - 2)];
        }
        for (int i = 0; i < ncoef; ++i) {
            rhs[static_cast<std::size_t>(i)] += row[static_cast<std::size_t>(i)] * y[s];
            for (int j = i; j < ncoef; ++j) {
                G[static_cast<std::size_t>(i) * ncoef + j] +=
                    row[static_cast<std::size_t>(i)] * row[static_cast<std::size_t>(j)];
            }
        }
    }
    for (int i = 0; i < ncoef; ++i) {
        for (int j = 0; j < i; ++j) {
            G[static_cast<std::size_t>(i) * ncoef + j] = G[static_cast<std::size_t>(j) * ncoef + i];
        }
    }

    const auto [emin, emax] = sym_eig_range(G, ncoef);
    PFit fit;
    fit.cond = (emin > 0.0) ? emax / emin : std::numeric_limits<double>::infinity();
    if (!(fit.cond < 1e12)) throw IllConditionedFit("Chebyshev Gram condition exceeds 1e12");

    const std::vector<double> c = solve_dense(G, rhs, ncoef);

    // Chebyshev in xi -> monomial in t.
    std::vector<double> tm2{1.0};          // T_0
    std::vector<double> tm1{sb, sa};       // T_1(xi(t))
    std::vector<double> mono(static_cast<std::size_t>(ncoef), 0.0);
    mono[0] += c[0] * tm2[0];
    if (ncoef > 1) {
        for (std::size_t i = 0; i < tm1.size(); ++i) mono[i] += c[1] * tm1[i];
    }
    for (int m = 2; m < ncoef; ++m) {
        std::vector<double> tm = mul_linear(tm1, sb, sa);
        for (double& v : tm) v *= 2.0;
        for (std::size_t i = 0; i < tm2.size(); ++i) tm[i] -= tm2[i];
        for (std::size_t i = 0; i < tm.size(); ++i) mono[i] += c[static_cast<std::size_t>(m)] * tm[i];
        tm2 = std::move(tm1);
        tm1 = std::move(tm);
    }
    fit.coeffs = mono;
    fit.window_lo = lo;
    fit.window_hi = hi;

    double worst = 0.0;
    double ymax = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        double acc = 0.0;
        for (std::size_t i = mono.size(); i-- > 0;) acc = acc * g.t[s] + mono[i];
        worst = std::max(worst, std::fabs(acc - y[s]));
        ymax = std::max(ymax, std::fabs(y[s]));
    }
    fit.fit_residual = worst / (ymax > 0.0 ? ymax : 1.0);
    return fit;
}

double pair_symmetry_check(const PFit& P, const PFit& Q) {
    const std::size_t n = std::max(P.coeffs.size(), Q.coeffs.size());
    double dev = 0.0;
    double pmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = i < P.coeffs.size() ? P.coeffs[i] : 0.0;
        const double q = i < Q.coeffs.size() ? Q.coeffs[i] : 0.0;
        const double mirrored = (i % 2 == 0) ? -q : q;  // (-1)^(i+1) q_i
        dev = std::max(dev, std::fabs(p - mirrored));
        pmax = std::max(pmax, std::fabs(p));
    }
    return dev / std::max(1.0, pmax);
}

namespace {

// Trace about (center, 0) on the midpoint angle grid, read through the even
// reflection exactly like circle_trace.
CircleTrace trace_about(const DiscreteSolution& sol, double center, double R0, int ntheta) {
    CircleTrace tr;
    tr.R = R0;
    tr.theta.resize(static_cast<std::size_t>(ntheta));
    tr.values.resize(tr.theta.size());
    const double dt = 2.0 * kPi / ntheta;
    for (int t = 0; t < ntheta; ++t) {
        const double th = -kPi + (t + 0.5) * dt;
        tr.theta[static_cast<std::size_t>(t)] = th;
        tr.values[static_cast<std::size_t>(t)] =
            interpolate(sol, center + R0 * std::cos(th), R0 * std::fabs(std::sin(th)));
    }
    return tr;
}

// u_{1/2}-mode coefficient of the trace about (center, 0). It vanishes when
// the center sits at the profile's own origin, which fixes the frame the
// alpha coefficients are defined in.
double half_mode_about(const DiscreteSolution& sol, double center, double R0, int ntheta) {
    const CircleTrace tr = trace_about(sol, center, R0, ntheta);
    return std::pow(R0, -0.5) * half_mode_coeff(tr, 1);
}

}  // namespace

struct EndpointFrame {
    bool found = false;     // some contact run wider than grid noise exists
    bool attached = false;  // the leftmost run starts at the left mesh edge
    int ncomp = 0;          // number of runs wider than grid noise
    double endpoint = 0.0;  // raw right edge of the leftmost run
    double tau = 0.0;       // endpoint refined to the u_{1/2} mode zero
};

// Locates the leftmost contact run and refines its right endpoint. The
// discrete contact edge lags the true endpoint by a grid-dependent amount,
// which would leak into every recovered alpha as a translation. The frame
// is pinned instead by the u_{1/2} mode of the recentered trace: it is odd
// through the true endpoint, so a sign change within two cells of the edge
// localizes the endpoint at sub-grid accuracy.
EndpointFrame locate_endpoint(const DiscreteSolution& sol, int ntheta) {
    const Mesh& m = sol.mesh;
    const ContactReport contact = contact_set(sol);

    EndpointFrame fr;
    // Single-node islands (and two-node slivers spanning just h) are grid
    // noise, not contact components.
    std::vector<ContactInterval> big;
    for (const ContactInterval& iv : contact.intervals) {
        if (iv.i_right - iv.i_left + 1 > 2) big.push_back(iv);
    }
    fr.ncomp = static_cast<int>(big.size());
    if (big.empty()) return fr;

    fr.found = true;
    fr.attached = big.front().i_left == 1;
    fr.endpoint = big.front().right;
    fr.tau = fr.endpoint;

    const double reach = std::fabs(fr.tau) + 2.0 * m.h;
    const double R0 = 0.5 * (m.L - reach - 2.0 * m.h);
    if (R0 > 0.0) {
        double lo = fr.tau - 2.0 * m.h;
        double hi = fr.tau + 2.0 * m.h;
        double flo = half_mode_about(sol, lo, R0, ntheta);
        double fhi = half_mode_about(sol, hi, R0, ntheta);
        if (flo == 0.0) {
            fr.tau = lo;
        } else if (fhi == 0.0) {
            fr.tau = hi;
        } else if ((flo < 0.0) != (fhi < 0.0)) {
            for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = half_mode_about(sol, mid, R0, ntheta);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            fr.tau = 0.5 * (lo + hi);
        }
    }
    return fr;
}

Profile recover_profile(const DiscreteSolution& sol, double tau, double R0, int ntheta) {
    const Mesh& m = sol.mesh;
    const int k = sol.k;
    if (!(R0 > 0.0) || R0 + std::fabs(tau) + 2.0 * m.h >= m.L) {
        throw CircleOutsideMesh("recentered circle does not fit inside the mesh");
    }

    const CircleTrace tr = trace_about(sol, tau, R0, ntheta);

    const double lead = std::pow(R0, -(2.0 * k - 0.5)) * half_mode_coeff(tr, 2 * k);
    if (std::fabs(lead - 1.0) > 0.02) {
        throw LeadingCoefficientOffUnity("leading mode coefficient " + std::to_string(lead) +
                                         " is not within 2% of 1");
    }
    std::vector<double> alpha(static_cast<std::size_t>(2 * k - 2));
    for (int l = 1; l <= 2 * k - 2; ++l) {
        alpha[static_cast<std::size_t>(l - 1)] =
            std::pow(R0, -(2.0 * k - 0.5 - l)) * half_mode_coeff(tr, 2 * k - l) / lead;
    }
    return validate_profile(k, alpha);
}

ClassificationReport classify_half_space(const DiscreteSolution& sol, int ntheta) {
    const Mesh& m = sol.mesh;
    const ContactReport contact = contact_set(sol);

    ClassificationReport rep;
    rep.M_emp = contact.M_emp;

    const EndpointFrame fr = locate_endpoint(sol, ntheta);
    if (!fr.found) {
        rep.half_space = false;
        rep.reason = "no contact set";
        return rep;
    }
    if (fr.ncomp > 1) {
        rep.half_space = false;
        rep.reason = "multiple contact components";
        return rep;
    }
    if (!fr.attached) {
        rep.half_space = false;
        rep.reason = "contact detached from the left edge";
        return rep;
    }

    rep.endpoint = fr.endpoint;
    rep.tau = fr.tau;

    const double R1 = 0.5 * (m.L - std::fabs(rep.tau) - 2.0 * m.h);
    try {
        const Profile prof = recover_profile(sol, rep.tau, R1, ntheta);
        rep.alpha = prof.alpha;
    } catch (const Error& e) {
        rep.half_space = false;
        rep.reason = e.what();
        return rep;
    }
    rep.half_space = true;

    // Representation residual on two circles in the translated frame.
    {
        Profile prof{sol.k, rep.alpha};
        const SlitExpansion q = prof.expansion();
        double worst = 0.0;
        double scale = 0.0;
        const double dt = 2.0 * kPi / ntheta;
        const double R0 = 0.5 * (m.L - std::fabs(rep.endpoint) - 4.0 * m.h);
        for (double R : {R0, 1.3 * R0}) {
            for (int t = 0; t < ntheta; ++t) {
                const double th = -kPi + (t + 0.5) * dt;
                const double uv =
                    interpolate(sol, rep.tau + R * std::cos(th), R * std::fabs(std::sin(th)));
                const double qv =
                    eval_expansion(q, PlanePoint(R * std::cos(th), R * std::fabs(std::sin(th))));
                worst = std::max(worst, std::fabs(uv - qv));
                scale = std::max(scale, std::fabs(uv));
            }
        }
        rep.representation_residual = worst / (scale > 0.0 ? scale : 1.0);
    }

    try {
        const LineGradient g = line_gradient(sol, contact);
        const PFit fit = compute_P(g, sol.k);
        rep.P_coeffs = fit.coeffs;
        rep.fit_residual = fit.fit_residual;
    } catch (const Error&) {
        rep.P_coeffs.clear();
        rep.fit_residual = kNaN;
    }
    return rep;
}

namespace {

// Max |u - q(. + tau)| over thin-line nodes in [1, 0.45 L], normalized by
// max |u| there; tau follows the barrier parameterization q(x1 + tau). The
// translate is evaluated in closed form; nodes under its slit read zero.
double line_deviation(const DiscreteSolution& sol, const Profile& prof, double tau) {
    const Mesh& m = sol.mesh;
    const SlitExpansion q = prof.expansion();
    double dev = 0.0;
    double scale = 0.0;
    for (int i = 1; i <= m.nx - 2; ++i) {
        const double t = m.x1(i);
        if (t < 1.0 || t > 0.45 * m.L) continue;
        const double uv = sol.value(i, 0);
        const double qv = eval_expansion(q, PlanePoint(t + tau, 0.0));
        dev = std::max(dev, std::fabs(uv - qv));
        scale = std::max(scale, std::fabs(uv));
    }
    return dev / (scale > 0.0 ? scale : 1.0);
}

}  // namespace

double representation_misfit(const DiscreteSolution& sol, const InfinityDatum& d) {
    const Mesh& m = sol.mesh;
    const double bound = 0.5 * m.L;

    // Real roots of the gap coefficient locate every zero-tail translate
    // with this datum: sample on a uniform grid, bisect sign changes.
    const auto gap = [&](double tau) { return barrier(d, tau).gap_coeff; };
    const int ns = 1601;
    const double step = 2.0 * bound / (ns - 1);
    std::vector<double> roots;
    double prev_tau = -bound;
    double prev_gap = gap(prev_tau);
    for (int i = 1; i < ns; ++i) {
        const double tau = -bound + i * step;
        const double g = gap(tau);
        if (prev_gap == 0.0) {
            roots.push_back(prev_tau);
        } else if (g != 0.0 && (g < 0.0) != (prev_gap < 0.0)) {
            double lo = prev_tau;
            double hi = tau;
            double flo = prev_gap;
            for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = gap(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_tau = tau;
        prev_gap = g;
    }
    if (prev_gap == 0.0) roots.push_back(prev_tau);
    if (roots.empty()) return kNaN;

    double best = std::numeric_limits<double>::infinity();
    for (double tau : roots) {
        const Profile prof = barrier(d, tau).profile;
        best = std::min(best, line_deviation(sol, prof, tau));
    }
    return best;
}

PairResult pair_run(const DiscreteSolution& plus, const DiscreteSolution& minus,
                    const InfinityDatum& d, const std::vector<double>& radii, int N,
                    int ntheta) {
    PairResult out;
    out.b_plus = extract_b(plus, radii, N, ntheta);
    out.b_minus = extract_b(minus, radii, N, ntheta);
    out.defect = 0.0;
    for (int j = 1; j <= N; ++j) {
        const double bp = out.b_plus.b[static_cast<std::size_t>(j - 1)];
        const double bm = out.b_minus.b[static_cast<std::size_t>(j - 1)];
        const double mirrored = (j % 2 == 1) ? bm : -bm;  // (-1)^(j+1) b_j
        out.defect += std::fabs(bp - mirrored);
    }
    out.repr_misfit_plus = representation_misfit(plus, d);
    out.repr_misfit_minus = representation_misfit(minus, conjugate_datum(d));

    out.plus_report = classify_half_space(plus, ntheta);
    out.minus_report = classify_half_space(minus, ntheta);

    out.alpha_mirror_error = kNaN;
    if (out.plus_report.half_space && out.minus_report.half_space) {
        double dev = 0.0;
        double amax = 0.0;
        for (std::size_t l = 1; l <= out.plus_report.alpha.size(); ++l) {
            const double ap = out.plus_report.alpha[l - 1];
            const double am = out.minus_report.alpha[l - 1];
            const double mirrored = (l % 2 == 0) ? am : -am;  // (-1)^l alpha_l
            dev = std::max(dev, std::fabs(ap - mirrored));
            amax = std::max(amax, std::fabs(ap));
        }
        out.alpha_mirror_error = dev / std::max(1.0, amax);
    }

    out.pair_P_deviation = kNaN;
    if (!out.plus_report.P_coeffs.empty() && !out.minus_report.P_coeffs.empty()) {
        PFit p, q;
        p.coeffs = out.plus_report.P_coeffs;
        q.coeffs = out.minus_report.P_coeffs;
        out.pair_P_deviation = pair_symmetry_check(p, q);
    }
    return out;
}

PairResult pair_run(const InfinityDatum& d, const Mesh& mesh, const SolveOptions& opt,
                    const std::vector<double>& radii, int N, int ntheta) {
    const InfinityDatum dc = conjugate_datum(d);
    const DiscreteSolution plus = solve_psor(assemble(d, mesh), opt);
    if (!plus.converged) throw NotConverged("pair_run: datum solve did not converge");
    const DiscreteSolution minus = solve_psor(assemble(dc, mesh), opt);
    if (!minus.converged) throw NotConverged("pair_run: conjugate solve did not converge");
    return pair_run(plus, minus, d, radii, N, ntheta);
}

}  // namespace slitstone
