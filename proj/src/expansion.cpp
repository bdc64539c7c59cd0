#include "slitstone/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "slitstone/errors.hpp"
#include "slitstone/simd/kernels.hpp"
#include "slitstone/solution_io.hpp"

namespace slitstone {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> midpoint_angles(int ntheta) {
    if (ntheta < 8) throw Error("circle trace needs at least 8 angles");
    std::vector<double> theta(static_cast<std::size_t>(ntheta));
    const double dt = 2.0 * kPi / ntheta;
    for (int t = 0; t < ntheta; ++t) theta[static_cast<std::size_t>(t)] = -kPi + (t + 0.5) * dt;
    return theta;
}

}  // namespace

namespace {

// Cubic Lagrange weights for the points t = -1, 0, 1, 2.
void cubic_weights(double t, double w[4]) {
    w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
    w[1] = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    w[2] = -(t + 1.0) * t * (t - 2.0) / 2.0;
    w[3] = (t + 1.0) * t * (t - 1.0) / 6.0;
}

}  // namespace

double interpolate(const DiscreteSolution& sol, double x1, double x2) {
    const Mesh& m = sol.mesh;
    const double gx = (x1 + m.L) / m.h;
    const double gy = x2 / m.h;
    int i0 = static_cast<int>(std::floor(gx));
    int j0 = static_cast<int>(std::floor(gy));
    i0 = std::clamp(i0, 0, m.nx - 2);
    j0 = std::clamp(j0, 0, m.ny - 2);

    // 4x4 cubic stencil; the column window is shifted to stay on the grid,
    // the row window reflects j = -1 to j = 1 across the even thin line and
    // shifts away from the top edge.
    int ib = std::clamp(i0 - 1, 0, m.nx - 4);
    int jb = std::min(j0 - 1, m.ny - 4);
    double wx[4];
    double wy[4];
    cubic_weights(gx - (ib + 1), wx);
    cubic_weights(gy - (jb + 1), wy);

    double acc = 0.0;
    for (int dj = 0; dj < 4; ++dj) {
        const int j = std::abs(jb + dj);
        double row = 0.0;
        for (int di = 0; di < 4; ++di) {
            row += wx[di] * sol.values[m.idx(ib + di, j)];
        }
        acc += wy[dj] * row;
    }
    return acc;
}

CircleTrace circle_trace(const DiscreteSolution& sol, double R, int ntheta) {
    const Mesh& m = sol.mesh;
    if (!(R > 0.0) || R > m.L - m.h) {
        throw CircleOutsideMesh("circle radius " + std::to_string(R) +
                                " does not fit strictly inside the mesh");
    }
    CircleTrace tr;
    tr.R = R;
    tr.theta = midpoint_angles(ntheta);
    tr.values.resize(tr.theta.size());
    for (std::size_t t = 0; t < tr.theta.size(); ++t) {
        const double th = tr.theta[t];
        // even reflection: theta < 0 reads the upper half plane
        tr.values[t] = interpolate(sol, R * std::cos(th), R * std::fabs(std::sin(th)));
    }
    return tr;
}

CircleTrace circle_trace_of(double R, int ntheta, const std::function<double(PlanePoint)>& f) {
    CircleTrace tr;
    tr.R = R;
    tr.theta = midpoint_angles(ntheta);
    tr.values.resize(tr.theta.size());
    for (std::size_t t = 0; t < tr.theta.size(); ++t) {
        tr.values[t] = f(PlanePoint(R * std::cos(tr.theta[t]), R * std::sin(tr.theta[t])));
    }
    return tr;
}

double half_mode_coeff(const CircleTrace& trace, int j) {
    if (j < 1) throw Error("half_mode_coeff requires j >= 1");
    const std::size_t n = trace.values.size();
    std::vector<double> c(n);
    const double freq = j - 0.5;
    for (std::size_t t = 0; t < n; ++t) c[t] = std::cos(freq * trace.theta[t]);
    const double dot = simd::kernels().dot_blocked(trace.values.data(), c.data(), n);
    return dot * (2.0 / static_cast<double>(n));  // (1/pi) * dot * dtheta
}

namespace {

// Trace minus an expansion evaluated exactly at the sample points. The trace
// values were read at (R cos, R |sin|) and the basis is even in x2, so the
// expansion is evaluated at the same reflected points.
CircleTrace subtract_expansion(const CircleTrace& tr, const SlitExpansion& e) {
    CircleTrace out = tr;
    std::vector<PlanePoint> pts;
    pts.reserve(tr.theta.size());
    for (std::size_t t = 0; t < tr.theta.size(); ++t) {
        pts.emplace_back(tr.R * std::cos(tr.theta[t]), tr.R * std::fabs(std::sin(tr.theta[t])));
    }
    std::vector<double> pv(pts.size());
    eval_expansion_batch(e, pts.data(), pv.data(), pts.size());
    for (std::size_t t = 0; t < out.values.size(); ++t) out.values[t] -= pv[t];
    return out;
}

}  // namespace

ExpansionReport extract_b(const DiscreteSolution& sol, const std::vector<double>& radii, int N,
                          int ntheta) {
    if (N < 1) throw Error("extract_b requires N >= 1");
    if (radii.empty()) throw Error("extract_b requires at least one radius");
    const ContactReport contact = contact_set(sol);
    for (double R : radii) {
        if (R < contact.M_emp) {
            throw RadiusBelowContactClosure(
                "radius " + std::to_string(R) + " lies below the contact closure radius " +
                std::to_string(contact.M_emp));
        }
    }

    const SlitExpansion p = make_datum(sol.k, sol.a).expansion();
    std::vector<std::vector<double>> per_radius;
    per_radius.reserve(radii.size());
    for (double R : radii) {
        const CircleTrace tr = subtract_expansion(circle_trace(sol, R, ntheta), p);
        std::vector<double> b(static_cast<std::size_t>(N));
        for (int j = 1; j <= N; ++j) {
            b[static_cast<std::size_t>(j - 1)] = std::pow(R, j - 0.5) * half_mode_coeff(tr, j);
        }
        per_radius.push_back(std::move(b));
    }

    ExpansionReport rep;
    rep.N = N;
    rep.radii = radii;
    rep.M_emp = contact.M_emp;
    rep.b.assign(static_cast<std::size_t>(N), 0.0);
    rep.deviation.assign(static_cast<std::size_t>(N), 0.0);
    for (int j = 0; j < N; ++j) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        double sum = 0.0;
        for (const auto& b : per_radius) {
            lo = std::min(lo, b[static_cast<std::size_t>(j)]);
            hi = std::max(hi, b[static_cast<std::size_t>(j)]);
            sum += b[static_cast<std::size_t>(j)];
        }
        rep.b[static_cast<std::size_t>(j)] = sum / static_cast<double>(per_radius.size());
        rep.deviation[static_cast<std::size_t>(j)] = hi - lo;
    }
    double bmax = 0.0;
    for (double b : rep.b) bmax = std::max(bmax, std::fabs(b));
    const double yard = std::max(1.0, bmax);
    rep.flagged = false;
    for (double d : rep.deviation) {
        if (d > 0.01 * yard) rep.flagged = true;
    }
    return rep;
}

double fourier_vanish_check(const DiscreteSolution& sol, const std::vector<double>& b,
                            const std::vector<double>& radii, int N, int ntheta) {
    SlitExpansion e = make_datum(sol.k, sol.a).expansion();
    for (std::size_t j = 1; j <= b.size(); ++j) e.add_term(-static_cast<int>(j), b[j - 1]);
    double worst = 0.0;
    for (double R : radii) {
        const CircleTrace tr = subtract_expansion(circle_trace(sol, R, ntheta), e);
        for (int j = 1; j <= N; ++j) {
            worst = std::max(worst, std::fabs(half_mode_coeff(tr, j)));
        }
    }
    return worst;
}

std::array<double, 2> kelvin_point(const std::array<double, 2>& x, double M) {
    const double n2 = x[0] * x[0] + x[1] * x[1];
    if (n2 == 0.0) throw OriginNotInvertible();
    const double f = M * M / n2;
    return {f * x[0], f * x[1]};
}

SlitTaylor slit_taylor(const std::vector<CircleTrace>& traces, int N) {
    if (traces.size() < 2) throw Error("slit_taylor needs traces at two or more radii");
    if (N < 0) throw Error("slit_taylor requires N >= 0");

    SlitTaylor out;
    const std::size_t nm = static_cast<std::size_t>(N) + 1;
    std::vector<std::vector<double>> per_trace;
    for (const CircleTrace& tr : traces) {
        std::vector<double> v(nm);
        for (int m = 0; m <= N; ++m) {
            v[static_cast<std::size_t>(m)] =
                std::pow(tr.R, -(m + 0.5)) * half_mode_coeff(tr, m + 1);
        }
        per_trace.push_back(std::move(v));
    }
    out.v.assign(nm, 0.0);
    out.consistency = 0.0;
    for (std::size_t m = 0; m < nm; ++m) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        double sum = 0.0;
        for (const auto& v : per_trace) {
            lo = std::min(lo, v[m]);
            hi = std::max(hi, v[m]);
            sum += v[m];
        }
        out.v[m] = sum / static_cast<double>(per_trace.size());
        out.consistency = std::max(out.consistency, hi - lo);
    }

    // Residual on the smallest circle: relative trace misfit of the
    // reconstruction.
    std::size_t smallest = 0;
    for (std::size_t t = 1; t < traces.size(); ++t) {
        if (traces[t].R < traces[smallest].R) smallest = t;
    }
    const CircleTrace& tr = traces[smallest];
    SlitExpansion e;
    for (std::size_t m = 0; m < nm; ++m) e.set_term(static_cast<int>(m), out.v[m]);
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t t = 0; t < tr.theta.size(); ++t) {
        const PlanePoint p(tr.R * std::cos(tr.theta[t]), tr.R * std::sin(tr.theta[t]));
        worst = std::max(worst, std::fabs(tr.values[t] - eval_expansion(e, p)));
        scale = std::max(scale, std::fabs(tr.values[t]));
    }
    out.residual = worst / (scale > 0.0 ? scale : 1.0);
    return out;
}

void write_expansion_csv(std::ostream& os, const ExpansionReport& report) {
    os << "# radii:";
    for (double R : report.radii) os << ' ' << format_g17(R);
    os << '\n';
    os << "j,b,deviation\n";
    for (int j = 1; j <= report.N; ++j) {
        os << j << ',' << format_g17(report.b[static_cast<std::size_t>(j - 1)]) << ','
           << format_g17(report.deviation[static_cast<std::size_t>(j - 1)]) << '\n';
    }
}

}  // namespace slitstone
