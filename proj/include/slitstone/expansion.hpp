#pragma once

// Half-integer Fourier analysis of discrete solutions: circle traces,
// mode coefficients, extraction of the decaying expansion at infinity,
// and the Kelvin point map.

#include <array>
#include <iosfwd>
#include <vector>

#include "slitstone/vi_solver.hpp"

namespace slitstone {

// Solution values interpolated on the circle |x| = R, sampled at the midpoint
// angles theta_t = -pi + (t + 1/2) * 2 pi / ntheta (never exactly on the
// slit); points with theta < 0 are read through the even reflection.
struct CircleTrace {
    double R = 0.0;
    std::vector<double> theta;
    std::vector<double> values;
};

CircleTrace circle_trace(const DiscreteSolution& sol, double R, int ntheta);

// Bilinear interpolation of the solution at (x1, x2), x2 in [0, L].
double interpolate(const DiscreteSolution& sol, double x1, double x2);

// Applies a function of the plane point on the same sample set (used for
// subtracting data and for synthetic traces in tests).
CircleTrace circle_trace_of(double R, int ntheta, const std::function<double(PlanePoint)>& f);

// (1/pi) * sum_t values_t * cos((j - 1/2) theta_t) * dtheta: the coefficient
// of cos((j-1/2) theta) in the trace. With the midpoint sample set this
// quadrature is exact for integer-frequency trigonometric polynomials, so
// the discrete half-mode Gram matrix is the identity up to rounding.
double half_mode_coeff(const CircleTrace& trace, int j);

struct ExpansionReport {
    int N = 0;
    std::vector<double> radii;
    std::vector<double> b;          // b[j-1] = b_j, averaged over radii
    std::vector<double> deviation;  // max spread of b_j across radii
    bool flagged = false;           // some deviation > 1% of max(1, |b|_inf)
    double M_emp = 0.0;
};

// Extracts b_j, j = 1..N, from the trace of u - p on each circle:
// b_j(R) = R^(j - 1/2) * half_mode_coeff_j. Every radius must exceed the
// contact closure radius M_emp (else RadiusBelowContactClosure) and fit
// strictly inside the mesh (else CircleOutsideMesh).
ExpansionReport extract_b(const DiscreteSolution& sol, const std::vector<double>& radii, int N,
                          int ntheta = 4096);

// Max over j = 1..N and the given radii of the half-mode coefficients of
// u - p - sum b_j u_{1/2-j}; small values certify the representation.
double fourier_vanish_check(const DiscreteSolution& sol, const std::vector<double>& b,
                            const std::vector<double>& radii, int N, int ntheta = 4096);

// x -> M^2 x / |x|^2. Throws OriginNotInvertible at x = 0.
std::array<double, 2> kelvin_point(const std::array<double, 2>& x, double M);

struct SlitTaylor {
    std::vector<double> v;      // v[m] multiplies u_{m+1/2}, m = 0..N
    double consistency = 0.0;   // max spread of v across the supplied radii
    double residual = 0.0;      // relative trace misfit on the smallest circle
};

// Leading expansion at an interior slit point from traces on small circles
// (at least two radii; coefficients are averaged, the spread is reported).
SlitTaylor slit_taylor(const std::vector<CircleTrace>& traces, int N);

// CSV: "# radii: ..." comment, header "j,b,deviation", one row per j,
// 17 significant digits.
void write_expansion_csv(std::ostream& os, const ExpansionReport& report);

}  // namespace slitstone
