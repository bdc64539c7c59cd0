#pragma once

// Half-space classification and the pair symmetry diagnostics built on the
// squared-gradient line polynomial P(t) = (du/dx1)^2 - (du/dx2)^2 on the
// thin line.

#include <string>
#include <vector>

#include "slitstone/expansion.hpp"
#include "slitstone/vi_solver.hpp"

namespace slitstone {

struct LineGradient {
    std::vector<double> t;    // sample abscissae on the thin line
    std::vector<double> dx1;  // central difference along the line
    std::vector<double> dx2;  // one-sided second-order difference into x2 > 0
};

// Gradient samples on the thin line, excluding nodes within `exclusion`
// multiples of h of any contact-interval endpoint or of the lateral edges.
LineGradient line_gradient(const DiscreteSolution& sol, const ContactReport& contact,
                           double exclusion = 4.0);

struct PFit {
    std::vector<double> coeffs;  // monomial coefficients in t, ascending
    double fit_residual = 0.0;   // max misfit over samples / max |P| on the window
    double cond = 0.0;           // condition estimate of the Chebyshev Gram matrix
    double window_lo = 0.0;
    double window_hi = 0.0;
};

// Least-squares fit of P(t) = dx1^2 - dx2^2 in a Chebyshev basis on the
// sample window, degree capped at 4k-3, converted to monomial coefficients.
// Throws IllConditionedFit past condition 1e12 and WindowMismatch when the
// window is degenerate or holds fewer samples than coefficients.
PFit compute_P(const LineGradient& g, int k);

// Deviation of the pair relation P(t) = -Q(-t), i.e. of p_i = (-1)^{i+1} q_i:
// max_i |p_i - (-1)^{i+1} q_i| / max(1, max_i |p_i|).
double pair_symmetry_check(const PFit& P, const PFit& Q);

struct ClassificationReport {
    bool half_space = false;
    std::string reason;  // populated when half_space is false
    double endpoint = 0.0;
    double tau = 0.0;
    std::vector<double> alpha;  // recovered u-basis profile coefficients
    std::vector<double> P_coeffs;
    double fit_residual = 0.0;
    double representation_residual = 0.0;
    double M_emp = 0.0;
};

// Recovers the profile of a translated half-space solution from the circle
// trace recentered at (tau, 0): alpha_l = R0^-(2k-1/2-l) * mode_{2k-l}. The
// leading mode must come out within 2% of one (LeadingCoefficientOffUnity).
Profile recover_profile(const DiscreteSolution& sol, double tau, double R0, int ntheta = 4096);

// Decides whether the contact set is a single interval reaching the left
// edge, refines the run's right endpoint to the sub-grid zero of the
// recentered u_{1/2} mode (tau; endpoint keeps the raw run edge), recovers
// the profile in that frame, fits P, and measures the representation
// residual |u - U_tau(q)| / scale on two circles about (tau, 0).
// half_space = false carries the reason instead of throwing; structural
// errors (no contact at all) also land there.
ClassificationReport classify_half_space(const DiscreteSolution& sol, int ntheta = 4096);

// Distance of the solution from the zero-tail translates compatible with
// its datum. A shifted profile q(. + tau) shares the datum exactly when tau
// is a root of the lowest translation equation (the w_{1/2} gap coefficient
// of the barrier construction) and its alpha comes from forward
// substitution at that root. Each real root in |tau| <= L/2 yields a
// candidate; the misfit is the smallest over candidates of
// max |u - q(. + tau)| on the thin segment [1, 0.45 L], normalized by
// max |u| there. Near zero, up to discretization, exactly when the
// solution is such a translate; NaN when no candidate root lies in range.
double representation_misfit(const DiscreteSolution& sol, const InfinityDatum& d);

struct PairResult {
    ClassificationReport plus_report;   // datum d
    ClassificationReport minus_report;  // conjugate datum
    ExpansionReport b_plus;
    ExpansionReport b_minus;
    double defect = 0.0;              // sum_j |b_j(+) - (-1)^(j+1) b_j(-)|
    double repr_misfit_plus = 0.0;    // representation_misfit of the datum side
    double repr_misfit_minus = 0.0;   // representation_misfit of the conjugate side
    double alpha_mirror_error = 0.0;  // max_l |alpha_l(+) - (-1)^l alpha_l(-)|, relative
    double pair_P_deviation = 0.0;    // pair_symmetry_check of the two P fits
};

// Solves the datum and its conjugate side by side and assembles the
// antisymmetry diagnostics.
PairResult pair_run(const InfinityDatum& d, const Mesh& mesh, const SolveOptions& opt,
                    const std::vector<double>& radii, int N, int ntheta = 4096);

// Diagnostics for two already-computed converged solutions: the plus and
// minus members of a candidate pair, d the plus-side datum (the minus side
// is measured against its conjugate).
PairResult pair_run(const DiscreteSolution& plus, const DiscreteSolution& minus,
                    const InfinityDatum& d, const std::vector<double>& radii, int N,
                    int ntheta = 4096);

}  // namespace slitstone
