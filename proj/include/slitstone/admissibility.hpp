#pragma once

// Data at infinity, admissible profiles, and the translated-profile barrier.

#include <vector>

#include "slitstone/polynomial.hpp"
#include "slitstone/slit_basis.hpp"

namespace slitstone {

// Prescribed datum p = u_{2k-1/2} + sum_{l=1}^{2k-1} a_l u_{2k-1/2-l}.
// a[l-1] stores a_l. a_tilde holds the same datum in the translation-adapted
// w basis: p = u_{2k-1/2} + sum a_tilde_l w_{2k-1/2-l}, a_tilde_l = a_l / c_{2k-l}.
struct InfinityDatum {
    int k = 2;
    std::vector<double> a;
    std::vector<double> a_tilde;

    SlitExpansion expansion() const;
};

// Shape check only (k >= 1, length 2k-1, finite entries) plus a_tilde fill-in.
// Far fields of translated exact solutions can carry |a_l| > 1, so this is the
// entry point for re-expanding stored solutions.
InfinityDatum make_datum(int k, const std::vector<double>& a);

// make_datum plus the hypothesis |a_l| <= 1 required of prescribed data.
// Throws LengthMismatch / CoefficientOutOfRange.
InfinityDatum validate_datum(int k, const std::vector<double>& a);

// a_l -> (-1)^l a_l.
InfinityDatum conjugate_datum(const InfinityDatum& d);

// Candidate blow-up profile q = u_{2k-1/2} + sum_{l=1}^{2k-2} alpha_l u_{2k-1/2-l}
// (coefficients in the u basis; alpha[l-1] stores alpha_l).
struct Profile {
    int k = 2;
    std::vector<double> alpha;

    SlitExpansion expansion() const;
};

Profile validate_profile(int k, const std::vector<double>& alpha);

struct AdmissibilityCertificate {
    bool admissible = false;
    bool zero_margin = false;
    // min of the two per-condition margins (relative, negative when violated)
    double margin = 0.0;
    // The two sign-condition polynomials, ascending coefficients:
    //   trace_poly(r) = r^{2k-1} + sum alpha_l r^{2k-1-l}          (trace >= 0)
    //   slit_poly(r)  = sum (-1)^l alpha_l (2k-1/2-l) r^{2k-2-l}   (-d/dx2 on the slit >= 0)
    poly::Poly trace_poly;
    poly::Poly slit_poly;
    int trace_roots = 0;
    int slit_roots = 0;
};

// Decides both sign conditions with Sturm sequences; no sampling oracles.
AdmissibilityCertificate profile_admissible(const Profile& p);

struct BarrierResult {
    Profile profile;              // u-basis coefficients of q
    std::vector<double> alpha_w;  // triangular-system solution (w-basis), alpha_w[l-1] = alpha_l
    double tau = 0.0;
    double M_est = 0.0;  // radius beyond which Q - p >= 0 was verified by sampling, doubled
    SlitExpansion Q;     // truncated Taylor translation of q by tau (far-field form)
    // w_{1/2} coefficient of Q - p: the lowest-order term of the far-field gap.
    double gap_coeff = 0.0;
    AdmissibilityCertificate cert;
};

// Builds the profile whose translation by tau matches the datum below the
// leading term: solves the lower-triangular system
//   sum_{j=0}^{i} alpha_{i-j} tau^j / j! = a_tilde_i,  alpha_0 = 1, i = 1..2k-2
// by forward substitution (w basis), converts to the u basis, checks
// admissibility, and estimates M_est (0 when the profile is inadmissible).
BarrierResult barrier(const InfinityDatum& d, double tau, int J = 40);

// Doubles tau from tau0 until the barrier profile is admissible and the
// far-field dominance Q - p >= 0 is verified; throws BarrierSearchExhausted
// past the cap.
BarrierResult find_barrier(const InfinityDatum& d, double tau0 = 1.0, double cap = 1048576.0,
                           int J = 40);

// Q evaluated exactly as the shifted profile q(x1 + tau, x2); valid at every
// point, unlike the truncated expansion stored in BarrierResult::Q.
double eval_barrier_Q(const BarrierResult& b, const PlanePoint& p);

}  // namespace slitstone
