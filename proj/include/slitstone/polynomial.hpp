#pragma once

// Dense real polynomials with floating-point Sturm machinery, used to decide
// nonnegativity of the admissibility sign conditions on (0, inf).

#include <vector>

namespace slitstone::poly {

// Ascending coefficients: p[i] is the coefficient of x^i.
using Poly = std::vector<double>;

double eval(const Poly& p, double x);
Poly derivative(const Poly& p);

// Drops leading coefficients with |c| <= rel * max|c| and rescales to unit
// max coefficient (positive scaling, preserves signs and roots). Coefficients
// below the same threshold are zeroed. Returns the zero polynomial as {}.
Poly normalized(const Poly& p, double rel = 1e-12);

// Factors out the largest power x^j dividing p (within the pruning
// tolerance); modifies p in place and returns j.
int strip_root_at_zero(Poly& p, double rel = 1e-12);

// 1 + max_i |c_i| / |c_n|: every real root lies in [-B, B].
double cauchy_bound(const Poly& p);

// Canonical Sturm chain p, p', then negated remainders. Each member is
// normalized to unit max coefficient to keep the floating-point division
// chain stable. Valid for counting distinct real roots even when p has
// multiple roots.
std::vector<Poly> sturm_chain(const Poly& p);

int sign_changes_at(const std::vector<Poly>& chain, double x);

// Number of distinct real roots in (a, b].
int count_roots(const std::vector<Poly>& chain, double a, double b);

struct NonnegVerdict {
    bool nonneg = false;
    // p touches zero somewhere on (0, inf) without crossing (even-order
    // contact, or a dip too shallow to resolve): nonneg holds with no margin.
    bool zero_margin = false;
    // Smallest relative sample value between isolated roots; negative when
    // the verdict is false.
    double margin = 0.0;
    // Distinct roots counted in (0, bound].
    int roots = 0;
};

// Decides p >= 0 on (0, inf): Sturm-counts and isolates the distinct positive
// roots by bisection, then samples the sign once in each gap between them
// (plus beyond the Cauchy bound). Sample values are scaled by sum |c_i| x^i;
// gaps whose scaled value is within zero_tol of zero are treated as touching.
// The zero polynomial returns nonneg with zero margin.
NonnegVerdict nonneg_on_positive_axis(const Poly& p, double zero_tol = 1e-7);

}  // namespace slitstone::poly
