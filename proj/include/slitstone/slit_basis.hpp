#pragma once

// Half-integer harmonic basis on the slit plane.
//
// The slit is S = {x2 = 0, x1 <= 0}. In polar coordinates with theta in
// (-pi, pi] (the slit itself carries theta = pi, i.e. the limit from x2 > 0),
//
//     u_{m+1/2}(r, theta) = r^{m+1/2} * cos((m+1/2) * theta),
//
// indexed here by the integer m, so index m stands for homogeneity m + 1/2.
// Each u_{m+1/2} is harmonic off the slit, vanishes on the slit, and is even
// in x2 away from it.

#include <array>
#include <cstddef>
#include <map>
#include <vector>

namespace slitstone {

// A point of the slit plane together with its polar representation.
// theta follows the (-pi, pi] convention: on the negative x1 axis theta = +pi
// regardless of the sign of zero in x2.
struct PlanePoint {
    double x1 = 0.0;
    double x2 = 0.0;
    double r = 0.0;
    double theta = 0.0;

    PlanePoint() = default;
    PlanePoint(double x1_, double x2_);

    bool on_slit() const { return x2 == 0.0 && x1 < 0.0; }
    bool is_origin() const { return r == 0.0; }
};

// Finite linear combination sum_m c_m * u_{m+1/2}, keyed by the integer index
// m (which may be negative). Zero coefficients are never stored.
class SlitExpansion {
  public:
    SlitExpansion() = default;

    // Adds c * u_{m+1/2}; erases the term if the sum cancels to zero.
    void add_term(int m, double c);
    void set_term(int m, double c);
    double coeff(int m) const;

    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    int lowest_index() const;   // requires !empty()
    int highest_index() const;  // requires !empty()
    bool has_negative_index() const { return !empty() && lowest_index() < 0; }

    const std::map<int, double>& terms() const { return terms_; }

    SlitExpansion& operator+=(const SlitExpansion& rhs);
    SlitExpansion& operator*=(double s);
    friend SlitExpansion operator+(SlitExpansion a, const SlitExpansion& b) { return a += b; }
    friend SlitExpansion operator*(SlitExpansion a, double s) { return a *= s; }

  private:
    std::map<int, double> terms_;
};

// Evaluates u_{m+1/2} at a point. Exactly zero on the slit and (for m >= 0) at
// the origin. Throws NegativeHomogeneityAtOrigin when m < 0 and r = 0.
double eval_u(int m, const PlanePoint& p);

// Gradient of u_{m+1/2}:
//   (d/dx1, d/dx2) = (m+1/2) * r^(m-1/2) * (cos((m-1/2) theta), -sin((m-1/2) theta)).
// Throws OriginSingularity at r = 0. On the slit the theta = pi convention
// returns the one-sided limit from x2 > 0.
std::array<double, 2> grad_u(int m, const PlanePoint& p);

// Evaluates an expansion at a point. Uses a three-term cosine recurrence over
// the contiguous index range so batch and scalar paths share one op order;
// exactly zero on the slit. Throws NegativeHomogeneityAtOrigin if a
// negative-index term is evaluated at the origin.
double eval_expansion(const SlitExpansion& e, const PlanePoint& p);

// Batch evaluation of one expansion at many points (kernel-dispatched; AVX2
// when available, bit-identical to the scalar kernel).
void eval_expansion_batch(const SlitExpansion& e, const PlanePoint* pts, double* out,
                          std::size_t n);

// Gradient of an expansion (termwise grad_u).
std::array<double, 2> eval_expansion_grad(const SlitExpansion& e, const PlanePoint& p);

// Tangential derivative along x1: c * u_{m+1/2} -> c * (m+1/2) * u_{m-1/2},
// applied to every term.
SlitExpansion ddx1(const SlitExpansion& e);

// Normal derivative -d/dx2 of the expansion on the slit at radius r > 0
// (limit from x2 > 0): termwise (m+1/2) * r^(m-1/2) * (-1)^(m+1) summed with
// sign from the theta = pi gradient formula.
double slit_normal_derivative(const SlitExpansion& e, double r);

// Diagonal factors relating the translation-adapted basis to the u basis:
// w_{l-1/2} = c_l * u_{l-1/2} with c_l = prod_{j=l}^{2k-1} (j + 1/2) for
// l = 1..2k-1 and c_2k = 1 (index l counts homogeneity l - 1/2). Returned as
// coeffs[l] for l = 0..2k (coeffs[0] unused, kept for direct indexing).
// Factors are accumulated in exact integer arithmetic before conversion.
std::vector<double> u_to_w_coeffs(int k);

// Truncated Taylor translation: sum_{j=0}^{J} tau^j / j! * ddx1^j(e), which
// approximates x -> e(x1 + tau, x2) for r > |tau| (with machine-precision
// agreement once r is a few times |tau| and J is large enough). Returns the
// translated expansion; its lowest retained index is lowest_index(e) - J.
SlitExpansion translate_expansion(const SlitExpansion& e, double tau, int J);

// Conjugation about the leading index: with lead L = highest index, the term
// at offset l below the lead picks up (-1)^l.
SlitExpansion conjugate_expansion(const SlitExpansion& e);

}  // namespace slitstone
