#include "slitstone/slit_basis.hpp"

#include <cmath>
#include <numbers>

#include "slitstone/errors.hpp"
#include "slitstone/simd/kernels.hpp"

namespace slitstone {

namespace {
constexpr double kPi = std::numbers::pi;
}

PlanePoint::PlanePoint(double x1_, double x2_) : x1(x1_), x2(x2_) {
    r = std::hypot(x1_, x2_);
    if (x2_ == 0.0 && x1_ < 0.0) {
        theta = kPi;  // slit convention: limit from x2 > 0, also for -0.0
    } else {
        theta = std::atan2(x2_, x1_);
    }
}

void SlitExpansion::add_term(int m, double c) {
    if (c == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

void SlitExpansion::set_term(int m, double c) {
    if (c == 0.0) {
        terms_.erase(m);
    } else {
        terms_[m] = c;
    }
}

double SlitExpansion::coeff(int m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0.0 : it->second;
}

int SlitExpansion::lowest_index() const {
    if (terms_.empty()) throw Error("lowest_index of an empty expansion");
    return terms_.begin()->first;
}

int SlitExpansion::highest_index() const {
    if (terms_.empty()) throw Error("highest_index of an empty expansion");
    return terms_.rbegin()->first;
}

SlitExpansion& SlitExpansion::operator+=(const SlitExpansion& rhs) {
    for (const auto& [m, c] : rhs.terms_) add_term(m, c);
    return *this;
}

SlitExpansion& SlitExpansion::operator*=(double s) {
    if (s == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
}

double eval_u(int m, const PlanePoint& p) {
    if (p.on_slit()) return 0.0;
    if (p.is_origin()) {
        if (m < 0) throw NegativeHomogeneityAtOrigin();
        return 0.0;
    }
    const double s = m + 0.5;
    return std::pow(p.r, s) * std::cos(s * p.theta);
}

std::array<double, 2> grad_u(int m, const PlanePoint& p) {
    if (p.is_origin()) throw OriginSingularity();
    const double s = m + 0.5;
    const double rs = std::pow(p.r, m - 0.5);
    const double ang = (m - 0.5) * p.theta;
    return {s * rs * std::cos(ang), -s * rs * std::sin(ang)};
}

void eval_expansion_batch(const SlitExpansion& e, const PlanePoint* pts, double* out,
                          std::size_t n) {
    if (e.empty()) {
        for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
        return;
    }
    const int m0 = e.lowest_index();
    const int m1 = e.highest_index();
    if (m0 < 0) {
        for (std::size_t i = 0; i < n; ++i) {
            if (pts[i].is_origin()) throw NegativeHomogeneityAtOrigin();
        }
    }

    std::vector<double> coef(static_cast<std::size_t>(m1 - m0 + 1), 0.0);
    for (const auto& [m, c] : e.terms()) coef[static_cast<std::size_t>(m - m0)] = c;

    std::vector<double> rho(n), clo(n), clom1(n), twocos(n), r(n);
    for (std::size_t i = 0; i < n; ++i) {
        const PlanePoint& p = pts[i];
        r[i] = p.r;
        rho[i] = std::pow(p.r, m0 + 0.5);
        clo[i] = std::cos((m0 + 0.5) * p.theta);
        clom1[i] = std::cos((m0 - 0.5) * p.theta);
        twocos[i] = 2.0 * std::cos(p.theta);
    }

    simd::kernels().expansion_eval(rho.data(), clo.data(), clom1.data(), twocos.data(), r.data(),
                                   n, coef.data(), coef.size(), out);

    // Every basis function vanishes identically on the slit; enforce exactly.
    for (std::size_t i = 0; i < n; ++i) {
        if (pts[i].on_slit()) out[i] = 0.0;
    }
}

double eval_expansion(const SlitExpansion& e, const PlanePoint& p) {
    double out = 0.0;
    eval_expansion_batch(e, &p, &out, 1);
    return out;
}

std::array<double, 2> eval_expansion_grad(const SlitExpansion& e, const PlanePoint& p) {
    std::array<double, 2> g{0.0, 0.0};
    for (const auto& [m, c] : e.terms()) {
        const auto gm = grad_u(m, p);
        g[0] += c * gm[0];
        g[1] += c * gm[1];
    }
    return g;
}

SlitExpansion ddx1(const SlitExpansion& e) {
    SlitExpansion out;
    for (const auto& [m, c] : e.terms()) out.add_term(m - 1, c * (m + 0.5));
    return out;
}

double slit_normal_derivative(const SlitExpansion& e, double r) {
    if (!(r > 0.0)) throw Error("slit_normal_derivative requires r > 0");
    double out = 0.0;
    for (const auto& [m, c] : e.terms()) {
        const double sgn = (m % 2 == 0) ? -1.0 : 1.0;  // (-1)^(m+1)
        out += c * sgn * (m + 0.5) * std::pow(r, m - 0.5);
    }
    return out;
}

std::vector<double> u_to_w_coeffs(int k) {
    if (k < 1) throw Error("u_to_w_coeffs requires k >= 1");
    std::vector<double> c(static_cast<std::size_t>(2 * k) + 1, 1.0);
    // c_l = prod_{j=l}^{2k-1} (j + 1/2) = prod (2j+1) / 2^(2k-l), accumulated
    // exactly in integers while they fit.
    if (2 * k - 1 <= 27) {
        unsigned __int128 num = 1;
        for (int l = 2 * k - 1; l >= 1; --l) {
            num *= static_cast<unsigned>(2 * l + 1);
            c[static_cast<std::size_t>(l)] =
                static_cast<double>(num) / std::ldexp(1.0, 2 * k - l);
        }
    } else {
        double prod = 1.0;
        for (int l = 2 * k - 1; l >= 1; --l) {
            prod *= l + 0.5;
            c[static_cast<std::size_t>(l)] = prod;
        }
    }
    return c;
}

SlitExpansion translate_expansion(const SlitExpansion& e, double tau, int J) {
    if (J < 0) throw Error("translate_expansion requires J >= 0");
    SlitExpansion out = e;
    SlitExpansion term = e;
    double fac = 1.0;
    for (int j = 1; j <= J; ++j) {
        term = ddx1(term);
        if (term.empty()) break;
        fac *= tau / j;
        out += term * fac;
    }
    return out;
}

SlitExpansion conjugate_expansion(const SlitExpansion& e) {
    if (e.empty()) return e;
    const int lead = e.highest_index();
    SlitExpansion out;
    for (const auto& [m, c] : e.terms()) {
        const int offset = lead - m;
        out.add_term(m, (offset % 2 == 0) ? c : -c);
    }
    return out;
}

}  // namespace slitstone
