#include "slitstone/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace slitstone::poly {

double eval(const Poly& p, double x) {
    double acc = 0.0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

Poly derivative(const Poly& p) {
    if (p.size() <= 1) return {};
    Poly d(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * static_cast<double>(i);
    return d;
}

namespace {

double max_abs(const Poly& p) {
    double m = 0.0;
    for (double c : p) m = std::max(m, std::fabs(c));
    return m;
}

void strip_leading(Poly& p, double thr) {
    while (!p.empty() && std::fabs(p.back()) <= thr) p.pop_back();
}

// Scaled evaluation magnitude sum |c_i| |x|^i; the natural yardstick for
// deciding whether eval(p, x) is "zero" at x.
double eval_scale(const Poly& p, double x) {
    const double ax = std::fabs(x);
    double acc = 0.0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * ax + std::fabs(p[i]);
    return acc;
}

}  // namespace

Poly normalized(const Poly& p, double rel) {
    const double m = max_abs(p);
    if (m == 0.0) return {};
    const double thr = rel * m;
    Poly q;
    q.reserve(p.size());
    for (double c : p) q.push_back(std::fabs(c) <= thr ? 0.0 : c / m);
    strip_leading(q, 0.0);
    return q;
}

int strip_root_at_zero(Poly& p, double rel) {
    const double thr = rel * max_abs(p);
    std::size_t j = 0;
    while (j < p.size() && std::fabs(p[j]) <= thr) ++j;
    if (j == p.size()) {
        p.clear();
        return 0;
    }
    p.erase(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(j));
    return static_cast<int>(j);
}

double cauchy_bound(const Poly& p) {
    if (p.empty()) return 1.0;
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) m = std::max(m, std::fabs(p[i]));
    return 1.0 + m / std::fabs(p.back());
}

namespace {

// Remainder of a by b, both nonzero, deg(a) >= deg(b).
Poly remainder(Poly a, const Poly& b) {
    while (a.size() >= b.size() && !a.empty()) {
        const double f = a.back() / b.back();
        const std::size_t off = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
        a.pop_back();
        // Cancellation can leave near-zero leading junk; prune it so the
        // division chain cannot divide by noise.
        strip_leading(a, 1e-12 * max_abs(a));
    }
    return a;
}

}  // namespace

std::vector<Poly> sturm_chain(const Poly& p) {
    std::vector<Poly> chain;
    Poly p0 = normalized(p);
    if (p0.empty()) return chain;
    chain.push_back(p0);
    Poly p1 = normalized(derivative(p0));
    if (p1.empty()) return chain;
    chain.push_back(p1);
    while (chain.back().size() > 1) {
        Poly rem = remainder(chain[chain.size() - 2], chain.back());
        for (double& c : rem) c = -c;
        rem = normalized(rem);
        if (rem.empty()) break;
        chain.push_back(std::move(rem));
    }
    return chain;
}

int sign_changes_at(const std::vector<Poly>& chain, double x) {
    int changes = 0;
    int prev = 0;
    for (const Poly& q : chain) {
        const double v = eval(q, x);
        const double s = eval_scale(q, x);
        int sgn = 0;
        if (std::fabs(v) > 1e-13 * s) sgn = v > 0.0 ? 1 : -1;
        if (sgn != 0) {
            if (prev != 0 && sgn != prev) ++changes;
            prev = sgn;
        }
    }
    return changes;
}

int count_roots(const std::vector<Poly>& chain, double a, double b) {
    if (chain.empty()) return 0;
    return sign_changes_at(chain, a) - sign_changes_at(chain, b);
}

namespace {

struct Isolator {
    const std::vector<Poly>& chain;
    std::vector<std::pair<double, double>> intervals;

    void isolate(double a, double b, int count, int depth) {
        if (count <= 0) return;
        if ((count == 1 && b - a <= 1e-9 * std::max(1.0, b)) || depth > 120) {
            intervals.emplace_back(a, b);
            return;
        }
        const double mid = 0.5 * (a + b);
        const int left = count_roots(chain, a, mid);
        isolate(a, mid, left, depth + 1);
        isolate(mid, b, count - left, depth + 1);
    }
};

}  // namespace

NonnegVerdict nonneg_on_positive_axis(const Poly& p, double zero_tol) {
    NonnegVerdict out;
    Poly q = normalized(p);
    if (q.empty()) {
        out.nonneg = true;
        out.zero_margin = true;
        return out;
    }
    strip_root_at_zero(q);
    if (q.size() == 1) {
        out.margin = q[0];
        out.nonneg = q[0] > 0.0;
        return out;
    }

    // Substitute x = s y with the Fujiwara root bound as s. All roots of the
    // rescaled polynomial lie in |y| <= 2 and its leading term dominates the
    // coefficient range, which keeps the remainder cascade conditioned when
    // the input coefficients span many decades. Root counts and the relative
    // margin are invariant under positive rescaling of the variable.
    const std::size_t deg = q.size() - 1;
    double s = 0.0;
    for (std::size_t i = 0; i < deg; ++i) {
        if (q[i] != 0.0) {
            s = std::max(s, std::pow(std::fabs(q[i] / q[deg]),
                                     1.0 / static_cast<double>(deg - i)));
        }
    }
    if (s > 0.0 && std::isfinite(s)) {
        double si = 1.0;
        for (std::size_t i = 0; i <= deg; ++i) {
            q[i] *= si;
            si *= s;
        }
        q = normalized(q);
    }

    const double bound = cauchy_bound(q);
    const auto chain = sturm_chain(q);
    out.roots = count_roots(chain, 0.0, bound);

    Isolator iso{chain, {}};
    iso.isolate(0.0, bound, out.roots, 0);
    std::sort(iso.intervals.begin(), iso.intervals.end());

    std::vector<double> samples;
    if (iso.intervals.empty()) {
        samples.push_back(std::max(1.0, bound));
    } else {
        samples.push_back(0.5 * iso.intervals.front().first);
        for (std::size_t i = 0; i + 1 < iso.intervals.size(); ++i) {
            samples.push_back(0.5 * (iso.intervals[i].second + iso.intervals[i + 1].first));
        }
        samples.push_back(bound + 1.0);
    }

    double margin = std::numeric_limits<double>::infinity();
    for (double x : samples) {
        if (!(x > 0.0)) continue;  // a root interval may start at 0 exactly
        margin = std::min(margin, eval(q, x) / eval_scale(q, x));
    }
    if (!std::isfinite(margin)) margin = 0.0;

    out.margin = margin;
    out.nonneg = margin >= -zero_tol;
    out.zero_margin = out.nonneg && (out.roots > 0 || margin <= zero_tol);
    return out;
}

}  // namespace slitstone::poly
