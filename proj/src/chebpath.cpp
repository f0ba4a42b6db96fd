#include "specmat/chebpath.hpp"
#include "specmat/canonical.hpp"
#include "specmat/errors.hpp"
#include "specmat/rootfind.hpp"
#include "specmat/secular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace specmat {

using std::abs;
constexpr double kPi = std::numbers::pi;

double lambda_curve_d(double al, int sign, double a) {
    double a4 = al * al * al * al;
    double root = std::sqrt((a4 - 1.0) * (a4 - 1.0) * a * a + 4.0 * al * al * (al * al + 1.0) * (al * al + 1.0));
    return (a * (a4 + 1.0) + sign * root) / (2.0 * al * al);
}

ChebPoint lambda_curve(int p, int q, int sign, double a) {
    if (p <= 0 || q <= 0) throw Error(ErrorKind::OutOfDomain, "p and q must be positive");
    int g = std::gcd(p, q);
    p /= g;
    q /= g;
    if (p <= q) throw Error(ErrorKind::OutOfDomain, "alpha = p/q must exceed 1");
    if (sign != 1 && sign != -1) throw Error(ErrorKind::OutOfDomain, "sign must be +1 or -1");
    if (!std::isfinite(a) || (sign > 0 ? a <= -1.0 : a <= 1.0))
        throw Error(ErrorKind::OutOfDomain, sign > 0 ? "need a > -1 on the + curve" : "need a > 1 on the - curve");
    ChebPoint pt;
    pt.p = p;
    pt.q = q;
    pt.sign = sign;
    pt.a = a;
    pt.d = lambda_curve_d(pt.alpha(), sign, a);
    Region reg = classify_region(pt.a, pt.d);
    if (reg.tag != RegionTag::R3) throw Error(ErrorKind::OutOfDomain, "point is not in R3");
    // on the curve b+ = alpha^2 b- and b+ + b- = a + d; ad + 1 cancels
    // badly near (-1, 1) so the product is only a consistency check
    double al2 = pt.alpha() * pt.alpha();
    pt.b_minus = (pt.a + pt.d) / (1.0 + al2);
    pt.b_plus = al2 * pt.b_minus;
    if (!(pt.b_minus > 0.0)) throw Error(ErrorKind::OutOfDomain, "point is not in R3");
    double prod = pt.a * pt.d + 1.0;
    if (abs(pt.b_plus * pt.b_minus - prod) > 1e-10 * (1.0 + abs(pt.a * pt.d)))
        throw Error(ErrorKind::OutOfDomain, "level-curve identity failed");
    if (abs(std::sqrt(pt.b_plus / pt.b_minus) - pt.alpha()) > 1e-10 * pt.alpha())
        throw Error(ErrorKind::OutOfDomain, "level-curve identity failed");
    return pt;
}

std::vector<double> chebyshev_T(int m) {
    if (m < 0) throw Error(ErrorKind::InvalidInput, "negative Chebyshev index");
    if (m > 64) throw Error(ErrorKind::DegreeTooHigh, "Chebyshev index above 64");
    std::vector<double> t0{1.0}, t1{0.0, 1.0};
    if (m == 0) return t0;
    for (int k = 1; k < m; ++k) {
        std::vector<double> t2(k + 2, 0.0);
        for (int i = 0; i <= k; ++i) t2[i + 1] += 2.0 * t1[i];
        for (int i = 0; i < static_cast<int>(t0.size()); ++i) t2[i] -= t0[i];
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    return t1;
}

double GPoly::operator()(double w) const {
    double s = 0.0;
    for (size_t k = coeffs.size(); k-- > 0;) s = s * w + coeffs[k];
    return s;
}

cplx GPoly::operator()(cplx w) const {
    cplx s = 0.0;
    for (size_t k = coeffs.size(); k-- > 0;) s = s * w + coeffs[k];
    return s;
}

GPoly build_G(const ChebPoint& pt) {
    // v+ = (g+, 2), v- = (g-, 2) diagonalize A4 with g+- = a - d +- s,
    // s = sqrt((a-d)^2 - 4), g+ g- = 4.  In the secular formula this gives
    // P = 4 g+ g- = 16 and Q = 4 (g+^2 alpha + g-^2 / alpha).
    double s = std::sqrt((pt.a - pt.d) * (pt.a - pt.d) - 4.0);
    double gp = pt.a - pt.d + s, gm = pt.a - pt.d - s;
    double al = std::sqrt(pt.b_plus / pt.b_minus);
    GPoly g;
    g.p = pt.p;
    g.q = pt.q;
    g.k1 = 32.0;
    g.k2 = 4.0 * (gp * gp * al + gm * gm / al);
    auto tp = chebyshev_T(pt.p + pt.q), tm = chebyshev_T(pt.p - pt.q);
    g.coeffs.assign(tp.size(), 0.0);
    g.coeffs[0] += g.k1;
    for (size_t i = 0; i < tp.size(); ++i) g.coeffs[i] += 0.5 * (g.k2 - g.k1) * tp[i];
    for (size_t i = 0; i < tm.size(); ++i) g.coeffs[i] -= 0.5 * (g.k2 + g.k1) * tm[i];

    SecularFn S = SecularFn::build(family_matrix(Family::A4, pt.a, pt.d));
    g.scale = 1.0 / S.gauge_constant({gp, 2.0}, {gm, 2.0});
    return g;
}

std::vector<GRoot> G_roots(const GPoly& g) {
    // deflate the root at w = 1 (z = 0)
    const int n = g.degree();
    std::vector<cplx> h(n);
    cplx carry = 0.0;
    for (int k = n; k >= 1; --k) {
        carry = carry * 1.0 + g.coeffs[k];
        h[k - 1] = carry;
    }
    std::vector<cplx> w{1.0};
    if (n >= 2) {
        auto r = polyroots(h);
        w.insert(w.end(), r.begin(), r.end());
    }
    // merge numerically split multiple roots
    std::vector<GRoot> out;
    std::vector<bool> used(w.size(), false);
    for (size_t i = 0; i < w.size(); ++i) {
        if (used[i]) continue;
        std::vector<size_t> grp{i};
        used[i] = true;
        for (size_t k = 0; k < grp.size(); ++k)
            for (size_t j = 0; j < w.size(); ++j)
                if (!used[j] && abs(w[j] - w[grp[k]]) <= 1e-7 * (1.0 + abs(w[j]))) {
                    used[j] = true;
                    grp.push_back(j);
                }
        cplx m = 0.0;
        for (size_t j : grp) m += w[j];
        m /= static_cast<double>(grp.size());
        if (abs(m - 1.0) <= 1e-7) m = 1.0;
        if (abs(m + 1.0) <= 1e-7) m = -1.0;
        if (abs(m.imag()) <= 1e-14 * (1.0 + abs(m))) m = m.real();
        out.push_back({m, static_cast<int>(grp.size())});
    }
    return out;
}

namespace {

struct Cand {
    cplx mu, x;
    int order;
    int root;
};

} // namespace

Spectrum cheb_spectrum(const ChebPoint& pt, int n_max, bool allow_high_degree) {
    if (pt.p + pt.q > 64) throw Error(ErrorKind::DegreeTooHigh, "degree above 64");
    if (pt.p + pt.q > kChebDegreeCap && !allow_high_degree)
        throw Error(ErrorKind::DegreeTooHigh, "p+q above 20 is numerically unstable (override to force)");
    if (n_max < 0 || n_max > 10000) throw Error(ErrorKind::InvalidInput, "n_max must lie in [0, 10^4]");
    GPoly g = build_G(pt);
    auto roots = G_roots(g);
    double sc = pt.q * std::sqrt(pt.b_plus);

    std::vector<Cand> cand;
    for (size_t r = 0; r < roots.size(); ++r) {
        cplx th = std::acos(roots[r].w);
        // w = +-1 is a critical value of cos: order doubles and the +- images coincide
        bool crit = roots[r].w == 1.0 || roots[r].w == -1.0;
        int order = crit ? 2 * roots[r].multiplicity : roots[r].multiplicity;
        for (int n = crit ? 0 : -n_max; n <= n_max; ++n) {
            cplx x = (th + 2.0 * kPi * n) * sc;
            cand.push_back({x * x, x, order, static_cast<int>(r)});
        }
    }
    std::sort(cand.begin(), cand.end(), [](const Cand& u, const Cand& v) {
        if (abs(u.mu) != abs(v.mu)) return abs(u.mu) < abs(v.mu);
        return std::arg(u.mu) < std::arg(v.mu);
    });

    CMatrix2 A = family_matrix(Family::A4, pt.a, pt.d);
    SecularFn S = SecularFn::build(A);
    Spectrum sp;
    sp.method = Provenance::Chebyshev;
    sp.matrix = A;
    double xmax = 0.0;
    std::vector<bool> used(cand.size(), false);
    for (size_t i = 0; i < cand.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        int order = cand[i].order;
        double tol = 1e-9 * (1.0 + abs(cand[i].mu));
        for (size_t j = i + 1; j < cand.size() && abs(cand[j].mu) - abs(cand[i].mu) <= tol; ++j)
            if (!used[j] && abs(cand[j].mu - cand[i].mu) <= tol) {
                used[j] = true;
                order += cand[j].order;
            }
        cplx x = cand[i].x;
        if (x.real() < 0.0 || (x.real() == 0.0 && x.imag() < 0.0)) x = -x;
        Eigenvalue ev;
        ev.lambda = x;
        ev.analytic_order = order;
        if (abs(cand[i].mu) <= 1e-12) {
            ev.value = 0.0;
            ev.lambda = 0.0;
            ev.multiplicity = 1;
            sp.analytic_order_at_zero = order;
        } else {
            ev.value = cand[i].mu;
            ev.multiplicity = order >= 2 ? std::max(1, geometric_multiplicity(S.jordan(), x)) : 1;
            ev.residual = S.eval_scaled(x).relative();
        }
        xmax = std::max(xmax, abs(x));
        sp.eigenvalues.push_back(ev);
    }
    xmax = std::max(xmax, 1.0);
    sp.search_region = Rect(0.0, xmax, -xmax, xmax);
    sp.sort();
    return sp;
}

std::vector<ChebSweepRow> cheb_sweep(int p, int q, int sign, double a0, double a1, int steps, int n_max) {
    if (steps < 2) throw Error(ErrorKind::InvalidInput, "a sweep needs at least 2 steps");
    std::vector<ChebSweepRow> rows;
    for (int s = 0; s < steps; ++s) {
        double a = a0 + (a1 - a0) * s / (steps - 1);
        ChebPoint pt = lambda_curve(p, q, sign, a);
        GPoly g = build_G(pt);
        auto roots = G_roots(g);
        double sc = pt.q * std::sqrt(pt.b_plus);
        for (size_t r = 0; r < roots.size(); ++r) {
            cplx th = std::acos(roots[r].w);
            for (int n = -n_max; n <= n_max; ++n) {
                cplx x = (th + 2.0 * kPi * n) * sc;
                rows.push_back({pt.a, pt.d, x * x, static_cast<int>(r)});
            }
        }
    }
    return rows;
}

} // namespace specmat
