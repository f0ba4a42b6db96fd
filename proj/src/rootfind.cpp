#include "specmat/rootfind.hpp"
#include "specmat/errors.hpp"
#include "specmat/secular.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>

namespace specmat {

using std::abs;
constexpr double kPi = std::numbers::pi;

cplx WindingResult::centroid() const {
    return count > 0 ? moment / static_cast<double>(count) : cplx(rect.center());
}

namespace {

struct Sample {
    cplx z;
    ScaledValue v;
    cplx g;
    bool zero = false;
};

Sample take(const HolomorphicFn& f, cplx z) {
    Sample s;
    s.z = z;
    s.v = f.value(z);
    double m = abs(s.v.mantissa);
    if (!(s.v.magnitude > 0.0) || !std::isfinite(m) || m <= 1e-12 * s.v.magnitude) {
        s.zero = true;
        return s;
    }
    s.g = f.log_derivative(z);
    if (!std::isfinite(s.g.real()) || !std::isfinite(s.g.imag())) s.zero = true;
    return s;
}

struct PanelSum {
    cplx dL, moment;
    long samples = 0;
    bool hit_zero = false;
};

// Accept a panel when the trapezoid of f'/f reproduces the exact log
// increment and h |f'/f| is small at both ends; otherwise bisect.  The
// second test catches a zero much closer to the chord than h, where the
// phase wraps by 2 pi and the trapezoid cancels by symmetry.
PanelSum integrate_panel(const HolomorphicFn& f, const Sample& a, const Sample& b, double tau, double hmin) {
    PanelSum out;
    std::vector<std::pair<Sample, Sample>> stack;
    stack.emplace_back(a, b);
    while (!stack.empty()) {
        auto [s0, s1] = stack.back();
        stack.pop_back();
        double darg = std::arg(s1.v.mantissa * std::conj(s0.v.mantissa));
        double dln = std::log(abs(s1.v.mantissa)) - std::log(abs(s0.v.mantissa)) + (s1.v.log_scale - s0.v.log_scale);
        cplx dl(dln, darg);
        cplx T = 0.5 * (s1.z - s0.z) * (s0.g + s1.g);
        double hg = abs(s1.z - s0.z) * std::max(abs(s0.g), abs(s1.g));
        if (abs(darg) <= 0.5 * kPi && abs(T - dl) <= tau && hg <= 2.5) {
            out.dL += dl;
            out.moment += 0.5 * (s0.z + s1.z) * dl;
            continue;
        }
        if (abs(s1.z - s0.z) < hmin) {
            out.hit_zero = true;
            return out;
        }
        Sample m = take(f, 0.5 * (s0.z + s1.z));
        ++out.samples;
        if (m.zero) {
            out.hit_zero = true;
            return out;
        }
        stack.emplace_back(m, s1);
        stack.emplace_back(s0, m);
    }
    return out;
}

struct PassResult {
    double turns = 0.0;
    cplx moment;
    long samples = 0;
};

PassResult polygon_pass(const HolomorphicFn& f, const std::vector<cplx>& verts, double tau, const RootOptions& opt) {
    const size_t nv = verts.size();
    double perim = 0.0;
    for (size_t i = 0; i < nv; ++i) perim += abs(verts[(i + 1) % nv] - verts[i]);
    double freq = f.frequency();

    std::vector<cplx> nodes;
    for (size_t i = 0; i < nv; ++i) {
        cplx p = verts[i], q = verts[(i + 1) % nv];
        double len = abs(q - p);
        int n = static_cast<int>(std::clamp(std::ceil(len * freq * 2.0 / kPi), 4.0, 4096.0));
        for (int k = 0; k < n; ++k) nodes.push_back(p + (q - p) * (static_cast<double>(k) / n));
    }
    const long nn = static_cast<long>(nodes.size());
    std::vector<Sample> s(nn);
    bool par = opt.exec == Exec::Parallel;

#pragma omp parallel for schedule(static) if (par)
    for (long i = 0; i < nn; ++i) s[i] = take(f, nodes[i]);

    for (const auto& x : s)
        if (x.zero) throw Error(ErrorKind::BoundaryZero, "zero on contour sample");

    std::vector<PanelSum> ps(nn);
    double hmin = 1e-13 * perim;
#pragma omp parallel for schedule(dynamic, 4) if (par)
    for (long i = 0; i < nn; ++i) ps[i] = integrate_panel(f, s[i], s[(i + 1) % nn], tau, hmin);

    PassResult r;
    r.samples = nn;
    cplx total;
    for (const auto& p : ps) {
        if (p.hit_zero) throw Error(ErrorKind::BoundaryZero, "zero on contour");
        total += p.dL;
        r.moment += p.moment;
        r.samples += p.samples;
    }
    if (r.samples > opt.max_samples)
        throw Error(ErrorKind::NonConvergent, "winding refinement exceeded the sample cap");
    r.turns = total.imag() / (2.0 * kPi);
    r.moment /= cplx(0.0, 2.0 * kPi);
    return r;
}

std::vector<cplx> rect_vertices(const Rect& r) {
    return {{r.re_min, r.im_min}, {r.re_max, r.im_min}, {r.re_max, r.im_max}, {r.re_min, r.im_max}};
}

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double unit(std::uint64_t x) { return (splitmix(x) >> 11) * 0x1.0p-53; }

} // namespace

WindingResult polygon_winding(const HolomorphicFn& f, const std::vector<cplx>& verts, const RootOptions& opt) {
    double tau = 0.5;
    PassResult prev = polygon_pass(f, verts, tau, opt);
    long samples = prev.samples;
    for (int k = 0; k < 8; ++k) {
        tau *= 0.5;
        PassResult cur = polygon_pass(f, verts, tau, opt);
        samples += cur.samples;
        if (samples > opt.max_samples)
            throw Error(ErrorKind::NonConvergent, "winding refinement exceeded the sample cap");
        double n = std::round(cur.turns);
        if (std::round(prev.turns) == n && abs(cur.turns - n) <= 1e-3 && abs(prev.turns - n) <= 1e-3) {
            WindingResult w;
            w.count = static_cast<int>(n);
            w.moment = cur.moment;
            w.samples = samples;
            return w;
        }
        prev = cur;
    }
    throw Error(ErrorKind::NonConvergent, "winding number did not settle");
}

WindingResult winding(const HolomorphicFn& f, const Rect& rect, const RootOptions& opt) {
    Rect r = rect;
    for (int attempt = 0;; ++attempt) {
        try {
            WindingResult w = polygon_winding(f, rect_vertices(r), opt);
            if (w.count < 0) throw Error(ErrorKind::NonConvergent, "negative winding count");
            w.rect = r;
            w.dilations = attempt;
            return w;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::BoundaryZero) throw;
            if (attempt >= opt.max_dilations)
                throw Error(ErrorKind::BoundaryZero, "zero on the boundary of " + rect.str() + " after dilation");
            double u = unit(opt.seed * 0x100000001b3ULL + static_cast<std::uint64_t>(attempt));
            r = rect.dilated(1.0 + 1e-3 * std::max(u, 1e-3));
        }
    }
}

int winding_count(const HolomorphicFn& f, const Rect& rect, const RootOptions& opt) {
    return winding(f, rect, opt).count;
}

namespace {

struct Cell {
    Rect r;
    int count = 0;
    cplx moment;
    std::uint64_t id = 1;
    int depth = 0;
};

struct CellOut {
    std::vector<Zero> zeros;
    std::vector<Cell> children;
    std::exception_ptr err;
};

bool newton(const HolomorphicFn& f, cplx z0, const Rect& cell, double tol, cplx& out) {
    cplx z = z0;
    double span = cell.diam();
    for (int it = 0; it < 80; ++it) {
        ScaledValue v = f.value(z);
        if (v.mantissa == 0.0) {
            out = z;
            return cell.contains(z, 1e-9 * span);
        }
        cplx g = f.log_derivative(z);
        if (!std::isfinite(g.real()) || !std::isfinite(g.imag()) || g == 0.0) return false;
        cplx step = 1.0 / g;
        z -= step;
        if (abs(z - z0) > 2.0 * span + 1e-12) return false;
        if (abs(step) <= 1e-3 * tol * (1.0 + abs(z))) {
            out = z;
            return cell.contains(z, 1e-9 * span);
        }
    }
    return false;
}

// Count and centroid on a circle: phase-tracked count on a 64-gon, centroid
// from the trapezoid rule for (1/2 pi i) \oint z f'/f, which converges
// geometrically for a cluster well inside the circle.
enum class Probe { Ok, Mismatch, Noise };

Probe probe(const HolomorphicFn& f, cplx c, double r, int expect, const RootOptions& opt, cplx& centroid) {
    const int n = 64;
    std::vector<cplx> v(n);
    for (int k = 0; k < n; ++k) v[k] = c + std::polar(r, 2.0 * kPi * k / n);
    RootOptions o = opt;
    o.exec = Exec::Serial;
    try {
        if (polygon_winding(f, v, o).count != expect) return Probe::Mismatch;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::BoundaryZero) return Probe::Noise;
        if (e.kind() == ErrorKind::NonConvergent) return Probe::Mismatch;
        throw;
    }
    cplx acc;
    const int m = 256;
    for (int k = 0; k < m; ++k) {
        cplx e = std::polar(1.0, 2.0 * kPi * k / m);
        cplx z = c + r * e;
        acc += (z - c) * f.log_derivative(z) * (r * e);
    }
    centroid = c + acc / static_cast<double>(m) / static_cast<double>(expect);
    return std::isfinite(centroid.real()) && std::isfinite(centroid.imag()) ? Probe::Ok : Probe::Mismatch;
}

std::vector<Cell> split(const HolomorphicFn& f, const Cell& cell, const RootOptions& opt) {
    RootOptions o = opt;
    o.exec = Exec::Serial;
    for (int attempt = 0; attempt < 8; ++attempt) {
        std::uint64_t key = splitmix(opt.seed ^ splitmix(cell.id * 131 + attempt));
        double ox = 0.2 * (unit(key) - 0.5), oy = 0.2 * (unit(key + 1) - 0.5);
        const Rect& r = cell.r;
        double mx = r.re_min + (0.5 + ox) * r.width();
        double my = r.im_min + (0.5 + oy) * r.height();
        Rect q[4] = {Rect(r.re_min, mx, r.im_min, my), Rect(mx, r.re_max, r.im_min, my),
                     Rect(r.re_min, mx, my, r.im_max), Rect(mx, r.re_max, my, r.im_max)};
        std::vector<Cell> kids;
        int sum = 0;
        try {
            for (int k = 0; k < 4; ++k) {
                WindingResult w = polygon_winding(f, rect_vertices(q[k]), o);
                sum += w.count;
                if (w.count > 0)
                    kids.push_back({q[k], w.count, w.moment, cell.id * 4 + k, cell.depth + 1});
            }
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::BoundaryZero) continue;
            throw;
        }
        if (sum == cell.count) return kids;
    }
    throw Error(ErrorKind::NonConvergent, "could not split cell " + cell.r.str() + " consistently");
}

// the contour centroid is poor when the cluster sits near the circle;
// modified Newton z -= m f/f' fixes that for a genuine multiple zero
cplx polish(const HolomorphicFn& f, cplx z0, int m, double r) {
    cplx z = z0;
    double best = f.value(z).relative();
    for (int it = 0; it < 60; ++it) {
        cplx g = f.log_derivative(z);
        if (!std::isfinite(g.real()) || !std::isfinite(g.imag()) || g == 0.0) break;
        cplx step = static_cast<double>(m) / g;
        cplx zn = z - step;
        if (abs(zn - z0) > r) break;
        double v = f.value(zn).relative();
        if (!(v < best)) break;
        z = zn;
        best = v;
        if (abs(step) <= 1e-15 * (1.0 + abs(z))) break;
    }
    return z;
}

CellOut process(const HolomorphicFn& f, const Cell& cell, const RootOptions& opt) {
    CellOut out;
    if (cell.count == 0) return out;
    cplx c = cell.moment / static_cast<double>(cell.count);
    double s = 1.0 + abs(c);
    bool tiny = cell.r.diam() <= 1e-11 * s || cell.depth > 60;

    if (cell.count == 1) {
        cplx z;
        if (newton(f, c, cell.r, opt.tol, z)) {
            out.zeros.push_back({z, 1, f.value(z).relative()});
            return out;
        }
        if (tiny) {
            out.zeros.push_back({c, 1, f.value(c).relative()});
            return out;
        }
    } else {
        // a high-order zero sits inside a disc where |f| is below the noise
        // floor; the inner circle landing in that disc still means one cluster
        cplx c1, c2;
        for (double r : {1e-3 * s, 1e-2 * s}) {
            if (r > cell.r.diam()) break;
            if (probe(f, c, r, cell.count, opt, c1) == Probe::Ok &&
                probe(f, c1, 0.1 * r, cell.count, opt, c2) != Probe::Mismatch) {
                cplx z = polish(f, c1, cell.count, r);
                out.zeros.push_back({z, cell.count, f.value(z).relative()});
                return out;
            }
        }
        if (tiny) {
            out.zeros.push_back({c, cell.count, f.value(c).relative()});
            return out;
        }
    }
    out.children = split(f, cell, opt);
    return out;
}

} // namespace

ZeroSet isolate(const HolomorphicFn& f, const Rect& rect, const RootOptions& opt) {
    WindingResult top = winding(f, rect, opt);
    ZeroSet zs;
    zs.rect = top.rect;
    zs.total = top.count;
    std::vector<Cell> level;
    if (top.count > 0) level.push_back({top.rect, top.count, top.moment, 1, 0});
    bool par = opt.exec == Exec::Parallel;
    while (!level.empty()) {
        const long n = static_cast<long>(level.size());
        std::vector<CellOut> outs(n);
#pragma omp parallel for schedule(dynamic, 1) if (par)
        for (long i = 0; i < n; ++i) {
            try {
                outs[i] = process(f, level[i], opt);
            } catch (...) {
                outs[i].err = std::current_exception();
            }
        }
        std::vector<Cell> next;
        for (auto& o : outs) {
            if (o.err) std::rethrow_exception(o.err);
            zs.zeros.insert(zs.zeros.end(), o.zeros.begin(), o.zeros.end());
            next.insert(next.end(), o.children.begin(), o.children.end());
        }
        level.swap(next);
    }
    int sum = 0;
    for (const auto& z : zs.zeros) sum += z.multiplicity;
    if (sum != zs.total) throw Error(ErrorKind::NonConvergent, "zero count not conserved during subdivision");
    std::sort(zs.zeros.begin(), zs.zeros.end(), [](const Zero& a, const Zero& b) {
        if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
    });
    return zs;
}

std::vector<Zero> isolate_zeros(const HolomorphicFn& f, const Rect& rect, const RootOptions& opt) {
    return isolate(f, rect, opt).zeros;
}

Spectrum spectrum(const CMatrix2& A, const Rect& rect, const RootOptions& opt) {
    Spectrum sp;
    sp.method = Provenance::SecularRoots;
    sp.search_region = rect;
    sp.matrix = A;
    if (!A.finite()) throw Error(ErrorKind::InvalidInput, "matrix has non-finite entries");
    if (A.is_singular()) {
        sp.whole_plane = true;
        return sp;
    }
    SecularFn S = SecularFn::build(A);

    Rect search = rect;
    if (rect.re_min <= 0.0) {
        double eps = std::min(0.5, 0.02 * std::max(rect.width(), rect.height()));
        search = Rect(std::min(rect.re_min, -eps), rect.re_max, rect.im_min, rect.im_max);
    }
    ZeroSet zs = isolate(S, search, opt);

    if (S.near_defective()) {
        SecularFn T = S.defective_companion();
        RootOptions o = opt;
        int n1 = winding(S, zs.rect, o).count, n2 = winding(T, zs.rect, o).count;
        if (n1 != n2)
            throw Error(ErrorKind::IllConditioned, "near-defective A: diagonalizable and defective formulas disagree");
    }

    for (const Zero& z : zs.zeros) {
        double s = 1.0 + abs(z.z);
        double d = 1e-9 * s;
        Eigenvalue ev;
        ev.residual = z.residual;
        ev.analytic_order = z.multiplicity;
        if (abs(z.z) <= 1e-7) {
            ev.value = 0.0;
            ev.lambda = 0.0;
            ev.multiplicity = 1;
            sp.analytic_order_at_zero = z.multiplicity;
        } else if (z.z.real() > d || (abs(z.z.real()) <= d && z.z.imag() >= -d)) {
            ev.lambda = z.z;
            ev.value = z.z * z.z;
            ev.multiplicity = z.multiplicity >= 2 ? std::max(1, geometric_multiplicity(S.jordan(), z.z)) : 1;
        } else {
            continue;
        }
        bool dup = false;
        for (const auto& e : sp.eigenvalues)
            if (abs(e.value - ev.value) <= 1e-8 * (1.0 + abs(ev.value))) dup = true;
        if (!dup) sp.eigenvalues.push_back(ev);
    }
    sp.sort();
    return sp;
}

Spectrum spectrum_count(const CMatrix2& A, int count, const RootOptions& opt) {
    if (count < 1) throw Error(ErrorKind::InvalidInput, "count must be positive");
    if (!A.finite()) throw Error(ErrorKind::InvalidInput, "matrix has non-finite entries");
    if (A.is_singular()) {
        Spectrum sp;
        sp.matrix = A;
        sp.whole_plane = true;
        return sp;
    }
    Eigen2 e = eig2(A);
    double root = std::sqrt(std::max(abs(e.a_plus), abs(e.a_minus)));
    double rho = kPi * root * (0.5 * count + 1.0);
    for (int grow = 0; grow < 40; ++grow, rho *= 1.5) {
        Spectrum sp = spectrum(A, Rect(0.0, rho, -rho, rho), opt);
        Spectrum out = sp;
        out.eigenvalues.clear();
        int have = 0;
        for (const auto& ev : sp.eigenvalues) {
            if (abs(ev.value) > rho * rho) break;
            if (have >= count) break;
            out.eigenvalues.push_back(ev);
            have += ev.algebraic();
        }
        if (have >= count) return out;
    }
    throw Error(ErrorKind::NonConvergent, "could not enclose the requested number of eigenvalues");
}

cplx polyval(const std::vector<cplx>& c, cplx w) {
    cplx p = 0.0;
    for (size_t k = c.size(); k-- > 0;) p = p * w + c[k];
    return p;
}

namespace {

double backward_error(const std::vector<cplx>& c, cplx w) {
    double s = 0.0, wk = 1.0, aw = abs(w);
    for (const auto& ck : c) {
        s += abs(ck) * wk;
        wk *= aw;
    }
    return s > 0.0 ? abs(polyval(c, w)) / s : 0.0;
}

void horner2(const std::vector<cplx>& c, cplx w, cplx& p, cplx& dp) {
    p = 0.0;
    dp = 0.0;
    for (size_t k = c.size(); k-- > 0;) {
        dp = dp * w + p;
        p = p * w + c[k];
    }
}

void polish(const std::vector<cplx>& c, std::vector<cplx>& r) {
    for (auto& w : r) {
        for (int it = 0; it < 4; ++it) {
            cplx p, dp;
            horner2(c, w, p, dp);
            if (p == 0.0 || dp == 0.0) break;
            cplx nw = w - p / dp;
            if (backward_error(c, nw) >= backward_error(c, w)) break;
            w = nw;
        }
    }
}

bool all_good(const std::vector<cplx>& c, const std::vector<cplx>& r) {
    for (const auto& w : r)
        if (!(backward_error(c, w) <= 1e-10)) return false;
    return true;
}

std::vector<cplx> aberth(const std::vector<cplx>& c) {
    const int n = static_cast<int>(c.size()) - 1;
    double r0 = 0.0;
    for (int k = 0; k < n; ++k) r0 = std::max(r0, std::pow(abs(c[k] / c[n]), 1.0 / (n - k)));
    r0 = std::max(r0, 1e-3);
    std::vector<cplx> z(n);
    for (int k = 0; k < n; ++k) z[k] = std::polar(r0, 2.0 * kPi * k / n + 0.4);
    for (int it = 0; it < 500; ++it) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx p, dp;
            horner2(c, z[i], p, dp);
            if (p == 0.0) continue;
            cplx ratio = p / dp;
            cplx s = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != i) s += 1.0 / (z[i] - z[j]);
            cplx w = ratio / (1.0 - ratio * s);
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
            z[i] -= w;
            worst = std::max(worst, abs(w) / (1.0 + abs(z[i])));
        }
        if (worst <= 1e-15) break;
    }
    return z;
}

std::vector<cplx> companion(const std::vector<cplx>& c) {
    const int n = static_cast<int>(c.size()) - 1;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) M(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) M(i, n - 1) = -c[i] / c[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::NonConvergent, "companion eigensolver failed");
    std::vector<cplx> r(n);
    for (int i = 0; i < n; ++i) r[i] = es.eigenvalues()(i);
    return r;
}

} // namespace

std::vector<cplx> polyroots(const std::vector<cplx>& coeffs) {
    if (coeffs.size() < 2) throw Error(ErrorKind::InvalidInput, "polynomial of degree < 1");
    if (coeffs.back() == 0.0) throw Error(ErrorKind::InvalidInput, "leading coefficient is zero");
    if (coeffs.size() - 1 > 64) throw Error(ErrorKind::DegreeTooHigh, "degree above 64");
    for (const auto& c : coeffs)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw Error(ErrorKind::InvalidInput, "non-finite coefficient");

    std::vector<cplx> r = aberth(coeffs);
    polish(coeffs, r);
    if (!all_good(coeffs, r)) {
        r = companion(coeffs);
        polish(coeffs, r);
        if (!all_good(coeffs, r)) throw Error(ErrorKind::NonConvergent, "polynomial roots failed the residual check");
    }
    std::sort(r.begin(), r.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return r;
}

} // namespace specmat
