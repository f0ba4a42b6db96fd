// Acceptance checks.  `acceptance N` runs criterion N, no argument runs all.
// One PASS/FAIL line per criterion; exit status is the number of failures.

#include "corpus.hpp"
#include "util.hpp"

#include "specmat/canonical.hpp"
#include "specmat/chebpath.hpp"
#include "specmat/errors.hpp"
#include "specmat/oracle.hpp"
#include "specmat/rootfind.hpp"
#include "specmat/secular.hpp"
#include "specmat/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>

using namespace specmat;
using namespace testutil;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Result {
    bool pass = true;
    std::ostringstream note;

    void need(bool ok, const std::string& what)
    {
        if (!ok) {
            if (!pass)
                note << "; ";
            note << what;
            pass = false;
        }
    }
};

using ldc = std::complex<long double>;

// arccos(z) = -i log(z + i sqrt(1 - z^2)) in long double
ldc acos_ld(ldc z)
{
    const ldc i(0, 1);
    return -i * std::log(z + i * std::sqrt(1.0L - z * z));
}

std::vector<cplx> distinct_values(const Spectrum& s)
{
    std::vector<cplx> v;
    for (const auto& e : s.eigenvalues) v.push_back(e.value);
    return v;
}

// each value in got must be within tol(ref) of a distinct entry of ref
bool match_sets(const std::vector<cplx>& got, std::vector<cplx> ref, const std::function<double(cplx)>& tol,
                std::string& why)
{
    for (cplx g : got) {
        size_t best = ref.size();
        double bd = 1e300;
        for (size_t j = 0; j < ref.size(); ++j)
            if (std::abs(g - ref[j]) < bd) {
                bd = std::abs(g - ref[j]);
                best = j;
            }
        if (best == ref.size() || bd > tol(ref[best])) {
            std::ostringstream o;
            o << "value (" << g.real() << "," << g.imag() << ") off by " << bd;
            why = o.str();
            return false;
        }
        ref.erase(ref.begin() + best);
    }
    return true;
}

Result c1()
{
    Result r;
    auto t0 = Clock::now();
    Spectrum sp = spectrum_count(sample5(), 16);
    double secs = since(t0);

    const long double PI = 3.141592653589793238462643383279503L;
    ldc lp = acos_ld(ldc(-0.5L, 0.5L)), lm = acos_ld(ldc(-0.5L, -0.5L));
    // computed lambda+- : the zeros of EV nearest the reference
    for (ldc ref : {lp, lm}) {
        // EV zeros are reported with Re >= 0; arccos(-1/2 +- i/2) already has Re > 0
        double bd = 1e300;
        for (const auto& e : sp.eigenvalues) bd = std::min<double>(bd, std::abs(ldc(e.lambda) - ref));
        std::ostringstream o;
        o << "lambda(" << double(ref.real()) << "," << double(ref.imag()) << ") off by " << bd;
        r.need(bd <= 1e-9, o.str());
    }

    std::vector<ldc> ref{0.0L};
    for (int k = -8; k <= 8; ++k) {
        if (k > 0)
            ref.push_back(4.0L * k * k * PI * PI);
        for (ldc l : {lp, lm}) ref.push_back((l + 2.0L * k * PI) * (l + 2.0L * k * PI));
    }
    std::sort(ref.begin(), ref.end(), [](ldc x, ldc y) { return std::abs(x) < std::abs(y); });
    std::vector<cplx> want;
    for (int i = 0; i < 10; ++i) want.emplace_back(double(ref[i].real()), double(ref[i].imag()));
    std::vector<cplx> got = distinct_values(sp);
    r.need(got.size() >= 10, "fewer than 10 eigenvalues");
    if (got.size() >= 10) {
        got.resize(10);
        std::string why;
        r.need(match_sets(got, want, [](cplx z) { return 1e-8 * std::max(1.0, std::abs(z)); }, why), why);
    }
    r.need(secs < 5.0, "runtime " + std::to_string(secs) + " s");
    if (r.pass)
        r.note << "10 smallest match, lambda+- to 1e-9, " << secs << " s";
    return r;
}

Result c2()
{
    Result r;
    Rng rng(2024);
    auto t0 = Clock::now();
    int bad = 0;
    double worst = 0;
    for (int m = 0; m < 20; ++m) {
        double a = rng.u(0.2, 3.0) * (rng.u(0, 1) < 0.3 ? -1 : 1);
        double d = rng.u(0.2, 3.0) * (rng.u(0, 1) < 0.3 ? -1 : 1);
        CMatrix2 A = CMatrix2::real(a, 0, 1, d);
        std::vector<cplx> got = spectrum_count(A, 12).expanded();
        got.resize(std::min<size_t>(got.size(), 12));
        std::vector<cplx> lat{0.0};
        for (int k = 1; k <= 12; ++k) {
            lat.push_back(a * pi2 * k * k);
            lat.push_back(d * pi2 * k * k);
        }
        std::sort(lat.begin(), lat.end(), [](cplx x, cplx y) { return std::abs(x) < std::abs(y); });
        lat.resize(12);
        std::string why;
        bool ok = got.size() == 12 &&
                  match_sets(got, lat, [](cplx z) { return 1e-8 * (1 + std::abs(z)); }, why);
        if (!ok) {
            ++bad;
            r.need(false, "(a,d)=(" + std::to_string(a) + "," + std::to_string(d) + "): " + why);
        }
        for (size_t i = 0; i < got.size() && i < lat.size(); ++i)
            worst = std::max(worst, std::abs(got[i] - lat[i]) / (1 + std::abs(lat[i])));
    }
    double secs = since(t0);
    r.need(secs < 10.0, "runtime " + std::to_string(secs) + " s");
    if (r.pass)
        r.note << "20 matrices, worst ordered rel. deviation " << worst << ", " << secs << " s";
    return r;
}

Result c3()
{
    Result r;
    Spectrum sp = spectrum_count(a4(-1, 0), 12);
    std::vector<cplx> got = distinct_values(sp);
    r.need(got.size() >= 6, "fewer than 6 eigenvalues");
    double worst = 0;
    if (got.size() >= 6) {
        r.need(std::abs(got[0]) <= 1e-12, "first eigenvalue is not 0");
        for (int k = 1; k <= 5; ++k) {
            double ref = -4.0 * pi2 / 3.0 * k * k;
            double e = std::abs(got[k] - ref) / std::abs(ref);
            worst = std::max(worst, e);
            r.need(e <= 1e-7, "k=" + std::to_string(k) + " rel. error " + std::to_string(e));
        }
    }
    if (r.pass)
        r.note << "{0, -4pi^2k^2/3}, worst rel. error " << worst;
    return r;
}

int origin_order(const SecularFn& S)
{
    return winding_count(S, Rect(-0.37, 0.41, -0.39, 0.35));
}

Result c4()
{
    Result r;
    SecularFn s = SecularFn::build(a4(0.5, -1.5));
    int w = winding_count(s, Rect(0, 50, -20, 20));
    int o = origin_order(s);
    r.need(w - o == 0, "(1/2,-3/2): winding " + std::to_string(w) + " minus origin order " + std::to_string(o));

    SecularFn t = SecularFn::build(a4(0, 2));
    // real axis: no sign change or near-zero of |EV| away from 0, and no zero in a thin strip
    double floor_rel = 1e300;
    for (int i = 0; i <= 30000; ++i) {
        double x = 0.05 + (30.0 - 0.05) * i / 30000;
        floor_rel = std::min(floor_rel, t.eval_scaled(x).relative());
    }
    int strip = winding_count(t, Rect(0.05, 30, -0.05, 0.05));
    int ot = origin_order(t);
    r.need(strip == 0 && floor_rel > 1e-6, "(0,2): real zeros away from 0 (strip " + std::to_string(strip) +
                                               ", min rel " + std::to_string(floor_rel) + ")");
    r.need(ot >= 1, "(0,2): no zero at the origin");
    int up = winding_count(t, Rect(0, 30, 0.1, 20));
    r.need(up >= 3, "(0,2): only " + std::to_string(up) + " nonreal zeros");
    if (r.pass)
        r.note << "(1/2,-3/2): " << w << " - " << o << " = 0; (0,2): real zeros {0} (min |EV|/scale " << floor_rel
               << "), " << up << " zeros in [0,30]x[0.1,20]";
    return r;
}

Result c5()
{
    Result r;
    auto t0 = Clock::now();
    struct P { int p, q, s; double a; };
    std::vector<P> pts = {{2, 1, 1, 0}, {3, 2, 1, -0.5}, {3, 1, 1, 0}, {5, 4, 1, 0.5}, {4, 3, 1, -0.8},
                          {5, 3, 1, 1.5}, {7, 2, 1, -0.2}, {2, 1, -1, 2}, {5, 2, -1, 1.5}, {4, 1, 1, 3}};
    int checked = 0;
    for (const auto& pp : pts) {
        ChebPoint pt = lambda_curve(pp.p, pp.q, pp.s, pp.a);
        const double cap = 200;
        int nmax = int(std::sqrt(cap) / (2 * pi * pt.q * std::sqrt(pt.b_plus))) + 2;
        Spectrum c = cheb_spectrum(pt, nmax);
        double rr = std::sqrt(cap) * 1.3;
        Spectrum s = spectrum(a4(pt.a, pt.d), Rect(0, rr, -rr, rr));
        std::vector<cplx> cv, sv;
        for (const auto& e : c.eigenvalues)
            if (std::abs(e.value) <= cap)
                cv.push_back(e.value);
        for (const auto& e : s.eigenvalues)
            if (std::abs(e.value) <= cap)
                sv.push_back(e.value);
        std::string why;
        auto tol = [](cplx z) { return 1e-7 * (1 + std::abs(z)); };
        bool ok = cv.size() == sv.size() && match_sets(cv, sv, tol, why);
        if (!ok) {
            std::ostringstream o;
            o << pp.p << "/" << pp.q << " a=" << pp.a << ": " << cv.size() << " vs " << sv.size() << " " << why;
            r.need(false, o.str());
        }
        checked += int(cv.size());
    }
    double secs = since(t0);
    r.need(secs < 30.0, "runtime " + std::to_string(secs) + " s");
    if (r.pass)
        r.note << "10 points, " << checked << " eigenvalues agree, " << secs << " s";
    return r;
}

Result c6()
{
    Result r;
    // convergence order on matrices with known spectra
    double rmin = 1e9, rmax = 0;
    for (CMatrix2 A : {CMatrix2::diag(1.0, 2.0), CMatrix2::diag(0.5, -1.5), CMatrix2::real(1, 0, 1, 4),
                       CMatrix2::real(2, 0, -1, 0.7)}) {
        auto c = matrix_eigenvalues(discretize(A, 100)), f = matrix_eigenvalues(discretize(A, 200));
        std::vector<cplx> exact;
        for (int k = 1; k <= 6; ++k) {
            exact.push_back(A.a * pi2 * double(k * k));
            exact.push_back(A.d * pi2 * double(k * k));
        }
        std::sort(exact.begin(), exact.end(), [](cplx x, cplx y) { return std::abs(x) < std::abs(y); });
        for (int j = 0; j < 6; ++j) {
            auto nearest = [&](const std::vector<cplx>& v) {
                double b = 1e300;
                for (cplx x : v) b = std::min(b, std::abs(x - exact[j]));
                return b;
            };
            double ratio = nearest(c) / nearest(f);
            rmin = std::min(rmin, ratio);
            rmax = std::max(rmax, ratio);
        }
    }
    r.need(rmin >= 3.5 && rmax <= 4.5, "Richardson ratios in [" + std::to_string(rmin) + ", " + std::to_string(rmax) + "]");

    int bad = 0;
    double worst = 0;
    for (auto [a, d] : corpus_points()) {
        CMatrix2 A = a4(a, d);
        Spectrum o = oracle_spectrum(discretize(A, 100), 6);
        std::vector<cplx> sec = spectrum_count(A, 14).expanded();
        // secular eigenvalues are in the right half of the lambda plane only; the
        // oracle sees both members of a conjugate pair
        for (const auto& e : o.eigenvalues) {
            double bd = 1e300;
            for (cplx s : sec) bd = std::min(bd, std::abs(e.value - s));
            double allow = e.error_estimate + 1e-8 * (1 + std::abs(e.value));
            worst = std::max(worst, bd / allow);
            if (bd > allow) {
                ++bad;
                std::ostringstream w;
                w << "(" << a << "," << d << ") oracle (" << e.value.real() << "," << e.value.imag() << ") off " << bd
                  << " > est " << e.error_estimate;
                r.need(false, w.str());
            }
        }
    }
    if (r.pass)
        r.note << "ratios in [" << rmin << ", " << rmax << "], 30 corpus matrices within Richardson estimate (worst "
               << worst << " of allowance)";
    return r;
}

Result c7()
{
    Result r;
    std::vector<int> rs{2, 3, 4, 5, 6};
    std::vector<double> xs(rs.begin(), rs.end());
    auto slopes = [&](const CMatrix2& A, double& s300, double& s600) {
        auto rows = growth_probe(A, 1.0, rs, 300);
        std::vector<double> a, b;
        for (const auto& g : rows) {
            a.push_back(g.norm_n);
            b.push_back(g.norm_2n);
        }
        s300 = loglog_slope(xs, a);
        s600 = loglog_slope(xs, b);
    };
    double t3, t6, d3, d6;
    slopes(CMatrix2::real(1, 0, 1, 1), t3, t6);
    slopes(CMatrix2::diag(1.0, 1.0), d3, d6);
    std::ostringstream o;
    o << "triangular slope n=300 " << t3 << ", n=600 " << t6 << "; diagonal " << d3 << ", " << d6;
    r.need(std::abs(t3 - t6) <= 0.1 * std::max(std::abs(t3), std::abs(t6)), "n=300 and n=600 differ by more than 10%");
    r.need(t3 >= 0.4, "triangular slope below 0.4");
    r.need(d3 <= 0.05 && d6 <= 0.05, "diagonal slope above 0.05");
    if (!r.pass)
        r.note << " (" << o.str() << ")";
    else
        r.note << o.str();
    return r;
}

Result c8()
{
    Result r;
    Rng rng(8);
    double worst1 = 0;
    for (int i = 0; i < 100; ++i) {
        CMatrix2 A = rng.mat();
        cplx mu = perturbation_coeffs(A).mu1;
        cplx ref = A.inverse().d;
        worst1 = std::max(worst1, std::abs(mu - ref) / std::max(1.0, std::abs(ref)));
    }
    r.need(worst1 <= 1e-12, "mu1 deviation " + std::to_string(worst1));

    // independent series: sum (2m-1)^-4 in long double until the tail is < 1e-14
    long double s = 0;
    for (long m = 200000; m >= 1; --m) {
        long double t = 2.0L * m - 1;
        s += 1.0L / (t * t * t * t);
    }
    const long double PI = 3.141592653589793238462643383279503L;
    double worst2 = 0;
    for (int i = 0; i < 100; ++i) {
        CMatrix2 A = rng.mat();
        A.a = 0.0;
        auto pc = perturbation_coeffs(A);
        if (!pc.mu2) {
            r.need(false, "mu2 missing for a = 0");
            break;
        }
        cplx bc = A.b * A.c;
        std::complex<long double> ser = -8.0L / (std::complex<long double>(bc) * PI * PI * PI * PI) * s;
        cplx closed = -1.0 / (12.0 * bc);
        cplx series(double(ser.real()), double(ser.imag()));
        double scale = std::max(1.0, std::abs(closed));
        worst2 = std::max({worst2, std::abs(*pc.mu2 - closed) / scale, std::abs(*pc.mu2 - series) / scale});
    }
    r.need(worst2 <= 1e-12, "mu2 deviation " + std::to_string(worst2));
    if (r.pass)
        r.note << "mu1 worst " << worst1 << ", mu2 worst " << worst2;
    return r;
}

Result c9()
{
    Result r;
    SweepSpec f2;
    f2.path = PathKind::AlphaList;
    f2.a0 = -0.5;
    f2.alphas = {{2, 1}, {8, 5}, {4, 3}, {5, 4}, {7, 6}, {9, 8}};
    f2.steps = 6;
    f2.method = SweepMethod::Secular;
    f2.count = 16;
    auto recs = run_sweep(f2);
    double prev_mod = 0, prev_d = 1e9;
    std::ostringstream o;
    o << "a=-1/2 |neg|:";
    for (const auto& rec : recs) {
        int neg = 0;
        double mod = 0;
        for (const auto& e : rec.eigenvalues)
            if (e.ev.value.real() < 0 && std::abs(e.ev.value.imag()) <= 1e-9 * std::abs(e.ev.value)) {
                ++neg;
                mod = std::abs(e.ev.value);
            }
        r.need(neg == 1, "step " + std::to_string(rec.step) + " has " + std::to_string(neg) + " negative eigenvalues");
        r.need(rec.d < prev_d && mod > prev_mod, "modulus not increasing as d decreases at step " + std::to_string(rec.step));
        prev_mod = mod;
        prev_d = rec.d;
        o << " " << mod;
    }

    SweepSpec f5 = f2;
    f5.a0 = 0.0;
    f5.alphas = {{3, 1}, {5, 2}, {9, 4}, {2, 1}, {9, 5}, {3, 2}, {5, 4}, {9, 8}};
    f5.steps = 8;
    f5.count = 17;
    auto r5 = run_sweep(f5);
    // "double" is the probe's geometric multiplicity; at alpha=3 the analytic
    // order is 4 (two 2-dim eigenspaces, checked against finite differences)
    int max_order = 0;
    auto real_doubles = [&](const SweepRecord& rec) {
        std::vector<cplx> v;
        for (const auto& e : rec.eigenvalues)
            if (e.ev.value != 0.0 && std::abs(e.ev.value.imag()) <= 1e-9 * std::abs(e.ev.value) &&
                e.ev.multiplicity == 2) {
                v.push_back(e.ev.value);
                max_order = std::max(max_order, e.ev.analytic_order);
            }
        return v;
    };
    auto first = real_doubles(r5.front());
    r.need(first.size() >= 3, "alpha=3: " + std::to_string(first.size()) + " real double eigenvalues");
    // at 9/8 the doubles have become simple conjugate pairs
    const auto& last = r5.back();
    int pairs = 0;
    for (const auto& e : last.eigenvalues)
        if (e.ev.value.imag() > 1e-9 * std::abs(e.ev.value) && e.ev.algebraic() == 1)
            for (const auto& f : last.eigenvalues)
                if (std::abs(f.ev.value - std::conj(e.ev.value)) <= 1e-8 * std::abs(e.ev.value) && f.ev.algebraic() == 1)
                    ++pairs;
    auto last_doubles = real_doubles(last);
    r.need(pairs >= 3, "alpha=9/8: only " + std::to_string(pairs) + " simple conjugate pairs");
    r.need(last_doubles.empty(), "alpha=9/8: real double eigenvalues remain");
    o << "; a=0: " << first.size() << " real doubles (analytic order " << max_order << ") at alpha=3, " << pairs << " simple conjugate pairs at 9/8";
    if (r.pass)
        r.note << o.str();
    return r;
}

} // namespace

int main(int argc, char** argv)
{
    std::vector<std::function<Result()>> all = {c1, c2, c3, c4, c5, c6, c7, c8, c9};
    std::vector<int> which;
    if (argc > 1) {
        int k = std::atoi(argv[1]);
        if (k < 1 || k > 9) {
            std::fprintf(stderr, "usage: acceptance [1-9]\n");
            return 2;
        }
        which.push_back(k);
    } else {
        for (int k = 1; k <= 9; ++k) which.push_back(k);
    }
    int fails = 0;
    for (int k : which) {
        Result res;
        auto t0 = Clock::now();
        try {
            res = all[k - 1]();
        } catch (const Error& e) {
            res.pass = false;
            res.note << to_string(e.kind()) << ": " << e.what();
        } catch (const std::exception& e) {
            res.pass = false;
            res.note << e.what();
        }
        std::printf("criterion %d: %s  %s  [%.2f s]\n", k, res.pass ? "PASS" : "FAIL", res.note.str().c_str(), since(t0));
        if (!res.pass)
            ++fails;
    }
    return fails;
}
