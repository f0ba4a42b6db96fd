#include "specmat/sweep.hpp"
#include "specmat/chebpath.hpp"
#include "specmat/errors.hpp"
#include "specmat/oracle.hpp"
#include "specmat/rootfind.hpp"
#include "specmat/secular.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

namespace specmat {

using std::abs;
using json = nlohmann::json;

const char* to_string(SweepMethod m) {
    switch (m) {
    case SweepMethod::Secular: return "secular";
    case SweepMethod::Chebyshev: return "chebyshev";
    case SweepMethod::Oracle: return "oracle";
    }
    return "?";
}

SweepMethod parse_sweep_method(const std::string& s) {
    if (s == "secular") return SweepMethod::Secular;
    if (s == "chebyshev") return SweepMethod::Chebyshev;
    if (s == "oracle") return SweepMethod::Oracle;
    throw Error(ErrorKind::InvalidInput, "unknown method '" + s + "'");
}

Spectrum truncate_count(const Spectrum& sp, int count) {
    Spectrum out = sp;
    out.eigenvalues.clear();
    int have = 0;
    for (const auto& e : sp.eigenvalues) {
        if (have >= count) break;
        out.eigenvalues.push_back(e);
        have += e.algebraic();
    }
    return out;
}

namespace {

struct StepPoint {
    double a, d;
    int p = 0, q = 0;
    std::optional<ChebPoint> cheb;
};

std::vector<StepPoint> path_points(const SweepSpec& s) {
    std::vector<StepPoint> pts;
    if (s.path == PathKind::AlphaList) {
        if (s.alphas.size() < 2) throw Error(ErrorKind::InvalidInput, "an alpha sweep needs at least 2 values");
        for (auto [p, q] : s.alphas) {
            ChebPoint c = lambda_curve(p, q, s.sign, s.a0);
            pts.push_back({c.a, c.d, c.p, c.q, c});
        }
        return pts;
    }
    if (s.steps < 2) throw Error(ErrorKind::InvalidInput, "a sweep needs at least 2 steps");
    for (int k = 0; k < s.steps; ++k) {
        double t = static_cast<double>(k) / (s.steps - 1);
        double a = s.a0 + (s.a1 - s.a0) * t;
        if (s.path == PathKind::Segment) {
            pts.push_back({a, s.d0 + (s.d1 - s.d0) * t, 0, 0, std::nullopt});
        } else {
            ChebPoint c = lambda_curve(s.p, s.q, s.sign, a);
            pts.push_back({c.a, c.d, c.p, c.q, c});
        }
    }
    return pts;
}

bool r6_like(const Region& r) {
    if (r.tag == RegionTag::R6) return true;
    return r.tag == RegionTag::Boundary &&
           std::find(r.neighbors.begin(), r.neighbors.end(), RegionTag::R6) != r.neighbors.end();
}

Spectrum cheb_count(const ChebPoint& pt, int count) {
    return truncate_count(cheb_spectrum(pt, count + 1), count);
}

void verify_against_secular(const Spectrum& cs, const CMatrix2& A, int count, const RootOptions& opt, int step) {
    // a few extra so conjugate partners tied at the cut are present
    Spectrum ss = spectrum_count(A, count + 4, opt);
    for (const auto& e : cs.eigenvalues) {
        if (abs(e.value) > abs(ss.eigenvalues.back().value) * (1.0 + 1e-6)) continue;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& f : ss.eigenvalues) best = std::min(best, abs(e.value - f.value));
        if (best > 1e-6 * (1.0 + abs(e.value)))
            throw Error(ErrorKind::NonConvergent,
                        "chebyshev and secular spectra disagree at step " + std::to_string(step));
    }
}

} // namespace

std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
    if (spec.count < 1) throw Error(ErrorKind::InvalidInput, "count must be positive");
    if (spec.method == SweepMethod::Chebyshev && spec.path == PathKind::Segment)
        throw Error(ErrorKind::InvalidInput, "the chebyshev method needs a Lambda path with rational alpha");
    auto pts = path_points(spec);
    const long n = static_cast<long>(pts.size());
    std::vector<SweepRecord> recs(n);
    std::vector<std::exception_ptr> err(n);
    const bool par = spec.exec == Exec::Parallel;
    RootOptions opt;
    opt.tol = spec.tol;
    opt.seed = spec.seed;
    opt.exec = Exec::Serial;  // parallelism lives at the step level

#pragma omp parallel for schedule(dynamic, 1) if (par)
    for (long k = 0; k < n; ++k) {
        try {
            auto t0 = std::chrono::steady_clock::now();
            const StepPoint& pt = pts[k];
            SweepRecord& r = recs[k];
            r.step = static_cast<int>(k);
            r.a = pt.a;
            r.d = pt.d;
            r.p = pt.p;
            r.q = pt.q;
            Region reg = classify_region(pt.a, pt.d);
            r.region = reg.tag;
            CMatrix2 A = family_matrix(Family::A4, pt.a, pt.d);
            if (r6_like(reg) || A.is_singular()) {
                r.whole_plane = true;
            } else {
                Spectrum sp;
                switch (spec.method) {
                case SweepMethod::Secular: sp = spectrum_count(A, spec.count, opt); break;
                case SweepMethod::Chebyshev:
                    sp = cheb_count(*pt.cheb, spec.count);
                    if (spec.verify) verify_against_secular(sp, A, spec.count, opt, r.step);
                    break;
                case SweepMethod::Oracle: {
                    Discretization D = discretize(A, spec.oracle_n);
                    sp = oracle_spectrum(D, std::min(spec.count, D.size() / 4));
                    break;
                }
                }
                for (const auto& e : sp.eigenvalues) r.eigenvalues.push_back({e, -1});
            }
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        } catch (...) {
            err[k] = std::current_exception();
        }
    }
    for (auto& e : err)
        if (e) std::rethrow_exception(e);
    assign_tracks(recs);
    return recs;
}

void assign_tracks(std::vector<SweepRecord>& recs) {
    int next = 0;
    const SweepRecord* prev = nullptr;
    for (auto& r : recs) {
        if (r.whole_plane) {
            prev = nullptr;
            continue;
        }
        if (!prev || prev->eigenvalues.empty()) {
            for (auto& e : r.eigenvalues) e.track = next++;
            prev = &r;
            continue;
        }
        struct Pair {
            double dist;
            size_t i, j;
        };
        std::vector<Pair> pairs;
        double scale = 1.0;
        for (size_t i = 0; i < prev->eigenvalues.size(); ++i)
            for (size_t j = 0; j < r.eigenvalues.size(); ++j) {
                pairs.push_back({abs(prev->eigenvalues[i].ev.value - r.eigenvalues[j].ev.value), i, j});
                scale = std::max(scale, abs(r.eigenvalues[j].ev.value));
            }
        std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
            if (x.dist != y.dist) return x.dist < y.dist;
            if (x.i != y.i) return x.i < y.i;
            return x.j < y.j;
        });
        std::vector<bool> ui(prev->eigenvalues.size(), false), uj(r.eigenvalues.size(), false);
        std::vector<Pair> matched;
        for (const auto& p : pairs)
            if (!ui[p.i] && !uj[p.j]) {
                ui[p.i] = uj[p.j] = true;
                matched.push_back(p);
            }
        std::vector<double> ds;
        for (const auto& p : matched) ds.push_back(p.dist);
        std::nth_element(ds.begin(), ds.begin() + ds.size() / 2, ds.end());
        double cap = 5.0 * ds[ds.size() / 2] + 1e-12 * scale;
        for (const auto& p : matched)
            if (p.dist <= cap) r.eigenvalues[p.j].track = prev->eigenvalues[p.i].track;
        for (auto& e : r.eigenvalues)
            if (e.track < 0) e.track = next++;
        prev = &r;
    }
}

NegativeRow negative_eigenvalue(double a, double d, double t_max) {
    CMatrix2 A = family_matrix(Family::A4, a, d);
    if (A.is_singular()) throw Error(ErrorKind::SingularMatrix, "A4 is singular (ad = -1)");
    SecularFn S = SecularFn::build(A);
    // EV is even with real Taylor coefficients, so EV(i t) is real
    auto f = [&](double t) { return S.eval_scaled(cplx(0.0, t)); };
    auto sgn = [](const ScaledValue& v) { return v.mantissa.real() > 0 ? 1 : -1; };
    auto rel = [&](double t) { return f(t).relative(); };
    const double dt = 0.01, noise = 1e-9;
    double tz = -1.0;
    double t_prev = 0.0;
    int s_prev = 0;
    double r1 = std::numeric_limits<double>::infinity(), r2 = r1;  // relative size at t - 2dt, t - dt
    for (double t = 0.05; t <= t_max && tz < 0.0; t += dt) {
        ScaledValue v = f(t);
        double r = v.relative();
        if (t < 0.5 && r <= noise) continue;  // the order-2 zero at the origin
        // a double zero touches the axis without a sign change
        if (r2 <= 1e-2 && r2 < r1 && r2 < r) {
            double lo = t - 2 * dt, hi = t;
            const double g = 0.5 * (std::sqrt(5.0) - 1.0);
            for (int it = 0; it < 100; ++it) {
                double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
                if (rel(x1) < rel(x2))
                    hi = x2;
                else
                    lo = x1;
            }
            double tm = 0.5 * (lo + hi);
            if (rel(tm) <= 1e-8) {
                // |EV| is flat to sqrt(eps) here; the derivative has a simple zero
                cplx ph = S.eval(cplx(0.0, t - 2 * dt - 0.5 * dt));
                ph /= std::abs(ph);
                auto g = [&](double x) { return (cplx(0.0, 1.0) * S.eval_deriv(cplx(0.0, x)) * std::conj(ph)).real(); };
                double a0 = tm - 1e-5 * (1.0 + tm), b0 = tm + 1e-5 * (1.0 + tm);
                double ga = g(a0), gb = g(b0);
                if (ga * gb < 0.0) {
                    for (int it = 0; it < 200 && b0 - a0 > 1e-15 * b0; ++it) {
                        double mid = 0.5 * (a0 + b0);
                        double gm = g(mid);
                        if ((gm < 0.0) == (ga < 0.0)) {
                            a0 = mid;
                            ga = gm;
                        } else {
                            b0 = mid;
                        }
                    }
                    tm = 0.5 * (a0 + b0);
                }
                tz = tm;
            }
        }
        r1 = r2;
        r2 = r;
        if (tz >= 0.0 || r <= noise) continue;
        int s = sgn(v);
        if (s_prev != 0 && s != s_prev) {
            double lo = t_prev, hi = t;
            int slo = s_prev;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
                double mid = 0.5 * (lo + hi);
                ScaledValue vm = f(mid);
                if (vm.mantissa.real() == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (sgn(vm) == slo)
                    lo = mid;
                else
                    hi = mid;
            }
            tz = 0.5 * (lo + hi);
            // Newton polish: d/dt EV(i t) = i EV'(i t)
            for (int it = 0; it < 3; ++it) {
                cplx lam(0.0, tz);
                cplx fv = S.eval(lam), fd = cplx(0.0, 1.0) * S.eval_deriv(lam);
                if (fd == 0.0) break;
                double nt = tz - (fv / fd).real();
                if (!(nt > t_prev && nt < t)) break;
                tz = nt;
            }
        }
        t_prev = t;
        s_prev = s;
    }
    if (tz < 0.0)
        throw Error(ErrorKind::NoSignChange, "no zero of EV on the positive imaginary axis up to t = " +
                                                 std::to_string(t_max));
    return {a, d, tz, -tz * tz, classify_region(a, d).tag};
}

std::vector<NegativeRow> track_negative_eigenvalue(double a, double d_lo, double d_hi, int steps, Exec exec) {
    if (steps < 2) throw Error(ErrorKind::InvalidInput, "need at least 2 steps");
    if (!(d_lo < d_hi)) throw Error(ErrorKind::InvalidInput, "need d_lo < d_hi");
    std::vector<NegativeRow> rows(steps);
    std::vector<std::exception_ptr> err(steps);
    bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(dynamic, 1) if (par)
    for (int k = 0; k < steps; ++k) {
        try {
            rows[k] = negative_eigenvalue(a, d_lo + (d_hi - d_lo) * k / (steps - 1));
        } catch (...) {
            err[k] = std::current_exception();
        }
    }
    for (auto& e : err)
        if (e) std::rethrow_exception(e);
    return rows;
}

namespace {

std::string num(double x) {
    if (!std::isfinite(x)) return "nan";
    if (x == 0.0) x = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json jnum(double x) { return std::isfinite(x) ? json(x == 0.0 ? 0.0 : x) : json(nullptr); }
double from_j(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

RegionTag region_from(const std::string& s) {
    for (RegionTag t : {RegionTag::R1, RegionTag::R2, RegionTag::R3, RegionTag::R4, RegionTag::R5, RegionTag::R6,
                        RegionTag::Boundary})
        if (s == to_string(t)) return t;
    throw Error(ErrorKind::InvalidInput, "unknown region '" + s + "'");
}

} // namespace

std::string to_csv(const std::vector<SweepRecord>& recs) {
    std::ostringstream o;
    o << "step,a,d,region,track,re_lambda2,im_lambda2,multiplicity,residual\n";
    for (const auto& r : recs) {
        std::string head = std::to_string(r.step) + "," + num(r.a) + "," + num(r.d) + "," + to_string(r.region) + ",";
        if (r.whole_plane) {
            o << head << "-1,nan,nan,0,nan\n";
            continue;
        }
        for (const auto& e : r.eigenvalues)
            o << head << e.track << "," << num(e.ev.value.real()) << "," << num(e.ev.value.imag()) << ","
              << e.ev.multiplicity << "," << num(e.ev.residual) << "\n";
    }
    return o.str();
}

std::string to_json(const std::vector<SweepRecord>& recs) {
    json arr = json::array();
    for (const auto& r : recs) {
        json jr = {{"step", r.step}, {"a", jnum(r.a)}, {"d", jnum(r.d)}, {"p", r.p}, {"q", r.q},
                   {"region", to_string(r.region)}, {"whole_plane", r.whole_plane}, {"seconds", jnum(r.seconds)}};
        json ev = json::array();
        for (const auto& e : r.eigenvalues)
            ev.push_back({{"track", e.track},
                          {"value", {jnum(e.ev.value.real()), jnum(e.ev.value.imag())}},
                          {"lambda", {jnum(e.ev.lambda.real()), jnum(e.ev.lambda.imag())}},
                          {"multiplicity", e.ev.multiplicity},
                          {"analytic_order", e.ev.analytic_order},
                          {"residual", jnum(e.ev.residual)},
                          {"error_estimate", jnum(e.ev.error_estimate)}});
        jr["eigenvalues"] = ev;
        arr.push_back(jr);
    }
    return arr.dump(1) + "\n";
}

std::vector<SweepRecord> records_from_json(const std::string& text) {
    std::vector<SweepRecord> recs;
    try {
        json arr = json::parse(text);
        for (const auto& jr : arr) {
            SweepRecord r;
            r.step = jr.at("step").get<int>();
            r.a = from_j(jr.at("a"));
            r.d = from_j(jr.at("d"));
            r.p = jr.at("p").get<int>();
            r.q = jr.at("q").get<int>();
            r.region = region_from(jr.at("region").get<std::string>());
            r.whole_plane = jr.at("whole_plane").get<bool>();
            r.seconds = from_j(jr.at("seconds"));
            for (const auto& je : jr.at("eigenvalues")) {
                TrackedEigenvalue e;
                e.track = je.at("track").get<int>();
                e.ev.value = cplx(from_j(je.at("value")[0]), from_j(je.at("value")[1]));
                e.ev.lambda = cplx(from_j(je.at("lambda")[0]), from_j(je.at("lambda")[1]));
                e.ev.multiplicity = je.at("multiplicity").get<int>();
                e.ev.analytic_order = je.at("analytic_order").get<int>();
                e.ev.residual = from_j(je.at("residual"));
                e.ev.error_estimate = from_j(je.at("error_estimate"));
                r.eigenvalues.push_back(e);
            }
            recs.push_back(r);
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidInput, std::string("bad sweep JSON: ") + e.what());
    }
    return recs;
}

namespace {

struct Box {
    double x0 = 0, x1 = 1, y0 = -1, y1 = 1;
};

Box bounds(const std::vector<const SweepRecord*>& rs) {
    Box b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto* r : rs)
        for (const auto& e : r->eigenvalues) {
            b.x0 = std::min(b.x0, e.ev.value.real());
            b.x1 = std::max(b.x1, e.ev.value.real());
            b.y0 = std::min(b.y0, e.ev.value.imag());
            b.y1 = std::max(b.y1, e.ev.value.imag());
        }
    if (!(b.x0 <= b.x1)) return Box{};
    double px = 0.06 * std::max(b.x1 - b.x0, 1.0), py = 0.06 * std::max(b.y1 - b.y0, 1.0);
    return {b.x0 - px, b.x1 + px, b.y0 - py, b.y1 + py};
}

std::string ramp(double t) {
    // blue -> red
    int r = static_cast<int>(40 + 200 * t), g = 60, bl = static_cast<int>(220 - 180 * t);
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, bl);
    return buf;
}

void panel(std::ostringstream& o, const std::vector<const SweepRecord*>& rs, double ox, double oy, double w,
           double h, const std::string& title, bool color_by_step, int nsteps) {
    Box b = bounds(rs);
    auto X = [&](double x) { return ox + 40 + (x - b.x0) / (b.x1 - b.x0) * (w - 50); };
    auto Y = [&](double y) { return oy + h - 25 - (y - b.y0) / (b.y1 - b.y0) * (h - 45); };
    char buf[1024];
    std::snprintf(buf, sizeof buf, "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"white\" stroke=\"#999\"/>\n",
                  ox + 40, oy + 20, w - 50, h - 45);
    o << buf;
    if (b.y0 < 0 && b.y1 > 0) {
        std::snprintf(buf, sizeof buf, "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ccc\"/>\n", X(b.x0),
                      Y(0), X(b.x1), Y(0));
        o << buf;
    }
    if (b.x0 < 0 && b.x1 > 0) {
        std::snprintf(buf, sizeof buf, "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ccc\"/>\n", X(0),
                      Y(b.y0), X(0), Y(b.y1));
        o << buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\">%s</text>\n"
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"9\">%.4g</text>\n"
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"9\" text-anchor=\"end\">%.4g</text>\n"
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"9\" text-anchor=\"end\">%.4g</text>\n"
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"9\" text-anchor=\"end\">%.4g</text>\n",
                  ox + 40, oy + 14, title.c_str(), ox + 40, oy + h - 10, b.x0, ox + w - 10, oy + h - 10, b.x1,
                  ox + 38, oy + h - 25, b.y0, ox + 38, oy + 28, b.y1);
    o << buf;
    for (const auto* r : rs)
        for (const auto& e : r->eigenvalues) {
            std::string col = color_by_step ? ramp(nsteps > 1 ? double(r->step) / (nsteps - 1) : 0.0) : "#1f4e9c";
            double rad = e.ev.multiplicity > 1 ? 4.0 : 2.5;
            std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.1f\" fill=\"%s\"/>\n",
                          X(e.ev.value.real()), Y(e.ev.value.imag()), rad, col.c_str());
            o << buf;
        }
}

} // namespace

std::string to_svg(const std::vector<SweepRecord>& recs) {
    if (recs.empty()) throw Error(ErrorKind::InvalidInput, "nothing to plot");
    std::ostringstream o;
    const int n = static_cast<int>(recs.size());
    const double pw = 320, ph = 260;
    if (n <= 12) {
        int cols = std::min(n, 3), rows = (n + cols - 1) / cols;
        o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cols * pw << "\" height=\"" << rows * ph
          << "\" font-family=\"sans-serif\">\n";
        for (int k = 0; k < n; ++k) {
            const auto& r = recs[k];
            char t[128];
            if (r.p > 0)
                std::snprintf(t, sizeof t, "alpha=%d/%d a=%.4g d=%.5g", r.p, r.q, r.a, r.d);
            else
                std::snprintf(t, sizeof t, "step %d: a=%.4g d=%.5g", r.step, r.a, r.d);
            std::string title = t;
            if (r.whole_plane) title += " (whole plane)";
            panel(o, {&r}, (k % cols) * pw, (k / cols) * ph, pw, ph, title, false, n);
        }
    } else {
        std::vector<const SweepRecord*> all;
        for (const auto& r : recs) all.push_back(&r);
        o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * pw << "\" height=\"" << 2 * ph
          << "\" font-family=\"sans-serif\">\n";
        panel(o, all, 0, 0, 2 * pw, 2 * ph, "lambda^2 plane, color = step", true, n);
    }
    o << "</svg>\n";
    return o.str();
}

std::string negative_to_csv(const std::vector<NegativeRow>& rows) {
    std::ostringstream o;
    o << "a,d,region,t,lambda2\n";
    for (const auto& r : rows)
        o << num(r.a) << "," << num(r.d) << "," << to_string(r.region) << "," << num(r.t) << "," << num(r.lambda2)
          << "\n";
    return o.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw Error(ErrorKind::IoError, "write to '" + path + "' failed");
}

void emit(const std::vector<SweepRecord>& recs, const std::string& format, const std::string& path) {
    if (recs.empty()) throw Error(ErrorKind::InvalidInput, "no records to emit");
    if (format == "csv")
        write_file(path, to_csv(recs));
    else if (format == "json")
        write_file(path, to_json(recs));
    else if (format == "svg")
        write_file(path, to_svg(recs));
    else
        throw Error(ErrorKind::InvalidInput, "unknown format '" + format + "'");
}

} // namespace specmat
