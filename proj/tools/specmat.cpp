#include "specmat/canonical.hpp"
#include "specmat/chebpath.hpp"
#include "specmat/errors.hpp"
#include "specmat/oracle.hpp"
#include "specmat/rootfind.hpp"
#include "specmat/secular.hpp"
#include "specmat/sweep.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

using namespace specmat;
using json = nlohmann::json;

namespace {

struct Globals {
    double tol = 1e-10;
    std::uint64_t seed = 0x5eed;
    std::string out;
    std::string format;
    bool serial = false;
};

struct MatrixArgs {
    std::vector<std::string> matrix;
    std::vector<double> real;
};

void add_matrix(CLI::App* sc, MatrixArgs& m) {
    auto* o1 = sc->add_option("--matrix", m.matrix, "8 reals re(a),im(a),re(b),im(b),re(c),im(c),re(d),im(d)");
    auto* o2 = sc->add_option("--real", m.real, "real matrix a b c d")->expected(4);
    o1->excludes(o2);
}

std::vector<double> split_numbers(const std::vector<std::string>& parts, char sep = ',') {
    std::vector<double> v;
    for (const auto& p : parts) {
        std::string s = p;
        for (char& ch : s)
            if (ch == sep) ch = ' ';
        std::istringstream is(s);
        std::string tok;
        while (is >> tok) {
            try {
                size_t used = 0;
                double x = std::stod(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
                v.push_back(x);
            } catch (const std::exception&) {
                throw Error(ErrorKind::InvalidInput, "not a number: '" + tok + "'");
            }
        }
    }
    return v;
}

CMatrix2 read_matrix(const MatrixArgs& m) {
    if (!m.real.empty()) return CMatrix2::real(m.real[0], m.real[1], m.real[2], m.real[3]);
    if (m.matrix.empty()) throw Error(ErrorKind::InvalidInput, "give --matrix (8 reals) or --real a b c d");
    auto v = split_numbers(m.matrix);
    if (v.size() != 8) throw Error(ErrorKind::InvalidInput, "--matrix needs exactly 8 numbers");
    return {cplx(v[0], v[1]), cplx(v[2], v[3]), cplx(v[4], v[5]), cplx(v[6], v[7])};
}

cplx read_complex(const std::string& s) {
    auto v = split_numbers({s});
    if (v.size() == 1) return v[0];
    if (v.size() != 2) throw Error(ErrorKind::InvalidInput, "expected re,im but got '" + s + "'");
    return {v[0], v[1]};
}

// "a:b:n"
std::tuple<double, double, int> read_range(const std::string& s) {
    auto v = split_numbers({s}, ':');
    if (v.size() != 3 || v[2] != std::floor(v[2]))
        throw Error(ErrorKind::InvalidInput, "expected a0:a1:steps but got '" + s + "'");
    return {v[0], v[1], static_cast<int>(v[2])};
}

std::pair<int, int> read_ratio(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return {std::stoi(s), 1};
        return {std::stoi(s.substr(0, slash)), std::stoi(s.substr(slash + 1))};
    } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidInput, "expected p/q but got '" + s + "'");
    }
}

int read_sign(const std::string& s) {
    if (s == "+" || s == "+1" || s == "plus") return 1;
    if (s == "-" || s == "-1" || s == "minus") return -1;
    throw Error(ErrorKind::InvalidInput, "sign must be + or -");
}

json jc(cplx z) { return json::array({z.real() == 0.0 ? 0.0 : z.real(), z.imag() == 0.0 ? 0.0 : z.imag()}); }
json jd(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string num(double x) {
    if (!std::isfinite(x)) return "nan";
    if (x == 0.0) x = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void output(const Globals& g, const std::string& name, const std::string& ext, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::error_code ec;
    std::filesystem::create_directories(g.out, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create '" + g.out + "': " + ec.message());
    std::string path = (std::filesystem::path(g.out) / (name + "." + ext)).string();
    write_file(path, text);
    std::cerr << "wrote " << path << "\n";
}

std::string fmt_or(const Globals& g, const std::string& dflt, std::initializer_list<const char*> allowed) {
    std::string f = g.format.empty() ? dflt : g.format;
    for (const char* a : allowed)
        if (f == a) return f;
    throw Error(ErrorKind::InvalidInput, "format '" + f + "' not supported by this command");
}

json sector_json(const Sector& s) { return {{"lo", s.lo}, {"hi", s.hi}}; }

json prediction_json(const SpectralPrediction& p) {
    json j = {{"locus", to_string(p.locus)}, {"generators", p.generators}, {"scale", p.scale}, {"theorems", p.theorems}};
    std::vector<double> first(p.values.begin(), p.values.begin() + std::min<size_t>(p.values.size(), 12));
    j["values"] = first;
    if (p.sector) j["sector"] = sector_json(*p.sector);
    if (p.band_direction != 0) j["band_direction"] = p.band_direction;
    if (p.locus == LocusKind::ParabolicBand) j["band_height"] = p.band_height ? json(*p.band_height) : json(nullptr);
    if (p.resolvent_bound) {
        json ex = json::array();
        for (const auto& s : p.resolvent_bound->excluded) ex.push_back(sector_json(s));
        j["resolvent_bound"] = {{"excluded_sectors", ex}, {"statement", p.resolvent_bound->statement}};
    }
    if (!p.alternatives.empty()) {
        json alt = json::array();
        for (const auto& a : p.alternatives) alt.push_back(prediction_json(a));
        j["alternatives"] = alt;
    }
    return j;
}

// real entries as numbers, complex ones as [re, im]
json matrix_json(const CMatrix2& A) {
    auto e = [&](cplx z) { return A.is_real() ? json(z.real() == 0.0 ? 0.0 : z.real()) : jc(z); };
    return json::array({json::array({e(A.a), e(A.b)}), json::array({e(A.c), e(A.d)})});
}

int cmd_classify(const Globals&, const MatrixArgs& m) {
    CMatrix2 A = read_matrix(m);
    if (!A.is_real()) throw Error(ErrorKind::NonRealInput, "classify needs a real matrix");
    SpectralPrediction p = predict(A);
    json j;
    if (p.canonical) {
        const auto& c = *p.canonical;
        j["family"] = to_string(c.family);
        j["alpha"] = c.alpha;
        j["a"] = c.a;
        j["d"] = c.d;
        j["r"] = c.r;
        j["sign"] = c.sign;
    } else {
        j["family"] = nullptr;
    }
    if (p.region) {
        json nb = json::array();
        for (auto t : p.region->neighbors) nb.push_back(to_string(t));
        j["region"] = {{"tag", to_string(p.region->tag)},
                       {"detail", p.region->detail},
                       {"neighbors", nb},
                       {"on_real_curve", p.region->on_real_curve}};
    } else {
        j["region"] = nullptr;
    }
    j["prediction"] = prediction_json(p);
    json certs = json::array();
    if (!A.is_singular()) {
        for (const auto& c : similarity_certificates(A)) {
            json jc_ = {{"kind", to_string(c.kind)}, {"B", matrix_json(c.B)}, {"r", c.r}, {"conclusion", c.conclusion}};
            if (c.sector) jc_["sector"] = sector_json(*c.sector);
            if (c.kind == CertificateKind::NearReal) jc_["omega"] = c.omega;
            certs.push_back(jc_);
        }
        auto pc = perturbation_coeffs(A);
        j["perturbation"] = {{"mu1", jc(pc.mu1)}, {"mu2", pc.mu2 ? jc(*pc.mu2) : json(nullptr)}};
    }
    j["certificates"] = certs;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_ev(const Globals& g, const MatrixArgs& m, const std::string& at, const std::vector<double>& grid, int nx,
           int ny) {
    SecularFn S = SecularFn::build(read_matrix(m));
    if (!grid.empty()) {
        if (grid.size() != 4) throw Error(ErrorKind::InvalidInput, "--grid needs re0,re1,im0,im1");
        Rect r(grid[0], grid[1], grid[2], grid[3]);
        auto vals = eval_grid(S, r, nx, ny, g.serial ? Exec::Serial : Exec::Parallel);
        std::ostringstream o;
        o << "re,im,abs,log10_abs\n";
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const ScaledValue& v = vals[static_cast<size_t>(j) * nx + i];
                double la = v.log_abs() / std::log(10.0);
                o << num(r.re_min + r.width() * i / (nx - 1)) << "," << num(r.im_min + r.height() * j / (ny - 1)) << ","
                  << num(std::exp(v.log_abs())) << "," << num(la) << "\n";
            }
        output(g, "ev_grid", "csv", o.str());
        return 0;
    }
    if (at.empty()) throw Error(ErrorKind::InvalidInput, "give --at re,im or --grid");
    cplx z = read_complex(at);
    ScaledValue v = S.eval_scaled(z);
    json j = {{"lambda", jc(z)},          {"value", jc(v.value())},   {"log_abs", jd(v.log_abs())},
              {"relative", v.relative()}, {"kind", to_string(S.kind())}};
    output(g, "ev", "json", j.dump(2) + "\n");
    return 0;
}

std::string spectrum_csv(const Spectrum& sp) {
    std::ostringstream o;
    o << "re_lambda2,im_lambda2,re_lambda,im_lambda,multiplicity,analytic_order,residual,error_estimate\n";
    for (const auto& e : sp.eigenvalues)
        o << num(e.value.real()) << "," << num(e.value.imag()) << "," << num(e.lambda.real()) << ","
          << num(e.lambda.imag()) << "," << e.multiplicity << "," << e.analytic_order << "," << num(e.residual) << ","
          << num(e.error_estimate) << "\n";
    return o.str();
}

json spectrum_json(const Spectrum& sp) {
    json ev = json::array();
    for (const auto& e : sp.eigenvalues) {
        json je = {{"value", jc(e.value)},
                   {"lambda", jc(e.lambda)},
                   {"multiplicity", e.multiplicity},
                   {"analytic_order", e.analytic_order},
                   {"residual", jd(e.residual)}};
        if (e.error_estimate >= 0) je["error_estimate"] = e.error_estimate;
        ev.push_back(je);
    }
    json j = {{"method", to_string(sp.method)},
              {"matrix", matrix_json(sp.matrix)},
              {"whole_plane", sp.whole_plane},
              {"not_closed", sp.not_closed},
              {"analytic_order_at_zero", sp.analytic_order_at_zero},
              {"search_region",
               {sp.search_region.re_min, sp.search_region.re_max, sp.search_region.im_min, sp.search_region.im_max}},
              {"eigenvalues", ev}};
    if (sp.method == Provenance::Oracle) j["note"] = "discretization proxy";
    return j;
}

void emit_spectrum(const Globals& g, const std::string& name, const Spectrum& sp, const std::string& dflt) {
    std::string f = fmt_or(g, dflt, {"json", "csv"});
    if (f == "csv")
        output(g, name, "csv", spectrum_csv(sp));
    else
        output(g, name, "json", spectrum_json(sp).dump(2) + "\n");
}

RootOptions root_opts(const Globals& g) {
    RootOptions o;
    o.tol = g.tol;
    o.seed = g.seed;
    o.exec = g.serial ? Exec::Serial : Exec::Parallel;
    return o;
}

int cmd_spectrum(const Globals& g, const MatrixArgs& m, int count, const std::vector<double>& rect) {
    CMatrix2 A = read_matrix(m);
    Spectrum sp;
    if (!rect.empty()) {
        if (rect.size() != 4) throw Error(ErrorKind::InvalidInput, "--rect needs re0,re1,im0,im1");
        sp = spectrum(A, Rect(rect[0], rect[1], rect[2], rect[3]), root_opts(g));
    } else {
        sp = spectrum_count(A, count, root_opts(g));
    }
    emit_spectrum(g, "spectrum", sp, "json");
    if (sp.whole_plane) {
        std::cerr << "singular matrix: AD is not closed and its spectrum is the whole plane\n";
        return exit_code(ErrorKind::SingularMatrix);
    }
    return 0;
}

int cmd_cheb(const Globals& g, const std::string& alpha, const std::string& sign, double a, int nmax, bool high,
             const std::string& sweep) {
    auto [p, q] = read_ratio(alpha);
    int sg = read_sign(sign);
    if (!sweep.empty()) {
        auto [a0, a1, steps] = read_range(sweep);
        auto rows = cheb_sweep(p, q, sg, a0, a1, steps, nmax);
        std::ostringstream o;
        o << "a,d,re_lambda2,im_lambda2,root_index\n";
        for (const auto& r : rows)
            o << num(r.a) << "," << num(r.d) << "," << num(r.value.real()) << "," << num(r.value.imag()) << ","
              << r.root_index << "\n";
        output(g, "cheb_sweep", "csv", o.str());
        return 0;
    }
    ChebPoint pt = lambda_curve(p, q, sg, a);
    Spectrum sp = cheb_spectrum(pt, nmax, high);
    emit_spectrum(g, "cheb", sp, "csv");
    return 0;
}

int cmd_oracle(const Globals& g, const MatrixArgs& m, int n, int k) {
    Spectrum sp = oracle_spectrum(discretize(read_matrix(m), n), k);
    emit_spectrum(g, "oracle", sp, "json");
    return 0;
}

int cmd_resolvent(const Globals& g, const MatrixArgs& m, const std::string& zs, int n, bool dense) {
    cplx z = read_complex(zs);
    Discretization D = discretize(read_matrix(m), n);
    double v = dense ? resolvent_norm_dense(D, z) : resolvent_norm(D, z);
    std::string f = fmt_or(g, "json", {"json", "csv"});
    if (f == "csv")
        output(g, "resolvent", "csv", "re_z,im_z,n,norm\n" + num(z.real()) + "," + num(z.imag()) + "," +
                                          std::to_string(n) + "," + num(v) + "\n");
    else
        output(g, "resolvent", "json",
               json({{"z", jc(z)}, {"n", n}, {"norm", v}, {"note", "discretization proxy"}}).dump(2) + "\n");
    return 0;
}

int cmd_growth(const Globals& g, const MatrixArgs& m, double eps, int rmin, int rmax, int n) {
    if (rmin < 1 || rmax < rmin) throw Error(ErrorKind::InvalidInput, "need 1 <= rmin <= rmax");
    std::vector<int> rs;
    for (int r = rmin; r <= rmax; ++r) rs.push_back(r);
    auto rows = growth_probe(read_matrix(m), eps, rs, n, g.serial ? Exec::Serial : Exec::Parallel);
    std::ostringstream o;
    o << "r,re_z,im_z,norm_n,norm_2n\n";
    std::vector<double> x, y1, y2;
    for (const auto& r : rows) {
        o << r.r << "," << num(r.z.real()) << "," << num(r.z.imag()) << "," << num(r.norm_n) << "," << num(r.norm_2n)
          << "\n";
        x.push_back(r.r);
        y1.push_back(r.norm_n);
        y2.push_back(r.norm_2n);
    }
    output(g, "growth", "csv", o.str());
    if (rows.size() >= 2)
        std::cerr << "log-log slope: n=" << n << " " << loglog_slope(x, y1) << ", n=" << 2 * n << " "
                  << loglog_slope(x, y2) << "\n";
    return 0;
}

struct SweepArgs {
    std::string path = "segment", from, to, alpha = "2", sign = "+", arange, alphas, method = "secular";
    double a = 0.0;
    int steps = 10, count = 16, oracle_n = 200;
    bool verify = false;
};

int cmd_sweep(const Globals& g, const SweepArgs& s) {
    SweepSpec spec;
    spec.method = parse_sweep_method(s.method);
    spec.count = s.count;
    spec.tol = g.tol;
    spec.seed = g.seed;
    spec.verify = s.verify;
    spec.oracle_n = s.oracle_n;
    spec.exec = g.serial ? Exec::Serial : Exec::Parallel;
    spec.sign = read_sign(s.sign);
    if (s.path == "segment") {
        auto p0 = split_numbers({s.from}), p1 = split_numbers({s.to});
        if (p0.size() != 2 || p1.size() != 2) throw Error(ErrorKind::InvalidInput, "--from/--to need a,d");
        spec.path = PathKind::Segment;
        spec.a0 = p0[0];
        spec.d0 = p0[1];
        spec.a1 = p1[0];
        spec.d1 = p1[1];
        spec.steps = s.steps;
    } else if (s.path == "lambda") {
        auto [p, q] = read_ratio(s.alpha);
        auto [a0, a1, steps] = read_range(s.arange);
        spec.path = PathKind::Lambda;
        spec.p = p;
        spec.q = q;
        spec.a0 = a0;
        spec.a1 = a1;
        spec.steps = steps;
    } else if (s.path == "alpha") {
        spec.path = PathKind::AlphaList;
        spec.a0 = s.a;
        std::string list = s.alphas;
        for (char& ch : list)
            if (ch == ',') ch = ' ';
        std::istringstream is(list);
        std::string tok;
        while (is >> tok) spec.alphas.push_back(read_ratio(tok));
    } else {
        throw Error(ErrorKind::InvalidInput, "--path must be segment, lambda or alpha");
    }
    auto recs = run_sweep(spec);
    std::string f = fmt_or(g, "csv", {"csv", "json", "svg"});
    if (f == "csv") output(g, "sweep", "csv", to_csv(recs));
    if (f == "json") output(g, "sweep", "json", to_json(recs));
    if (f == "svg") output(g, "sweep", "svg", to_svg(recs));
    return 0;
}

int cmd_track(const Globals& g, double a, const std::string& range, int steps) {
    auto v = split_numbers({range}, ':');
    if (v.size() != 2) throw Error(ErrorKind::InvalidInput, "--d-range needs lo:hi");
    auto rows = track_negative_eigenvalue(a, v[0], v[1], steps, g.serial ? Exec::Serial : Exec::Parallel);
    output(g, "track_negative", "csv", negative_to_csv(rows));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"specmat: spectra of -d^2/dx^2 (x) A with Dirichlet/Neumann components"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--tol", g.tol, "root tolerance")->capture_default_str();
    app.add_option("--seed", g.seed, "seed for contour dilation and split offsets")->capture_default_str();
    app.add_option("--out", g.out, "write output files into DIR instead of stdout");
    app.add_option("--format", g.format, "csv, json or svg")->check(CLI::IsMember({"csv", "json", "svg"}));
    app.add_flag("--serial", g.serial, "run kernels single-threaded");
    app.fallthrough();

    MatrixArgs m;
    auto* classify = app.add_subcommand("classify", "canonical form, region and spectral prediction (JSON)");
    add_matrix(classify, m);

    std::string at;
    std::vector<double> grid;
    int nx = 200, ny = 200;
    auto* ev = app.add_subcommand("ev", "evaluate the secular function");
    add_matrix(ev, m);
    ev->add_option("--at", at, "re,im");
    ev->add_option("--grid", grid, "re0,re1,im0,im1: CSV of |EV| on a grid")->delimiter(',')->expected(4);
    ev->add_option("--nx", nx)->capture_default_str();
    ev->add_option("--ny", ny)->capture_default_str();

    int count = 12;
    std::vector<double> rect;
    auto* spec = app.add_subcommand("spectrum", "eigenvalues from the secular function");
    add_matrix(spec, m);
    spec->add_option("--count", count, "eigenvalues counting multiplicity")->capture_default_str();
    spec->add_option("--rect", rect, "lambda rectangle re0,re1,im0,im1 (lambda, not lambda^2)")
        ->delimiter(',')
        ->expected(4);

    std::string alpha = "2", sign = "+", csweep;
    double ca = 0.0;
    int nmax = 3;
    bool high = false;
    auto* cheb = app.add_subcommand("cheb", "exact spectrum on a Lambda curve");
    cheb->add_option("--alpha", alpha, "p/q")->capture_default_str();
    cheb->add_option("--sign", sign, "+ or -")->capture_default_str();
    cheb->add_option("--a", ca, "a coordinate")->capture_default_str();
    cheb->add_option("--nmax", nmax, "|n| <= nmax images per root")->capture_default_str();
    cheb->add_flag("--allow-high-degree", high, "allow p+q > 20");
    cheb->add_option("--sweep", csweep, "a0:a1:steps long-format CSV");

    int on = 200, ok = 8;
    auto* orc = app.add_subcommand("oracle", "finite-difference eigenvalues (discretization proxy)");
    add_matrix(orc, m);
    orc->add_option("-n", on)->capture_default_str();
    orc->add_option("-k", ok)->capture_default_str();

    std::string zs;
    int rn = 200;
    bool dense = false;
    auto* res = app.add_subcommand("resolvent", "1/sigma_min(M - z) (discretization proxy)");
    add_matrix(res, m);
    res->add_option("--z", zs, "re,im")->required();
    res->add_option("-n", rn)->capture_default_str();
    res->add_flag("--dense", dense, "full SVD instead of inverse iteration");

    double eps = 1.0;
    int rmin = 1, rmax = 6, gn = 300;
    auto* gro = app.add_subcommand("growth", "resolvent proxy along z(r) = 4 a pi^2 r^2 + i eps");
    add_matrix(gro, m);
    gro->add_option("--eps", eps)->capture_default_str();
    gro->add_option("--rmin", rmin)->capture_default_str();
    gro->add_option("--rmax", rmax)->capture_default_str();
    gro->add_option("-n", gn)->capture_default_str();

    SweepArgs sa;
    auto* sw = app.add_subcommand("sweep", "spectra along a path in the (a,d) plane of A4");
    sw->add_option("--path", sa.path, "segment, lambda or alpha")->capture_default_str();
    sw->add_option("--from", sa.from, "a,d (segment)");
    sw->add_option("--to", sa.to, "a,d (segment)");
    sw->add_option("--steps", sa.steps, "steps (segment)")->capture_default_str();
    sw->add_option("--alpha", sa.alpha, "p/q (lambda)")->capture_default_str();
    sw->add_option("--a-range", sa.arange, "a0:a1:steps (lambda)");
    sw->add_option("--a", sa.a, "fixed a (alpha)");
    sw->add_option("--alphas", sa.alphas, "comma list of p/q (alpha)");
    sw->add_option("--sign", sa.sign, "+ or -")->capture_default_str();
    sw->add_option("--method", sa.method, "secular, chebyshev or oracle")->capture_default_str();
    sw->add_option("--count", sa.count)->capture_default_str();
    sw->add_option("--oracle-n", sa.oracle_n)->capture_default_str();
    sw->add_flag("--verify", sa.verify, "recheck chebyshev steps against the secular method");

    double ta = -0.5;
    std::string drange;
    int tsteps = 100;
    auto* tr = app.add_subcommand("track-negative", "negative eigenvalue on the imaginary lambda axis");
    tr->add_option("--a", ta)->capture_default_str();
    tr->add_option("--d-range", drange, "lo:hi")->required();
    tr->add_option("--steps", tsteps)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*classify) return cmd_classify(g, m);
        if (*ev) return cmd_ev(g, m, at, grid, nx, ny);
        if (*spec) return cmd_spectrum(g, m, count, rect);
        if (*cheb) return cmd_cheb(g, alpha, sign, ca, nmax, high, csweep);
        if (*orc) return cmd_oracle(g, m, on, ok);
        if (*res) return cmd_resolvent(g, m, zs, rn, dense);
        if (*gro) return cmd_growth(g, m, eps, rmin, rmax, gn);
        if (*sw) return cmd_sweep(g, sa);
        if (*tr) return cmd_track(g, ta, drange, tsteps);
    } catch (const Error& e) {
        std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
