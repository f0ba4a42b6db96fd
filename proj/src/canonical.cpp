#include "specmat/canonical.hpp"
#include "specmat/errors.hpp"

#include <algorithm>
#include <cmath>

namespace specmat {

using std::abs;
constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;

const char* to_string(Family f) {
    switch (f) {
    case Family::A0: return "A0";
    case Family::A1: return "A1";
    case Family::A2: return "A2";
    case Family::A3: return "A3";
    case Family::A4: return "A4";
    }
    return "?";
}

const char* to_string(RegionTag t) {
    switch (t) {
    case RegionTag::R1: return "R1";
    case RegionTag::R2: return "R2";
    case RegionTag::R3: return "R3";
    case RegionTag::R4: return "R4";
    case RegionTag::R5: return "R5";
    case RegionTag::R6: return "R6";
    case RegionTag::Boundary: return "Boundary";
    }
    return "?";
}

const char* to_string(LocusKind k) {
    switch (k) {
    case LocusKind::WholePlane: return "WholePlane";
    case LocusKind::RealLine: return "RealLine";
    case LocusKind::NonnegativeHalfLine: return "NonnegativeHalfLine";
    case LocusKind::NonpositiveHalfLine: return "NonpositiveHalfLine";
    case LocusKind::Lattice: return "Lattice";
    case LocusKind::Sector: return "Sector";
    case LocusKind::DoubleSector: return "DoubleSector";
    case LocusKind::ParabolicBand: return "ParabolicBand";
    case LocusKind::Singleton0: return "Singleton0";
    case LocusKind::RealWithFormula: return "RealWithFormula";
    case LocusKind::InfiniteFinitelyManyReal: return "InfiniteFinitelyManyReal";
    }
    return "?";
}

const char* to_string(CertificateKind k) {
    switch (k) {
    case CertificateKind::DiagonalSymmetrizable: return "DiagonalSymmetrizable";
    case CertificateKind::SectorBound: return "SectorBound";
    case CertificateKind::NearReal: return "NearReal";
    }
    return "?";
}

CMatrix2 family_matrix(Family f, double a, double d) {
    switch (f) {
    case Family::A0: return CMatrix2::real(a, 0, 0, d);
    case Family::A1: return CMatrix2::real(a, 1, 1, d);
    case Family::A2: return CMatrix2::real(a, 0, 1, d);
    case Family::A3: return CMatrix2::real(a, 1, 0, d);
    case Family::A4: return CMatrix2::real(a, -1, 1, d);
    }
    return {};
}

CMatrix2 CanonicalForm::scaled() const { return family_matrix(family, a, d) * (sign * alpha); }

CMatrix2 CanonicalForm::reconstruct() const { return B() * scaled() * B().inverse(); }

CanonicalForm reduce_real(const CMatrix2& A) {
    if (!A.finite()) throw Error(ErrorKind::InvalidInput, "matrix has non-finite entries");
    if (!A.is_real(1e-14)) throw Error(ErrorKind::NonRealInput, "canonical reduction needs a real matrix");
    double a = A.a.real(), b = A.b.real(), c = A.c.real(), d = A.d.real();
    CanonicalForm f;
    f.a = a;
    f.d = d;
    if (b == 0.0 && c == 0.0) {
        f.family = Family::A0;
    } else if (b == 0.0) {
        f.family = Family::A2;
        f.r = 1.0 / c;
    } else if (c == 0.0) {
        f.family = Family::A3;
        f.r = b;
    } else if (b / c > 0.0) {
        f.family = Family::A1;
        f.alpha = std::sqrt(b * c);
        f.r = std::copysign(std::sqrt(b / c), b);
        f.a = a / f.alpha;
        f.d = d / f.alpha;
    } else {
        f.family = Family::A4;
        f.alpha = std::sqrt(-b * c);
        f.r = std::sqrt(-b / c);
        if (b < 0.0) {
            f.a = a / f.alpha;
            f.d = d / f.alpha;
        } else {
            f.sign = -1;
            f.a = -a / f.alpha;
            f.d = -d / f.alpha;
        }
    }
    return f;
}

namespace {

RegionTag strict_tag(double e6, double e1, double sum) {
    if (e6 < 0.0) return RegionTag::R2;
    if (e1 < 0.0) return RegionTag::R5;
    return sum > 0.0 ? RegionTag::R3 : RegionTag::R4;
}

const char* strict_detail(RegionTag t) {
    switch (t) {
    case RegionTag::R2: return "ad < -1";
    case RegionTag::R3: return "ad > -1, |a-d| > 2, a+d > 0";
    case RegionTag::R4: return "ad > -1, |a-d| > 2, a+d < 0";
    case RegionTag::R5: return "|a-d| < 2";
    default: return "";
    }
}

} // namespace

Region classify_region(double a, double d) {
    Region r;
    double e6 = a * d + 1.0;
    double e1 = abs(a - d) - 2.0;
    double sum = a + d;
    double exact6 = 1e-12 * (1.0 + abs(a * d)), exact1 = 1e-12 * (1.0 + abs(a) + abs(d));

    if (abs(e6) <= exact6) {
        r.tag = RegionTag::R6;
        r.detail = "ad = -1";
        return r;
    }
    if (abs(e1) <= exact1) {
        r.tag = RegionTag::R1;
        r.detail = abs(abs(a) - 1.0) <= 1e-12 ? "|a-d| = 2 (a = +-1 with ad != -1; defective, grouped with R1)"
                                              : "|a-d| = 2, a != +-1";
        return r;
    }
    bool near6 = abs(e6) <= kBoundaryTol, near1 = abs(e1) <= kBoundaryTol;
    if (near6 || near1) {
        r.tag = RegionTag::Boundary;
        std::vector<RegionTag> nb;
        if (near6) nb.push_back(RegionTag::R6);
        if (near1) nb.push_back(RegionTag::R1);
        for (double s6 : near6 ? std::vector<double>{-1.0, 1.0} : std::vector<double>{e6})
            for (double s1 : near1 ? std::vector<double>{-1.0, 1.0} : std::vector<double>{e1}) {
                RegionTag t = strict_tag(s6, s1, sum);
                if (std::find(nb.begin(), nb.end(), t) == nb.end()) nb.push_back(t);
            }
        r.neighbors = nb;
        r.detail = near6 ? "within tolerance of ad = -1" : "within tolerance of |a-d| = 2";
        return r;
    }
    r.tag = strict_tag(e6, e1, sum);
    r.detail = strict_detail(r.tag);
    if (r.tag == RegionTag::R5 && abs(a * a - a * d - 1.0) <= kBoundaryTol) {
        r.on_real_curve = true;
        r.detail += ", on a^2 - ad - 1 = 0";
    }
    return r;
}

std::pair<cplx, cplx> a4_eigs(double a, double d) {
    double disc = (a - d) * (a - d) - 4.0;
    double p = a * d + 1.0;
    if (disc >= 0.0) {
        double s = std::sqrt(disc);
        if (a + d >= 0.0) {
            double bp = 0.5 * (a + d + s);
            return {bp, bp != 0.0 ? p / bp : 0.5 * (a + d - s)};
        }
        double bm = 0.5 * (a + d - s);
        return {bm != 0.0 ? p / bm : 0.5 * (a + d + s), bm};
    }
    cplx s = std::sqrt(cplx(disc, 0.0));
    return {0.5 * (a + d + s), 0.5 * (a + d - s)};
}

namespace {

double lattice_distance(double g, cplx z) {
    double unit = g * kPi2;
    if (unit == 0.0) return abs(z);
    double t = z.real() / unit;
    double k0 = std::floor(std::sqrt(std::max(t, 0.0)));
    double best = abs(z);
    for (double k = std::max(0.0, k0 - 1.0); k <= k0 + 2.0; k += 1.0) best = std::min(best, abs(z - unit * k * k));
    return best;
}

Sector rotate(const Sector& s, double ang) { return {s.lo + ang, s.hi + ang}; }

// locus for the canonical matrix, then multiplied by the real factor s
void apply_scale(SpectralPrediction& p, double s) {
    for (auto& g : p.generators) g *= s;
    for (auto& v : p.values) v *= s;
    if (s < 0.0) {
        if (p.locus == LocusKind::NonnegativeHalfLine)
            p.locus = LocusKind::NonpositiveHalfLine;
        else if (p.locus == LocusKind::NonpositiveHalfLine)
            p.locus = LocusKind::NonnegativeHalfLine;
        if (p.sector) p.sector = rotate(*p.sector, kPi);
        p.band_direction = -p.band_direction;
        if (p.resolvent_bound)
            for (auto& sec : p.resolvent_bound->excluded) sec = rotate(sec, kPi);
    }
    p.scale *= s;
    for (auto& alt : p.alternatives) apply_scale(alt, s);
}

void materialize(SpectralPrediction& p, double lambda_max) {
    p.values.clear();
    for (double g : p.generators) {
        if (g == 0.0) continue;
        for (long k = 0;; ++k) {
            double v = g * kPi2 * k * k;
            if (abs(v) > lambda_max) break;
            p.values.push_back(v);
        }
    }
    std::sort(p.values.begin(), p.values.end(), [](double x, double y) { return abs(x) < abs(y); });
    p.values.erase(std::unique(p.values.begin(), p.values.end(),
                               [](double x, double y) { return abs(x - y) <= 1e-12 * (1.0 + abs(x)); }),
                   p.values.end());
}

ResolventBound single_sector(double sign) {
    ResolventBound rb;
    rb.excluded.push_back(sign > 0 ? Sector{0.0, 0.0} : Sector{kPi, kPi});
    rb.statement = "||(AD-z)^-1|| <= k_eps/|z| outside S(-eps, eps) around the excluded ray";
    return rb;
}

ResolventBound double_sector(double w) {
    ResolventBound rb;
    rb.excluded = {Sector{-w, w}, Sector{kPi - w, kPi + w}};
    rb.statement = "||(AD-z)^-1|| <= k_eps/|z| outside the eps-widened double sector";
    return rb;
}

SpectralPrediction region_prediction(RegionTag tag, double a, double d, const Region& reg, double lambda_max) {
    SpectralPrediction p;
    p.theorems.push_back("A4 region " + std::string(to_string(tag)));
    switch (tag) {
    case RegionTag::R6:
        p.locus = LocusKind::WholePlane;
        p.theorems.push_back("singular A: AD not closed, spectrum is C");
        break;
    case RegionTag::R2:
        p.locus = LocusKind::RealLine;
        p.resolvent_bound = double_sector(0.0);
        p.theorems.push_back("ad < -1: similar to self-adjoint with numerical range R");
        break;
    case RegionTag::R3:
    case RegionTag::R4:
        p.locus = LocusKind::ParabolicBand;
        p.band_direction = tag == RegionTag::R3 ? 1 : -1;
        p.theorems.push_back("R3/R4: spectrum inside a parabolic band, height y0 unspecified");
        break;
    case RegionTag::R5: {
        bool curve = reg.on_real_curve || abs(a * a - a * d - 1.0) <= kBoundaryTol;
        if (curve && a - d < 0.0 && a - d > -2.0) {
            cplx bp = a4_eigs(a, d).first;
            double im = (1.0 / std::sqrt(bp)).imag();
            p.locus = LocusKind::RealWithFormula;
            p.generators = {-1.0 / (im * im)};
            p.theorems.push_back("R5 curve, -2 < a-d < 0: {-k^2 pi^2 / Im(b+^-1/2)^2}");
        } else if (curve && a - d > 0.0 && a - d < 2.0) {
            cplx bp = a4_eigs(a, d).first;
            double re = (1.0 / std::sqrt(bp)).real();
            p.locus = LocusKind::RealWithFormula;
            p.generators = {1.0 / (re * re)};
            p.theorems.push_back("R5 curve, 0 < a-d < 2: {k^2 pi^2 / Re(b+^-1/2)^2}");
        } else {
            p.locus = LocusKind::InfiniteFinitelyManyReal;
            p.theorems.push_back("R5 off the curve: infinite, finitely many real points");
        }
        break;
    }
    case RegionTag::R1:
        if ((abs(a - 0.5) <= kBoundaryTol && abs(d + 1.5) <= kBoundaryTol) ||
            (abs(a + 0.5) <= kBoundaryTol && abs(d - 1.5) <= kBoundaryTol)) {
            p.locus = LocusKind::Singleton0;
            p.theorems.push_back("R1 at (+-1/2, -+3/2): spectrum {0}");
        } else {
            p.locus = LocusKind::InfiniteFinitelyManyReal;
            p.theorems.push_back("R1: infinite, finitely many real points");
        }
        break;
    case RegionTag::Boundary:
        break;
    }
    if (p.locus != LocusKind::WholePlane && a * d > 0.0) {
        double w = std::asin(1.0 / std::sqrt(a * d + 1.0));
        Sector s{-w, w};
        if (a < 0.0) s = rotate(s, kPi);
        p.sector = s;
        p.theorems.push_back("a, d same sign: numerical-range sector, sin w = 1/sqrt(ad+1)");
        ResolventBound rb;
        rb.excluded = {s};
        rb.statement = "||(AD-z)^-1|| <= k_eps/|z| outside the eps-widened sector";
        if (!p.resolvent_bound) p.resolvent_bound = rb;
    }
    materialize(p, lambda_max);
    return p;
}

} // namespace

double SpectralPrediction::distance(cplx z) const {
    if (!alternatives.empty()) {
        double best = INFINITY;
        for (const auto& alt : alternatives) best = std::min(best, alt.distance(z));
        return best;
    }
    double base = 0.0;
    switch (locus) {
    case LocusKind::WholePlane:
    case LocusKind::InfiniteFinitelyManyReal:
        base = 0.0;
        break;
    case LocusKind::RealLine:
        base = abs(z.imag());
        break;
    case LocusKind::NonnegativeHalfLine:
        base = z.real() >= 0.0 ? abs(z.imag()) : abs(z);
        break;
    case LocusKind::NonpositiveHalfLine:
        base = z.real() <= 0.0 ? abs(z.imag()) : abs(z);
        break;
    case LocusKind::Lattice:
    case LocusKind::RealWithFormula: {
        base = INFINITY;
        for (double g : generators) base = std::min(base, lattice_distance(g, z));
        if (generators.empty()) base = abs(z);
        break;
    }
    case LocusKind::Sector:
        return sector ? sector->distance(z) : 0.0;
    case LocusKind::DoubleSector:
        return sector ? std::min(sector->distance(z), sector->distance(-z)) : 0.0;
    case LocusKind::ParabolicBand: {
        if (band_height) {
            cplx w = band_direction >= 0 ? z : -z;
            double y0 = *band_height;
            double edge = w.imag() * w.imag() / (4.0 * y0 * y0) - y0 * y0;
            base = std::max(0.0, edge - w.real());
        }
        break;
    }
    case LocusKind::Singleton0:
        base = abs(z);
        break;
    }
    if (sector) base = std::max(base, sector->distance(z));
    return base;
}

SpectralPrediction predict_a4(double a, double d, double lambda_max) {
    Region reg = classify_region(a, d);
    SpectralPrediction p;
    if (reg.tag == RegionTag::Boundary) {
        for (RegionTag t : reg.neighbors) p.alternatives.push_back(region_prediction(t, a, d, reg, lambda_max));
        p.locus = p.alternatives.front().locus;
        p.theorems.push_back("boundary point: alternatives from both neighbouring regimes");
    } else {
        p = region_prediction(reg.tag, a, d, reg, lambda_max);
    }
    p.region = reg;
    return p;
}

SpectralPrediction predict(const CMatrix2& A, double lambda_max) {
    SpectralPrediction p;
    p.theorems.push_back("0 is an eigenvalue (constant eigenfunction)");
    CanonicalForm cf = reduce_real(A);
    if (A.is_singular()) {
        p.locus = LocusKind::WholePlane;
        p.theorems.push_back("singular A: AD not closed, spectrum is C");
        p.canonical = cf;
        return p;
    }
    double a = cf.a, d = cf.d;
    switch (cf.family) {
    case Family::A0:
    case Family::A2:
    case Family::A3:
        p.locus = LocusKind::Lattice;
        p.generators = {a, d};
        p.theorems.push_back(cf.family == Family::A0 ? "diagonal: decoupled lattices {a pi^2 k^2, d pi^2 k^2}"
                                                     : "triangular: spec = {a pi^2 n^2, d pi^2 n^2}");
        if (a * d > 0.0) {
            p.resolvent_bound = single_sector(a);
        } else {
            p.resolvent_bound = double_sector(0.0);
        }
        if (cf.family == Family::A0 && a * d < 0.0)
            p.theorems.push_back("real diagonal: AD self-adjoint");
        materialize(p, lambda_max);
        break;
    case Family::A1:
        if (a * d > 1.0 && a > 0.0) {
            p.locus = LocusKind::NonnegativeHalfLine;
            p.theorems.push_back("A1, ad > 1, a,d > 0: similar to non-negative self-adjoint");
        } else if (a * d > 1.0) {
            p.locus = LocusKind::NonpositiveHalfLine;
            p.theorems.push_back("A1, ad > 1, a,d < 0: -AD similar to non-negative self-adjoint");
        } else {
            p.locus = LocusKind::RealLine;
            p.theorems.push_back("A1, ad < 1: spectrum real");
        }
        break;
    case Family::A4: {
        SpectralPrediction q = predict_a4(a, d, lambda_max / cf.alpha);
        q.theorems.insert(q.theorems.begin(), p.theorems.begin(), p.theorems.end());
        p = q;
        apply_scale(p, cf.sign * cf.alpha);
        break;
    }
    }
    p.canonical = cf;
    return p;
}

double odd_inverse_fourth_sum() {
    // tail after M terms is below 1 / (6 (2M-1)^3)
    long M = 1;
    while (1.0 / (6.0 * std::pow(2.0 * M - 1.0, 3)) >= 1e-14) M *= 2;
    double s = 0.0;
    for (long m = M; m >= 1; --m) {
        double t = 2.0 * m - 1.0;
        t *= t;
        s += 1.0 / (t * t);
    }
    return s;
}

PerturbationCoeffs perturbation_coeffs(const CMatrix2& A) {
    if (A.is_singular()) throw Error(ErrorKind::SingularMatrix, "perturbation series needs an invertible A");
    PerturbationCoeffs pc;
    pc.mu1 = A.a / A.det();
    if (abs(pc.mu1) <= 1e-12) {
        cplx bc = A.b * A.c;
        pc.mu2 = -8.0 / (bc * kPi2 * kPi2) * odd_inverse_fourth_sum();
    }
    return pc;
}

std::vector<Certificate> similarity_certificates(const CMatrix2& A) {
    if (!A.finite()) throw Error(ErrorKind::InvalidInput, "matrix has non-finite entries");
    if (A.is_singular()) throw Error(ErrorKind::SingularMatrix, "certificates need an invertible A");
    std::vector<Certificate> out;
    double sc = std::max(1.0, A.norm());
    double tol = 1e-14 * sc;

    // (i) closed-form diagonal symmetrization
    if (abs(A.a.imag()) <= tol && abs(A.d.imag()) <= tol) {
        double a = A.a.real(), d = A.d.real();
        bool ok = false;
        double r = 1.0, off = 0.0;
        if (A.b == 0.0 && A.c == 0.0) {
            ok = true;
        } else if (A.b != 0.0 && A.c != 0.0) {
            cplx bc = A.b * A.c;
            if (bc.real() > 0.0 && abs(bc.imag()) <= 1e-12 * abs(bc)) {
                ok = true;
                r = std::sqrt(abs(A.c) / abs(A.b));
                off = abs(bc);
            }
        }
        if (ok) {
            double det = a * d - off;
            Certificate c{CertificateKind::DiagonalSymmetrizable, CMatrix2::diag(1.0, r), r, {}, 0.0, ""};
            if (a > 0.0 && det > 0.0) {
                c.conclusion = "B^-1 A B Hermitian positive definite: AD similar to a non-negative self-adjoint operator";
                out.push_back(c);
            } else if (a < 0.0 && det > 0.0) {
                c.conclusion = "B^-1 A B Hermitian negative definite: -AD similar to a non-negative self-adjoint operator";
                out.push_back(c);
            }
        }
    }

    std::vector<double> grid;
    for (int k = 0; k < 200; ++k) grid.push_back(std::pow(10.0, -3.0 + 6.0 * k / 199.0));
    grid.push_back(1.0);

    // (ii) sector containing W(B^-1 A B), B = diag(1, r)
    {
        std::optional<Certificate> best;
        for (double r : grid) {
            CMatrix2 C{A.a, A.b * r, A.c / r, A.d};
            auto s = enclosing_sector(numerical_range(C));
            if (!s || s->width() >= kPi) continue;
            if (!best || s->width() < best->sector->width()) {
                best = Certificate{CertificateKind::SectorBound, CMatrix2::diag(1.0, r), r, s, 0.5 * s->width(), ""};
            }
        }
        if (best) {
            best->conclusion = "W(B^-1 A B) in a sector of opening < pi: spectrum in the same sector";
            out.push_back(*best);
        }
    }

    // (iii) ||A(r) B - I|| < 1 with B = diag(1/Re a, 1/Re d), A(r) = diag(1,r) A diag(1,1/r)
    if (A.a.real() != 0.0 && A.d.real() != 0.0) {
        CMatrix2 Bm = CMatrix2::diag(1.0 / A.a.real(), 1.0 / A.d.real());
        double bestv = INFINITY, bestr = 1.0;
        for (double r : grid) {
            CMatrix2 Ar{A.a, A.b / r, A.c * r, A.d};
            double v = (Ar * Bm - CMatrix2::identity()).norm();
            if (v < bestv) {
                bestv = v;
                bestr = r;
            }
        }
        if (bestv < 1.0) {
            double w = std::asin(bestv);
            Certificate c{CertificateKind::NearReal, Bm, bestr, Sector{-w, w}, w, ""};
            c.conclusion = "||A(r) B - I|| < 1 with real diagonal B: spectrum in S(-w,w) u S(pi-w,pi+w)";
            out.push_back(c);
        }
    }
    return out;
}

} // namespace specmat
