#include "specmat/mat2.hpp"
#include "specmat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace specmat {

using std::abs;

double CVec2::norm() const { return std::hypot(abs(x), abs(y)); }

cplx CVec2::dot(const CVec2& o) const { return std::conj(x) * o.x + std::conj(y) * o.y; }

CMatrix2 CMatrix2::real(double a, double b, double c, double d) { return {a, b, c, d}; }
CMatrix2 CMatrix2::identity() { return {1.0, 0.0, 0.0, 1.0}; }
CMatrix2 CMatrix2::diag(cplx a, cplx d) { return {a, 0.0, 0.0, d}; }
CMatrix2 CMatrix2::from_columns(const CVec2& u, const CVec2& v) { return {u.x, v.x, u.y, v.y}; }

double CMatrix2::frobenius() const {
    return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
}

double CMatrix2::norm() const {
    // sigma_max^2 = (F^2 + sqrt(F^4 - 4|det|^2)) / 2
    double f2 = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
    double dt = abs(det());
    double disc = std::max(0.0, f2 * f2 - 4.0 * dt * dt);
    return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
}

bool CMatrix2::finite() const {
    for (cplx z : {a, b, c, d})
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

bool CMatrix2::is_real(double tol) const {
    double s = tol * std::max(1.0, frobenius());
    for (cplx z : {a, b, c, d})
        if (abs(z.imag()) > s) return false;
    return true;
}

bool CMatrix2::is_singular() const {
    double n = norm();
    return abs(det()) <= 1e-14 * n * n;
}

CMatrix2 CMatrix2::adjoint() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }

CMatrix2 CMatrix2::inverse() const {
    cplx dt = det();
    if (dt == 0.0) throw Error(ErrorKind::SingularMatrix, "matrix is singular");
    return {d / dt, -b / dt, -c / dt, a / dt};
}

CMatrix2 CMatrix2::operator*(const CMatrix2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}
CMatrix2 CMatrix2::operator+(const CMatrix2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
CMatrix2 CMatrix2::operator-(const CMatrix2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
CMatrix2 CMatrix2::operator*(cplx s) const { return {a * s, b * s, c * s, d * s}; }
CVec2 CMatrix2::operator*(const CVec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }

std::string CMatrix2::str() const {
    std::ostringstream os;
    os.precision(17);
    os << "(" << a << ", " << b << "; " << c << ", " << d << ")";
    return os.str();
}

const char* to_string(JordanKind k) {
    switch (k) {
    case JordanKind::Distinct: return "Distinct";
    case JordanKind::Scalar: return "Scalar";
    case JordanKind::Defective: return "Defective";
    }
    return "?";
}

CVec2 gauge_normalize(const CVec2& v) {
    double n = v.norm();
    if (n == 0.0) return v;
    cplx lead = abs(v.x) > 1e-14 * n ? v.x : v.y;
    cplx ph = std::conj(lead) / abs(lead);
    return {v.x * ph / n, v.y * ph / n};
}

namespace {

CVec2 eigvec(const CMatrix2& A, cplx mu) {
    CVec2 u1{A.b, mu - A.a};
    CVec2 u2{mu - A.d, A.c};
    return gauge_normalize(u1.norm() >= u2.norm() ? u1 : u2);
}

double cond_of(const CVec2& p, const CVec2& m) {
    // unit vectors: 1 - g^2 = sin^2 of the angle = |det(p, m)|^2
    double g = std::min(1.0, abs(p.dot(m)));
    double sn = abs(p.x * m.y - p.y * m.x);
    if (sn == 0.0) return INFINITY;
    return (1.0 + g) / sn;
}

} // namespace

bool Eigen2::near_defective(double norm_a) const {
    return kind == JordanKind::Distinct && abs(a_plus - a_minus) <= 1e-7 * (1.0 + norm_a) &&
           eigvec_cond > 1e7;
}

Eigen2 defective_jordan(const CMatrix2& A) {
    // N is (nearly) rank one and nilpotent; its dominant column spans the
    // eigenspace and the matching scaled unit vector is a chain vector.
    cplx m = 0.5 * A.trace();
    CMatrix2 N = A - CMatrix2::diag(m, m);
    CVec2 c0 = N.col0(), c1 = N.col1();
    bool first = c0.norm() >= c1.norm();
    CVec2 col = first ? c0 : c1;
    double cn = col.norm();
    if (cn == 0.0) throw Error(ErrorKind::InvalidInput, "scalar matrix has no Jordan chain");
    CVec2 v{col.x / cn, col.y / cn};
    CVec2 vg = gauge_normalize(v);
    cplx ph = abs(v.x) > 1e-14 ? vg.x / v.x : vg.y / v.y;
    CVec2 w = first ? CVec2{ph / cn, 0.0} : CVec2{0.0, ph / cn};
    Eigen2 e;
    e.kind = JordanKind::Defective;
    e.a_plus = e.a_minus = m;
    e.v_plus = e.v_minus = vg;
    e.V = CMatrix2::from_columns(w, vg);
    e.C = {m, 0.0, 1.0, m};
    e.eigvec_cond = INFINITY;
    return e;
}

Eigen2 eig2(const CMatrix2& A) {
    Eigen2 e;
    cplx m = 0.5 * A.trace();
    cplx s = std::sqrt(0.25 * (A.a - A.d) * (A.a - A.d) + A.b * A.c);
    cplx dt = A.det();
    cplx p = m + s, q = m - s;
    if (abs(p) >= abs(q)) {
        e.a_plus = p;
        e.a_minus = p != 0.0 ? dt / p : q;
    } else {
        e.a_minus = q;
        e.a_plus = dt / q;
    }

    double na = A.norm();
    if (abs(e.a_plus - e.a_minus) <= 1e-8 * (1.0 + na)) {
        CMatrix2 N = A - CMatrix2::diag(m, m);
        if (N.norm() <= 1e-12 * (1.0 + na)) {
            e.kind = JordanKind::Scalar;
            e.a_plus = e.a_minus = m;
            e.v_plus = {1.0, 0.0};
            e.v_minus = {0.0, 1.0};
            e.V = CMatrix2::identity();
            e.C = CMatrix2::diag(m, m);
            return e;
        }
        CVec2 vp = eigvec(A, e.a_plus), vm = eigvec(A, e.a_minus);
        double cnd = cond_of(vp, vm);
        if (cnd > 1e8) {
            Eigen2 d = defective_jordan(A);
            d.eigvec_cond = cnd;
            return d;
        }
        e.v_plus = vp;
        e.v_minus = vm;
        e.eigvec_cond = cnd;
    } else {
        e.v_plus = eigvec(A, e.a_plus);
        e.v_minus = eigvec(A, e.a_minus);
        e.eigvec_cond = cond_of(e.v_plus, e.v_minus);
    }
    e.kind = JordanKind::Distinct;
    e.V = CMatrix2::from_columns(e.v_plus, e.v_minus);
    e.C = CMatrix2::diag(e.a_plus, e.a_minus);
    return e;
}

CMatrix2 adjoint_projection(const CMatrix2& A) {
    if (A.is_singular())
        throw Error(ErrorKind::SingularMatrix, "adjoint projection undefined: A is singular");
    cplx cd = std::conj(A.det());
    CVec2 u{std::conj(A.d), -std::conj(A.b)};
    CVec2 v{std::conj(A.a), std::conj(A.c)};
    return {u.x * v.x / cd, u.x * v.y / cd, u.y * v.x / cd, u.y * v.y / cd};
}

bool Ellipse::contains(cplx z, double tol) const {
    return abs(z - focus1) + abs(z - focus2) <= major_axis_length + tol;
}

Ellipse numerical_range(const CMatrix2& A) {
    Eigen2 e = eig2(A);
    Ellipse el;
    el.focus1 = e.a_plus;
    el.focus2 = e.a_minus;
    double f2 = A.frobenius();
    f2 *= f2;
    double m2 = f2 - std::norm(e.a_plus) - std::norm(e.a_minus);
    if (m2 < 1e-14 * f2) m2 = 0.0;
    el.minor_axis_length = std::sqrt(m2);
    double sep = abs(e.a_plus - e.a_minus);
    el.major_axis_length = std::sqrt(m2 + sep * sep);
    el.contains_origin = el.contains(0.0, 1e-14 * std::max(1.0, el.major_axis_length));
    return el;
}

bool Sector::contains(cplx z, double tol) const {
    if (abs(z) <= tol) return true;
    double t = std::arg(z);
    double c = center();
    double off = std::remainder(t - c, 2.0 * std::numbers::pi);
    if (abs(off) <= half_width()) return true;
    return distance(z) <= tol;
}

double Sector::distance(cplx z) const {
    double t = std::arg(z);
    double off = std::remainder(t - center(), 2.0 * std::numbers::pi);
    if (abs(off) <= half_width()) return 0.0;
    double best = abs(z);
    for (double ang : {lo, hi}) {
        cplx r = z * std::polar(1.0, -ang);
        if (r.real() > 0.0) best = std::min(best, abs(r.imag()));
    }
    return best;
}

std::optional<Sector> enclosing_sector(const Ellipse& e) {
    if (e.contains_origin) return std::nullopt;
    cplx c = e.center();
    double A = 0.5 * e.major_axis_length, B = 0.5 * e.minor_axis_length;
    cplx sep = e.focus1 - e.focus2;
    cplx rot = abs(sep) > 0.0 ? sep / abs(sep) : cplx(1.0);
    double base = std::arg(c);
    auto rel = [&](cplx z) { return std::arg(z * std::polar(1.0, -base)); };

    double t1, t2;
    if (B == 0.0) {
        t1 = rel(c + rot * A);
        t2 = rel(c - rot * A);
    } else {
        // tangency: Im(conj(z) z') = 0 on z = c + rot (A cos th + i B sin th)
        cplx kap = std::conj(c) * rot;
        double p = B * kap.real(), q = -A * kap.imag();
        double R = std::hypot(p, q);
        double rhs = -A * B / R;
        if (!(R > 0.0) || abs(rhs) >= 1.0) return std::nullopt;
        double del = std::atan2(-q, p);
        double ac = std::acos(rhs);
        auto at = [&](double th) { return c + rot * cplx(A * std::cos(th), B * std::sin(th)); };
        t1 = rel(at(ac - del));
        t2 = rel(at(-ac - del));
    }
    Sector s;
    s.lo = base + std::min(t1, t2);
    s.hi = base + std::max(t1, t2);
    return s;
}

} // namespace specmat
