#include "specmat/secular.hpp"
#include "specmat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace specmat {

using std::abs;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
const cplx I1(0.0, 1.0);

cplx snap(cplx v, double scale) { return abs(v) <= 64.0 * kEps * scale ? cplx(0.0) : v; }

} // namespace

cplx ScaledValue::value() const { return mantissa * std::exp(log_scale); }

double ScaledValue::log_abs() const { return std::log(abs(mantissa)) + log_scale; }

const char* to_string(SecularKind k) {
    return k == SecularKind::Diagonalizable ? "Diagonalizable" : "Defective";
}

SecularFn SecularFn::build(const CMatrix2& A) {
    if (!A.finite()) throw Error(ErrorKind::InvalidInput, "matrix has non-finite entries");
    if (A.is_singular())
        throw Error(ErrorKind::SingularMatrix, "A is singular: AD is not closed, spectrum is C");
    return from_jordan(A, eig2(A));
}

SecularFn SecularFn::from_jordan(const CMatrix2& A, const Eigen2& e) {
    SecularFn s;
    s.A_ = A;
    s.eig_ = e;
    const CMatrix2& V = e.V;
    cplx v1 = V.a, v2 = V.b, v3 = V.c, v4 = V.d;
    if (e.kind == JordanKind::Defective) {
        cplx a = e.a_plus;
        if (a == 0.0) throw Error(ErrorKind::SingularMatrix, "zero eigenvalue");
        s.kind_ = SecularKind::Defective;
        s.sp_ = s.sm_ = std::sqrt(a);
        cplx dv = V.det(), t = v2 * v4 / (2.0 * a);
        cplx lc = snap(dv + t, abs(dv) + abs(t));
        cplx L = lc * lc;
        s.p2_ = v2 * v2 * v4 * v4 / (4.0 * a * a * a);
        s.c1_ = 0.5 * L;
        s.c0_ = -s.c1_;
        s.c2_ = 0.0;
        s.w1_ = 2.0 / s.sp_;
        s.w2_ = 0.0;
        return s;
    }
    if (e.a_plus == 0.0 || e.a_minus == 0.0)
        throw Error(ErrorKind::SingularMatrix, "zero eigenvalue");
    s.kind_ = SecularKind::Diagonalizable;
    s.sp_ = std::sqrt(e.a_plus);
    s.sm_ = std::sqrt(e.a_minus);
    cplx P = v1 * v2 * v3 * v4;
    cplx q1 = v1 * v1 * v4 * v4 * (s.sp_ / s.sm_);
    cplx q2 = v2 * v2 * v3 * v3 * (s.sm_ / s.sp_);
    cplx Q = q1 + q2;
    double sc = abs(P) + 0.5 * (abs(q1) + abs(q2));
    s.p2_ = 0.0;
    s.c1_ = snap(0.5 * Q - P, sc);
    s.c2_ = snap(-(P + 0.5 * Q), sc);
    s.c0_ = -(s.c1_ + s.c2_);
    s.w1_ = 1.0 / s.sp_ + 1.0 / s.sm_;
    s.w2_ = 1.0 / s.sp_ - 1.0 / s.sm_;
    return s;
}

double SecularFn::frequency() const {
    double f = 0.0;
    if (c1_ != 0.0) f = std::max(f, abs(w1_));
    if (c2_ != 0.0) f = std::max(f, abs(w2_));
    return std::max(f, 1e-3);
}

ScaledValue SecularFn::eval_scaled(cplx x) const {
    ScaledValue r;
    if (x == 0.0) return r;
    cplx t1 = w1_ * x, t2 = w2_ * x;
    double E = 0.0;
    if (c1_ != 0.0) E = std::max(E, abs(t1.imag()));
    if (c2_ != 0.0) E = std::max(E, abs(t2.imag()));
    r.log_scale = E;
    double ex = std::exp(-E);
    cplx acc = c0_ * ex;
    double mag = abs(acc);
    if (p2_ != 0.0) {
        cplx p = p2_ * x * x * ex;
        acc += p;
        mag += abs(p);
    }
    auto add_cos = [&](cplx c, cplx t) {
        if (c == 0.0) return;
        // c cos t = c/2 (e^{it} + e^{-it}), scaled by e^{-E}
        cplx ep = std::exp(cplx(-t.imag() - E, t.real()));
        cplx em = std::exp(cplx(t.imag() - E, -t.real()));
        cplx h = 0.5 * c;
        acc += h * (ep + em);
        mag += abs(h) * (abs(ep) + abs(em));
    };
    add_cos(c1_, t1);
    add_cos(c2_, t2);
    r.mantissa = acc;
    r.magnitude = mag;
    return r;
}

ScaledValue SecularFn::eval_deriv_scaled(cplx x) const {
    ScaledValue r;
    cplx t1 = w1_ * x, t2 = w2_ * x;
    double E = 0.0;
    if (c1_ != 0.0) E = std::max(E, abs(t1.imag()));
    if (c2_ != 0.0) E = std::max(E, abs(t2.imag()));
    r.log_scale = E;
    double ex = std::exp(-E);
    cplx acc = 2.0 * p2_ * x * ex;
    double mag = abs(acc);
    auto add_sin = [&](cplx c, cplx w, cplx t) {
        if (c == 0.0) return;
        // -c w sin t = -c w (e^{it} - e^{-it}) / (2i)
        cplx ep = std::exp(cplx(-t.imag() - E, t.real()));
        cplx em = std::exp(cplx(t.imag() - E, -t.real()));
        cplx h = -c * w / (2.0 * I1);
        acc += h * (ep - em);
        mag += abs(h) * (abs(ep) + abs(em));
    };
    add_sin(c1_, w1_, t1);
    add_sin(c2_, w2_, t2);
    r.mantissa = acc;
    r.magnitude = mag;
    return r;
}

cplx SecularFn::eval(cplx x) const { return eval_scaled(x).value(); }

cplx SecularFn::eval_deriv(cplx x) const { return eval_deriv_scaled(x).value(); }

cplx SecularFn::log_derivative(cplx x) const {
    ScaledValue f = eval_scaled(x), g = eval_deriv_scaled(x);
    return g.mantissa / f.mantissa * std::exp(g.log_scale - f.log_scale);
}

cplx SecularFn::gauge_constant(const CVec2& ref_plus, const CVec2& ref_minus) const {
    cplx s = eig_.v_plus.dot(ref_plus);
    if (kind_ == SecularKind::Defective) return s * s * s * s;
    cplx t = eig_.v_minus.dot(ref_minus);
    return s * s * t * t;
}

bool SecularFn::near_defective() const { return eig_.near_defective(A_.norm()); }

SecularFn SecularFn::defective_companion() const { return from_jordan(A_, defective_jordan(A_)); }

namespace {

// f applied to the lower-triangular T = (t1, 0; tau, t2)
template <class F, class DF>
CMatrix2 tri_fn(const CMatrix2& T, F f, DF df) {
    cplx t1 = T.a, t2 = T.d, tau = T.c;
    cplx f1 = f(t1), f2 = f(t2);
    cplx dd;
    if (abs(t1 - t2) <= 1e-8 * (1.0 + abs(t1)))
        dd = df(0.5 * (t1 + t2));
    else
        dd = (f1 - f2) / (t1 - t2);
    return {f1, 0.0, tau * dd, f2};
}

cplx sinc(cplx k) {
    if (abs(k) < 1e-4) return 1.0 - k * k / 6.0;
    return std::sin(k) / k;
}

cplx dsinc(cplx k) {
    if (abs(k) < 1e-3) return -k / 3.0 + k * k * k / 30.0;
    return (k * std::cos(k) - std::sin(k)) / (k * k);
}

} // namespace

CMatrix4 fundamental_matrix(const CMatrix2& C, cplx lambda, double x) {
    if (C.b != 0.0) throw Error(ErrorKind::InvalidInput, "Jordan matrix must be lower triangular");
    double sc = std::max(1.0, C.norm());
    if (abs(C.a) <= 1e-14 * sc || abs(C.d) <= 1e-14 * sc)
        throw Error(ErrorKind::SingularJordan, "Jordan matrix is singular");

    CMatrix2 Cm = tri_fn(
        C, [](cplx t) { return 1.0 / std::sqrt(t); },
        [](cplx t) { return -0.5 / (t * std::sqrt(t)); });
    CMatrix2 K = Cm * (lambda * x);
    CMatrix2 cK = tri_fn(
        K, [](cplx k) { return std::cos(k); }, [](cplx k) { return -std::sin(k); });
    CMatrix2 sK = tri_fn(K, sinc, dsinc);
    CMatrix2 Ci = C.inverse();
    CMatrix2 x12 = sK * x;
    CMatrix2 x21 = Ci * sK * (-lambda * lambda * x);

    CMatrix4 E;
    E << cK.a, cK.b, x12.a, x12.b,
         cK.c, cK.d, x12.c, x12.d,
         x21.a, x21.b, cK.a, cK.b,
         x21.c, x21.d, cK.c, cK.d;
    return E;
}

CMatrix4 boundary_matrix(const Eigen2& e, cplx lambda) {
    Eigen::Matrix<cplx, 2, 4> psi;
    psi << e.V.a, e.V.b, 0.0, 0.0,
           0.0, 0.0, e.V.c, e.V.d;
    CMatrix4 E = fundamental_matrix(e.C, lambda, 1.0);
    CMatrix4 M;
    M.topRows<2>() = psi;
    M.bottomRows<2>() = psi * E;
    return M;
}

cplx boundary_determinant(const Eigen2& e, cplx lambda) { return boundary_matrix(e, lambda).determinant(); }

int geometric_multiplicity(const Eigen2& e, cplx lambda, double rel_tol) {
    CMatrix4 M = boundary_matrix(e, lambda);
    // rows are scaled independently; normalize so the rank test is scale-free
    for (int i = 0; i < 4; ++i) {
        double n = M.row(i).norm();
        if (n > 0.0) M.row(i) /= n;
    }
    Eigen::JacobiSVD<CMatrix4> svd(M);
    auto s = svd.singularValues();
    int k = 0;
    for (int i = 0; i < 4; ++i)
        if (s(i) <= rel_tol * s(0)) ++k;
    return k;
}

std::vector<ScaledValue> eval_grid(const SecularFn& S, const Rect& r, int nx, int ny, Exec exec) {
    if (nx < 2 || ny < 2) throw Error(ErrorKind::InvalidInput, "grid needs at least 2 points per side");
    std::vector<ScaledValue> out(static_cast<size_t>(nx) * ny);
    const long n = static_cast<long>(out.size());
    bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(static) if (par)
    for (long k = 0; k < n; ++k) {
        long i = k % nx, j = k / nx;
        cplx z(r.re_min + r.width() * i / (nx - 1), r.im_min + r.height() * j / (ny - 1));
        out[k] = S.eval_scaled(z);
    }
    return out;
}

} // namespace specmat
