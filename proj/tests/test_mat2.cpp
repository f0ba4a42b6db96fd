#include "util.hpp"

#include "specmat/errors.hpp"
#include "specmat/mat2.hpp"

#include <doctest.h>

using namespace specmat;
using namespace testutil;

namespace {

double resid(const CMatrix2& A, cplx l, const CVec2& v)
{
    CVec2 w = A * v;
    return std::hypot(std::abs(w.x - l * v.x), std::abs(w.y - l * v.y));
}

double dist(const CMatrix2& X, const CMatrix2& Y) { return (X - Y).frobenius(); }

} // namespace

TEST_CASE("eig2 on the worked complex example")
{
    Eigen2 e = eig2(sample5());
    CHECK(e.kind == JordanKind::Distinct);
    CHECK(std::abs(e.a_plus - 1.0) < 1e-13);
    CHECK(std::abs(e.a_minus - 0.25) < 1e-13);
    // v+ ~ (1,1), v- ~ (2i,1)
    CHECK(std::abs(e.v_plus.x * 1.0 - e.v_plus.y * 1.0) < 1e-13);
    CHECK(std::abs(e.v_minus.x * 1.0 - e.v_minus.y * cplx(0, 2)) < 1e-13);
    CHECK(std::abs(e.v_plus.norm() - 1.0) < 1e-14);
    CHECK(std::abs(e.v_plus.x.imag()) == 0.0);
    CHECK(e.v_plus.x.real() > 0);
}

TEST_CASE("eig2 identity and defective")
{
    Eigen2 s = eig2(CMatrix2::identity());
    CHECK(s.kind == JordanKind::Scalar);
    CHECK(s.a_plus == 1.0);
    CHECK(s.a_minus == 1.0);

    CMatrix2 A = CMatrix2::real(0, -1, 1, 2);
    Eigen2 d = eig2(A);
    CHECK(d.kind == JordanKind::Defective);
    CHECK(std::abs(d.a_plus - 1.0) < 1e-12);
    CHECK(d.a_plus == d.a_minus);
    // C = (a, 0; 1, a)
    CHECK(d.C.b == 0.0);
    CHECK(d.C.c == 1.0);
    CHECK(dist(A, d.V * d.C * d.V.inverse()) <= 1e-10 * A.norm());
    CHECK(resid(A, d.a_plus, d.v_plus) < 1e-12);
}

TEST_CASE("real distinct ordering")
{
    Eigen2 e = eig2(CMatrix2::real(3, 1, 0, -2));
    CHECK(e.a_minus.real() < e.a_plus.real());
    CHECK(std::abs(e.a_plus - 3.0) < 1e-14);
    CHECK(std::abs(e.a_minus + 2.0) < 1e-14);
}

TEST_CASE("reconstruction and residual on random matrices")
{
    Rng rng(11);
    int bad = 0;
    for (int i = 0; i < 10000; ++i) {
        CMatrix2 A = (i % 2) ? rng.mat() : rng.real_mat();
        Eigen2 e = eig2(A);
        double nA = A.norm();
        if (dist(A, e.V * e.C * e.V.inverse()) > 1e-10 * nA)
            ++bad;
        if (e.kind != JordanKind::Defective) {
            if (resid(A, e.a_plus, e.v_plus) > 1e-12 * nA * e.v_plus.norm())
                ++bad;
            if (resid(A, e.a_minus, e.v_minus) > 1e-12 * nA * e.v_minus.norm())
                ++bad;
        }
        if (A.is_real() && e.kind == JordanKind::Distinct) {
            // closed under conjugation
            bool pair = std::abs(e.a_plus - std::conj(e.a_minus)) < 1e-12 * (1 + nA);
            bool both_real = std::abs(e.a_plus.imag()) < 1e-12 * (1 + nA) && std::abs(e.a_minus.imag()) < 1e-12 * (1 + nA);
            if (!pair && !both_real)
                ++bad;
        }
    }
    CHECK(bad == 0);
}

TEST_CASE("adjoint projection")
{
    CMatrix2 Pd = adjoint_projection(CMatrix2::diag(2.0, 5.0));
    CHECK(dist(Pd, CMatrix2::diag(1.0, 0.0)) < 1e-14);

    // by hand: range(P^) = span(1,1)^perp = span(1,-1), kernel = span(1,0)^perp = span(0,1)
    CMatrix2 P = adjoint_projection(CMatrix2::real(1, 1, 0, 1));
    CHECK(dist(P, CMatrix2::real(1, 0, -1, 0)) < 1e-12);
    CHECK(dist(P * P, P) < 1e-12);

    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        CMatrix2 A = rng.mat();
        CMatrix2 Q = adjoint_projection(A);
        CHECK(dist(Q * Q, Q) < 1e-12);
        // range(Q) orthogonal to A e2, range(I - Q) orthogonal to A e1
        CVec2 Ae1 = A.col0(), Ae2 = A.col1();
        CMatrix2 I = CMatrix2::identity();
        CVec2 r1 = Q.col0().norm() > Q.col1().norm() ? Q.col0() : Q.col1();
        CMatrix2 R = I - Q;
        CVec2 r2 = R.col0().norm() > R.col1().norm() ? R.col0() : R.col1();
        CHECK(std::abs(Ae2.dot(r1)) < 1e-12 * Ae2.norm() * r1.norm());
        CHECK(std::abs(Ae1.dot(r2)) < 1e-12 * Ae1.norm() * r2.norm());
    }

    CHECK_THROWS_AS(adjoint_projection(CMatrix2::diag(1.0, 0.0)), Error);
    try {
        adjoint_projection(CMatrix2::diag(1.0, 0.0));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SingularMatrix);
    }
}

TEST_CASE("numerical range")
{
    Ellipse id = numerical_range(CMatrix2::identity());
    CHECK(id.major_axis_length < 1e-14);
    CHECK(std::abs(id.focus1 - 1.0) < 1e-14);

    // (a,0;1,a): disc of radius 1/2 about a
    Ellipse j = numerical_range(CMatrix2::real(2, 0, 1, 2));
    CHECK(std::abs(j.major_axis_length - 1.0) < 1e-13);
    CHECK(std::abs(j.minor_axis_length - 1.0) < 1e-13);
    CHECK(j.contains({2.49, 0.0}));
    CHECK(!j.contains({2.51, 0.0}));

    // A4 with a, d > 0, |a-d| > 2: sector half-angle omega, sin omega = 1/sqrt(ad+1)
    double a = 0.5, d = 3.0;
    Ellipse e = numerical_range(a4(a, d));
    CHECK(e.focus1.imag() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(std::min(e.focus1.real(), e.focus2.real()) > 0);
    auto s = enclosing_sector(e);
    REQUIRE(s.has_value());
    CHECK(std::sin(s->half_width()) == doctest::Approx(1.0 / std::sqrt(a * d + 1)).epsilon(1e-10));

    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        Ellipse r = numerical_range(rng.mat());
        CHECK(r.major_axis_length >= std::abs(r.focus1 - r.focus2) - 1e-12);
    }
}

TEST_CASE("foci move continuously along a path")
{
    CMatrix2 A0 = CMatrix2::real(1, 2, -1, 3), A1 = {{0.5, 1}, {-2, 0}, {1, 1}, {2, -1}};
    cplx f1 = numerical_range(A0).focus1, f2 = numerical_range(A0).focus2;
    for (int i = 1; i <= 1000; ++i) {
        double t = i / 1000.0;
        Ellipse e = numerical_range(A0 * (1 - t) + A1 * t);
        // unordered pair distance
        double step = std::min(std::max(std::abs(e.focus1 - f1), std::abs(e.focus2 - f2)),
                               std::max(std::abs(e.focus1 - f2), std::abs(e.focus2 - f1)));
        CHECK(step < 0.05);
        f1 = e.focus1;
        f2 = e.focus2;
    }
}
