#pragma once

#include <complex>
#include <optional>
#include <string>

namespace specmat {

using cplx = std::complex<double>;

struct CVec2 {
    cplx x, y;

    double norm() const;
    cplx dot(const CVec2& o) const;  // conj(this) . o
};

// A = (a b; c d), row-major.
struct CMatrix2 {
    cplx a, b, c, d;

    static CMatrix2 real(double a, double b, double c, double d);
    static CMatrix2 identity();
    static CMatrix2 diag(cplx a, cplx d);
    static CMatrix2 from_columns(const CVec2& u, const CVec2& v);

    cplx det() const { return a * d - b * c; }
    cplx trace() const { return a + d; }

    double norm() const;         // spectral norm
    double frobenius() const;
    bool finite() const;
    bool is_real(double tol = 0.0) const;
    bool is_singular() const;    // |det| <= 1e-14 |A|^2

    CMatrix2 adjoint() const;
    CMatrix2 inverse() const;    // throws SingularMatrix

    CMatrix2 operator*(const CMatrix2& o) const;
    CMatrix2 operator+(const CMatrix2& o) const;
    CMatrix2 operator-(const CMatrix2& o) const;
    CMatrix2 operator*(cplx s) const;
    CVec2 operator*(const CVec2& v) const;

    CVec2 col0() const { return {a, c}; }
    CVec2 col1() const { return {b, d}; }

    std::string str() const;
};

enum class JordanKind { Distinct, Scalar, Defective };

const char* to_string(JordanKind k);

struct Eigen2 {
    cplx a_plus, a_minus;
    CVec2 v_plus, v_minus;
    JordanKind kind = JordanKind::Distinct;
    // A = V C V^-1.  For Defective, V = [w | v] with v the eigenvector and
    // (A - a I) w = v, C = (a, 0; 1, a).
    CMatrix2 V, C;
    double eigvec_cond = 1.0;

    bool near_defective(double norm_a) const;
};

Eigen2 eig2(const CMatrix2& A);

// Jordan data of the defective matrix closest to A in structure: eigenvalue
// tr/2, eigenvector from the dominant column of A - (tr/2) I.
Eigen2 defective_jordan(const CMatrix2& A);

// Rotate so the first nonzero component is real positive, unit norm.
CVec2 gauge_normalize(const CVec2& v);

// The projection P^ of the adjoint boundary condition.
// range(P^) = range(A(I-P))^perp, range(I-P^) = range(AP)^perp, P = diag(1,0).
CMatrix2 adjoint_projection(const CMatrix2& A);

struct Ellipse {
    cplx focus1, focus2;
    double major_axis_length = 0.0;
    double minor_axis_length = 0.0;
    bool contains_origin = false;

    cplx center() const { return 0.5 * (focus1 + focus2); }
    bool contains(cplx z, double tol = 0.0) const;
};

// Elliptical range theorem: W(A) is the closed ellipse with foci a+, a-.
Ellipse numerical_range(const CMatrix2& A);

// Closed sector {z : lo <= arg z <= hi}, angles in radians, hi - lo <= 2 pi.
struct Sector {
    double lo = 0.0, hi = 0.0;

    double width() const { return hi - lo; }
    double half_width() const { return 0.5 * (hi - lo); }
    double center() const { return 0.5 * (hi + lo); }
    bool contains(cplx z, double tol = 0.0) const;
    double distance(cplx z) const;
};

// Smallest sector with vertex 0 containing the ellipse, or nullopt when the
// ellipse contains the origin.
std::optional<Sector> enclosing_sector(const Ellipse& e);

} // namespace specmat
