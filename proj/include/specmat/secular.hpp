#pragma once

#include "specmat/exec.hpp"
#include "specmat/holo.hpp"
#include "specmat/mat2.hpp"
#include "specmat/spectrum.hpp"

#include <Eigen/Dense>

namespace specmat {

enum class SecularKind { Diagonalizable, Defective };

const char* to_string(SecularKind k);

// EV(x) = p2 x^2 + c0 + c1 cos(w1 x) + c2 cos(w2 x)
//
// Diagonalizable, V = (v1 v2; v3 v4), s+- = sqrt(a+-):
//   EV = 2P (1 - cos(x/s+) cos(x/s-)) - Q sin(x/s+) sin(x/s-)
//   P = v1 v2 v3 v4,  Q = v1^2 v4^2 s+/s- + v2^2 v3^2 s-/s+
//   so c0 = 2P, c1 = Q/2 - P, c2 = -(P + Q/2), w1 = 1/s+ + 1/s-, w2 = 1/s+ - 1/s-.
// Defective, V = [w | v], C = (a, 0; 1, a), s = sqrt(a):
//   EV = K x^2 - L sin^2(x/s),  K = v2^2 v4^2 / (4 a^3),  L = (det V + v2 v4 / (2a))^2
//   so p2 = K, c0 = -L/2, c1 = L/2, w1 = 2/s.
class SecularFn : public HolomorphicFn {
public:
    static SecularFn build(const CMatrix2& A);
    static SecularFn from_jordan(const CMatrix2& A, const Eigen2& e);

    SecularKind kind() const { return kind_; }
    const Eigen2& jordan() const { return eig_; }
    const CMatrix2& matrix() const { return A_; }

    cplx eval(cplx x) const;
    cplx eval_deriv(cplx x) const;
    ScaledValue eval_scaled(cplx x) const;
    ScaledValue eval_deriv_scaled(cplx x) const;

    ScaledValue value(cplx z) const override { return eval_scaled(z); }
    cplx log_derivative(cplx z) const override;
    double frequency() const override;

    // EV_ref = gauge_constant(ref+, ref-) * EV, where ref+- are the (parallel)
    // eigenvectors used by some other normalization.  For the defective kind
    // only ref+ (the eigenvector) matters.
    cplx gauge_constant(const CVec2& ref_plus, const CVec2& ref_minus) const;

    bool near_defective() const;
    SecularFn defective_companion() const;

    cplx sqrt_a_plus() const { return sp_; }
    cplx sqrt_a_minus() const { return sm_; }
    cplx p2() const { return p2_; }
    cplx c0() const { return c0_; }
    cplx c1() const { return c1_; }
    cplx c2() const { return c2_; }
    cplx w1() const { return w1_; }
    cplx w2() const { return w2_; }

private:
    SecularKind kind_ = SecularKind::Diagonalizable;
    CMatrix2 A_{};
    Eigen2 eig_;
    cplx sp_, sm_;
    cplx p2_, c0_, c1_, c2_, w1_, w2_;
};

using CMatrix4 = Eigen::Matrix<cplx, 4, 4>;

// exp(B x) with B = (0, I; -lambda^2 C^-1, 0) for a lower-triangular Jordan C.
CMatrix4 fundamental_matrix(const CMatrix2& C, cplx lambda, double x);

// Rows: Dirichlet/Neumann conditions at x = 0 and x = 1 on (u, u'),
// with the physical field V u.  Its determinant is -EV(lambda).
CMatrix4 boundary_matrix(const Eigen2& e, cplx lambda);
cplx boundary_determinant(const Eigen2& e, cplx lambda);

// Nullity of the boundary matrix: the eigenspace dimension at lambda^2.
int geometric_multiplicity(const Eigen2& e, cplx lambda, double rel_tol = 1e-6);

// EV on an nx-by-ny grid over r, real part running fastest.
std::vector<ScaledValue> eval_grid(const SecularFn& S, const Rect& r, int nx, int ny, Exec exec = Exec::Parallel);

} // namespace specmat
