#pragma once

#include "specmat/exec.hpp"
#include "specmat/spectrum.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

namespace specmat {

using SparseC = Eigen::SparseMatrix<cplx>;
using DenseC = Eigen::MatrixXcd;

// Finite differences for A(-u'') on (0,1). Unknowns are phi_1..phi_n
// followed by gamma_1..gamma_n; boundary values are eliminated.
struct Discretization {
    int n = 0;
    double h = 0.0;
    CMatrix2 A;
    SparseC M;

    int size() const { return 2 * n; }
    DenseC dense() const { return DenseC(M); }
};

Discretization discretize(const CMatrix2& A, int n);

// k smallest-modulus eigenvalues, Richardson-extrapolated against a 2n grid.
// error_estimate is |extrapolated - fine|.
Spectrum oracle_spectrum(const Discretization& disc, int k);

// Raw eigenvalues of M sorted by modulus.
std::vector<cplx> matrix_eigenvalues(const Discretization& disc);

// 1 / sigma_min(M - z), a discretization-level proxy for the resolvent norm.
double resolvent_norm(const Discretization& disc, cplx z);
// Same quantity from a full dense SVD; reference for tests.
double resolvent_norm_dense(const Discretization& disc, cplx z);

struct GrowthRow {
    int r;
    cplx z;
    double norm_n, norm_2n;
};

// z(r) = 4 a pi^2 r^2 + i eps with a = Re A_11.
std::vector<GrowthRow> growth_probe(const CMatrix2& A, double eps, const std::vector<int>& r_list, int n,
                                    Exec exec = Exec::Parallel);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace specmat
