#include "specmat/oracle.hpp"
#include "specmat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace specmat {

using std::abs;
constexpr double kPi = std::numbers::pi;

Discretization discretize(const CMatrix2& A, int n) {
    if (n < 8) throw Error(ErrorKind::ResolutionTooLow, "need n >= 8");
    if (!A.finite()) throw Error(ErrorKind::InvalidInput, "matrix has non-finite entries");
    Discretization D;
    D.n = n;
    D.h = 1.0 / (n + 1);
    D.A = A;
    const double w = 1.0 / (D.h * D.h);

    // -u'' on interior nodes. Dirichlet: u_0 = u_{n+1} = 0. Neumann: the end
    // values are eliminated with the fourth-order one-sided derivative,
    // u_0 = (48u_1 - 36u_2 + 16u_3 - 3u_4)/25, so the error stays even in h.
    using Row = std::vector<std::pair<int, double>>;
    auto lap = [&](int i, bool neumann) {
        Row r{{i, 2 * w}};
        if (i > 0) r.push_back({i - 1, -w});
        if (i < n - 1) r.push_back({i + 1, -w});
        const double e[4] = {-48.0, 36.0, -16.0, 3.0};
        for (int k = 0; k < 4 && neumann; ++k) {
            if (i == 0) r.push_back({k, e[k] * w / 25});
            if (i == n - 1) r.push_back({n - 1 - k, e[k] * w / 25});
        }
        return r;
    };

    std::vector<Eigen::Triplet<cplx>> t;
    t.reserve(12 * n);
    auto emit = [&](int row, int off, cplx s, const Row& r) {
        if (s == 0.0) return;
        for (auto [c, v] : r) t.emplace_back(row, off + c, s * v);
    };
    for (int i = 0; i < n; ++i) {
        emit(i, 0, A.a, lap(i, false));
        emit(i, n, A.b, lap(i, true));
        emit(n + i, 0, A.c, lap(i, false));
        emit(n + i, n, A.d, lap(i, true));
    }
    D.M.resize(D.size(), D.size());
    D.M.setFromTriplets(t.begin(), t.end());
    D.M.makeCompressed();
    return D;
}

std::vector<cplx> matrix_eigenvalues(const Discretization& disc) {
    const lapack_int N = disc.size();
    std::vector<cplx> ev(N);
    lapack_int info;
    if (disc.A.is_real()) {
        Eigen::MatrixXd M = disc.dense().real();
        std::vector<double> wr(N), wi(N);
        info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', N, M.data(), N, wr.data(), wi.data(), nullptr, 1, nullptr, 1);
        for (lapack_int i = 0; i < N; ++i) ev[i] = cplx(wr[i], wi[i]);
    } else {
        DenseC M = disc.dense();
        info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', N, M.data(), N, ev.data(), nullptr, 1, nullptr, 1);
    }
    if (info != 0) throw Error(ErrorKind::NonConverged, "dense eigensolver did not converge");
    std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
        if (abs(a) != abs(b)) return abs(a) < abs(b);
        return std::arg(a) < std::arg(b);
    });
    return ev;
}

Spectrum oracle_spectrum(const Discretization& disc, int k) {
    if (k < 1 || 4 * k > disc.size()) throw Error(ErrorKind::InvalidInput, "k must lie in [1, size/4]");
    Discretization fine = discretize(disc.A, 2 * disc.n);
    auto ec = matrix_eigenvalues(disc), ef = matrix_eigenvalues(fine);
    const double ratio = fine.h > 0 ? (disc.h / fine.h) * (disc.h / fine.h) - 1.0 : 3.0;

    Spectrum sp;
    sp.method = Provenance::Oracle;
    sp.matrix = disc.A;
    sp.not_closed = disc.A.is_singular();
    std::vector<bool> used(ec.size(), false);
    double rmax = 0.0;
    for (int i = 0; i < k; ++i) {
        cplx f = ef[i];
        int best = -1;
        for (int j = 0; j < static_cast<int>(ec.size()) && j < 4 * k + 8; ++j)
            if (!used[j] && (best < 0 || abs(ec[j] - f) < abs(ec[best] - f))) best = j;
        used[best] = true;
        cplx ext = f + (f - ec[best]) / ratio;
        Eigenvalue e;
        e.value = abs(ext) <= 1e-10 * (1.0 + abs(ef.back())) ? cplx(0.0) : ext;
        e.lambda = std::sqrt(e.value);
        e.error_estimate = abs(ext - f);
        e.residual = abs(f - ec[best]);
        sp.eigenvalues.push_back(e);
        rmax = std::max(rmax, abs(ext));
    }
    double r = std::sqrt(std::max(rmax, 1.0));
    sp.search_region = Rect(0.0, r, -r, r);
    sp.sort();
    return sp;
}

namespace {

DenseC orthonormal(const DenseC& X) {
    Eigen::HouseholderQR<DenseC> qr(X);
    return qr.householderQ() * DenseC::Identity(X.rows(), X.cols());
}

void near_spectrum(double smin, cplx z) {
    if (!(smin >= 1e-8 * std::max(1.0, abs(z))))
        throw Error(ErrorKind::NearSpectrum, "z is numerically on the spectrum of the discretization");
}

} // namespace

double resolvent_norm(const Discretization& disc, cplx z) {
    const int N = disc.size();
    SparseC I(N, N);
    I.setIdentity();
    SparseC B = disc.M - z * I;
    SparseC Bh = B.adjoint();
    Eigen::SparseLU<SparseC> lu, luh;
    lu.compute(B);
    luh.compute(Bh);
    if (lu.info() != Eigen::Success || luh.info() != Eigen::Success)
        throw Error(ErrorKind::NearSpectrum, "M - z is singular");

    // subspace iteration on (B^H B)^{-1}
    const int p = std::min(4, N);
    DenseC X(N, p);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < p; ++j) X(i, j) = cplx(std::sin(1.0 + i * (j + 1) * 0.7), std::cos(0.3 * i + j));
    X = orthonormal(X);
    double prev = 0.0, smax = 0.0;
    for (int it = 0; it < 500; ++it) {
        DenseC Y = lu.solve(X);
        Eigen::JacobiSVD<DenseC> svd(Y);
        smax = svd.singularValues()(0);
        if (!std::isfinite(smax)) throw Error(ErrorKind::NearSpectrum, "M - z is singular");
        if (it > 2 && abs(smax - prev) <= 1e-12 * smax) break;
        prev = smax;
        X = orthonormal(luh.solve(Y));
    }
    near_spectrum(1.0 / smax, z);
    return smax;
}

double resolvent_norm_dense(const Discretization& disc, cplx z) {
    DenseC B = disc.dense();
    B.diagonal().array() -= z;
    Eigen::BDCSVD<DenseC> svd(B);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    near_spectrum(smin, z);
    return 1.0 / smin;
}

std::vector<GrowthRow> growth_probe(const CMatrix2& A, double eps, const std::vector<int>& r_list, int n,
                                    Exec exec) {
    if (r_list.empty()) throw Error(ErrorKind::InvalidInput, "empty r list");
    const double a = A.a.real();
    const long m = static_cast<long>(r_list.size());
    std::vector<GrowthRow> rows(m);
    for (long i = 0; i < m; ++i) rows[i] = {r_list[i], cplx(4.0 * a * kPi * kPi * r_list[i] * r_list[i], eps), 0, 0};
    Discretization d1 = discretize(A, n), d2 = discretize(A, 2 * n);
    std::vector<std::exception_ptr> err(2 * m);
    bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(dynamic, 1) if (par)
    for (long t = 0; t < 2 * m; ++t) {
        try {
            long i = t / 2;
            if (t % 2 == 0)
                rows[i].norm_n = resolvent_norm(d1, rows[i].z);
            else
                rows[i].norm_2n = resolvent_norm(d2, rows[i].z);
        } catch (...) {
            err[t] = std::current_exception();
        }
    }
    for (auto& e : err)
        if (e) std::rethrow_exception(e);
    return rows;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    if (n < 2 || y.size() != n) throw Error(ErrorKind::InvalidInput, "slope needs two or more points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        double u = std::log(x[i]), v = std::log(y[i]);
        sx += u;
        sy += v;
        sxx += u * u;
        sxy += u * v;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace specmat
