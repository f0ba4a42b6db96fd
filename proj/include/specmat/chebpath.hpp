#pragma once

#include "specmat/spectrum.hpp"

#include <vector>

namespace specmat {

struct ChebPoint {
    double a = 0.0, d = 0.0;
    int p = 2, q = 1;
    int sign = 1;
    double b_plus = 0.0, b_minus = 0.0;

    double alpha() const { return static_cast<double>(p) / q; }
};

// d on the level curve sqrt(b+/b-) = p/q of A4 = (a, -1; 1, d).
double lambda_curve_d(double alpha, int sign, double a);

// p/q is reduced on input.
ChebPoint lambda_curve(int p, int q, int sign, double a);

// Monomial coefficients, low to high.
std::vector<double> chebyshev_T(int m);

// G(w) = k1 + (k2 - k1)/2 T_{p+q}(w) - (k2 + k1)/2 T_{p-q}(w) with
// EV(x) = scale * G(cos z), z = x / (q sqrt(b+)).
struct GPoly {
    std::vector<double> coeffs;
    double k1 = 0.0, k2 = 0.0;
    cplx scale;
    int p = 0, q = 0;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    double operator()(double w) const;
    cplx operator()(cplx w) const;
};

GPoly build_G(const ChebPoint& pt);

struct GRoot {
    cplx w;
    int multiplicity = 1;
};

// Roots of G with w = 1 deflated and near-coincident roots merged.
std::vector<GRoot> G_roots(const GPoly& g);

inline constexpr int kChebDegreeCap = 20;

Spectrum cheb_spectrum(const ChebPoint& pt, int n_max, bool allow_high_degree = false);

struct ChebSweepRow {
    double a, d;
    cplx value;
    int root_index;
};

std::vector<ChebSweepRow> cheb_sweep(int p, int q, int sign, double a0, double a1, int steps, int n_max);

} // namespace specmat
