#pragma once

#include "specmat/mat2.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace testutil {

using specmat::cplx;
using specmat::CMatrix2;

inline constexpr double pi = std::numbers::pi;
inline constexpr double pi2 = pi * pi;

inline CMatrix2 sample5()
{
    return {{0.4, 0.3}, {0.6, -0.3}, {0.15, 0.3}, {0.85, -0.3}};
}

inline CMatrix2 a4(double a, double d) { return CMatrix2::real(a, -1, 1, d); }

inline double rel(cplx x, cplx ref) { return std::abs(x - ref) / std::max(1.0, std::abs(ref)); }

struct Rng {
    std::mt19937_64 g;
    explicit Rng(unsigned long long s) : g(s) {}
    double u(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }
    cplx c(double s) { return {u(-s, s), u(-s, s)}; }
    CMatrix2 mat(double s = 2.0) { return {c(s), c(s), c(s), c(s)}; }
    CMatrix2 real_mat(double s = 2.0) { return CMatrix2::real(u(-s, s), u(-s, s), u(-s, s), u(-s, s)); }
};

} // namespace testutil
