#pragma once

#include "specmat/exec.hpp"
#include "specmat/holo.hpp"
#include "specmat/spectrum.hpp"

#include <cstdint>
#include <vector>

namespace specmat {

struct RootOptions {
    double tol = 1e-10;
    std::uint64_t seed = 0x5eedULL;
    Exec exec = Exec::Parallel;
    long max_samples = 1L << 20;
    int max_dilations = 5;
};

struct WindingResult {
    int count = 0;
    cplx moment;        // sum of the enclosed zeros, with multiplicity
    Rect rect;          // rectangle actually integrated (after dilation)
    long samples = 0;
    int dilations = 0;

    cplx centroid() const;
};

// Counts zeros inside a closed polygon (counter-clockwise vertices) by
// tracking the phase of f panel by panel.  Throws BoundaryZero when a zero
// sits on the contour.
WindingResult polygon_winding(const HolomorphicFn& f, const std::vector<cplx>& vertices, const RootOptions& opt);

WindingResult winding(const HolomorphicFn& f, const Rect& rect, const RootOptions& opt = {});
int winding_count(const HolomorphicFn& f, const Rect& rect, const RootOptions& opt = {});

struct Zero {
    cplx z;
    int multiplicity = 1;
    double residual = 0.0;
};

struct ZeroSet {
    std::vector<Zero> zeros;
    Rect rect;   // after dilation
    int total = 0;
};

ZeroSet isolate(const HolomorphicFn& f, const Rect& rect, const RootOptions& opt = {});
std::vector<Zero> isolate_zeros(const HolomorphicFn& f, const Rect& rect, const RootOptions& opt = {});

// Eigenvalues lambda^2 of AD for zeros lambda of EV in the rectangle, which
// should lie in Re lambda >= 0.  A singular A gives a whole_plane result.
Spectrum spectrum(const CMatrix2& A, const Rect& lambda_rect, const RootOptions& opt = {});

// The `count` smallest eigenvalues (counting multiplicity), growing the
// search square until enough are enclosed.
Spectrum spectrum_count(const CMatrix2& A, int count, const RootOptions& opt = {});

// Roots of sum_k coeffs[k] w^k.
std::vector<cplx> polyroots(const std::vector<cplx>& coeffs);

cplx polyval(const std::vector<cplx>& coeffs, cplx w);

} // namespace specmat
