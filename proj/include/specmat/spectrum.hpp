#pragma once

#include "specmat/mat2.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace specmat {

struct Rect {
    double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;

    Rect() = default;
    Rect(double r0, double r1, double i0, double i1);

    double width() const { return re_max - re_min; }
    double height() const { return im_max - im_min; }
    double diam() const;
    cplx center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
    bool contains(cplx z, double margin = 0.0) const;
    Rect dilated(double factor) const;  // about the center
    std::string str() const;
};

enum class Provenance { SecularRoots, Chebyshev, Oracle, ClosedForm };

const char* to_string(Provenance p);

struct Eigenvalue {
    cplx value;             // eigenvalue of AD, i.e. lambda^2
    int multiplicity = 1;   // dimension of the eigenspace
    int analytic_order = 1; // order of the zero of EV at lambda
    double residual = 0.0;  // |EV(lambda)| relative to its term magnitude
    double error_estimate = -1.0;  // oracle only
    cplx lambda;            // representative root with Re >= 0

    // algebraic multiplicity: order of the zero in lambda (for lambda != 0
    // the map lambda -> lambda^2 is locally invertible); 0 counts once
    int algebraic() const { return value == 0.0 ? 1 : std::max(analytic_order, multiplicity); }
};

struct Spectrum {
    std::vector<Eigenvalue> eigenvalues;
    Provenance method = Provenance::SecularRoots;
    Rect search_region;
    CMatrix2 matrix{};
    bool whole_plane = false;
    bool not_closed = false;
    int analytic_order_at_zero = 0;

    void sort();
    int total_algebraic() const;
    std::vector<cplx> expanded() const;  // values repeated by algebraic multiplicity
};

} // namespace specmat
