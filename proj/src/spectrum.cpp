#include "specmat/spectrum.hpp"
#include "specmat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace specmat {

Rect::Rect(double r0, double r1, double i0, double i1) : re_min(r0), re_max(r1), im_min(i0), im_max(i1) {
    if (!(r0 < r1) || !(i0 < i1) || !std::isfinite(r0) || !std::isfinite(r1) || !std::isfinite(i0) ||
        !std::isfinite(i1))
        throw Error(ErrorKind::InvalidInput, "degenerate rectangle " + str());
}

double Rect::diam() const { return std::hypot(width(), height()); }

bool Rect::contains(cplx z, double margin) const {
    return z.real() >= re_min - margin && z.real() <= re_max + margin && z.imag() >= im_min - margin &&
           z.imag() <= im_max + margin;
}

Rect Rect::dilated(double f) const {
    cplx c = center();
    double hw = 0.5 * width() * f, hh = 0.5 * height() * f;
    return Rect(c.real() - hw, c.real() + hw, c.imag() - hh, c.imag() + hh);
}

std::string Rect::str() const {
    std::ostringstream os;
    os << "[" << re_min << ", " << re_max << "]x[" << im_min << ", " << im_max << "]";
    return os.str();
}

const char* to_string(Provenance p) {
    switch (p) {
    case Provenance::SecularRoots: return "secular-roots";
    case Provenance::Chebyshev: return "chebyshev";
    case Provenance::Oracle: return "oracle";
    case Provenance::ClosedForm: return "closed-form";
    }
    return "?";
}

void Spectrum::sort() {
    auto& ev = eigenvalues;
    std::stable_sort(ev.begin(), ev.end(),
                     [](const Eigenvalue& x, const Eigenvalue& y) { return std::abs(x.value) < std::abs(y.value); });
    // conjugate pairs and other equal-modulus groups: order by argument
    size_t i = 0;
    while (i < ev.size()) {
        size_t j = i + 1;
        double m = std::abs(ev[i].value);
        while (j < ev.size() && std::abs(ev[j].value) - m <= 1e-9 * (1.0 + m)) ++j;
        std::stable_sort(ev.begin() + i, ev.begin() + j,
                         [](const Eigenvalue& x, const Eigenvalue& y) { return std::arg(x.value) < std::arg(y.value); });
        i = j;
    }
}

int Spectrum::total_algebraic() const {
    int n = 0;
    for (const auto& e : eigenvalues) n += e.algebraic();
    return n;
}

std::vector<cplx> Spectrum::expanded() const {
    std::vector<cplx> out;
    for (const auto& e : eigenvalues)
        for (int k = 0; k < e.algebraic(); ++k) out.push_back(e.value);
    return out;
}

} // namespace specmat
