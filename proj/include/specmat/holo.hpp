#pragma once

#include "specmat/mat2.hpp"

namespace specmat {

// f(z) = mantissa * exp(log_scale).  magnitude is the sum of the moduli of the
// terms that produced the mantissa, in the same scaled units; it sets the
// noise floor for "is this a zero".
struct ScaledValue {
    cplx mantissa;
    double log_scale = 0.0;
    double magnitude = 0.0;

    cplx value() const;
    double log_abs() const;
    double relative() const { return magnitude > 0.0 ? std::abs(mantissa) / magnitude : 0.0; }
};

// What the contour machinery needs from an entire function.
class HolomorphicFn {
public:
    virtual ~HolomorphicFn() = default;
    virtual ScaledValue value(cplx z) const = 0;
    virtual cplx log_derivative(cplx z) const = 0;
    // typical angular frequency along the real direction; sizes initial panels
    virtual double frequency() const { return 1.0; }
};

} // namespace specmat
