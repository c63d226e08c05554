// Coherent-state algebra helpers. The overlap of two single-mode coherent
// states is <u|v> = exp(-|u|^2/2 - |v|^2/2 + u* v); its real exponent part is
// never positive, so the formula cannot overflow.
#pragma once

#include <cmath>
#include <complex>

namespace dit {

using complexd = std::complex<double>;

inline double abs2(complexd z) {
    return z.real() * z.real() + z.imag() * z.imag();
}

inline complexd coherent_overlap(complexd u, complexd v) {
    const complexd expo = std::conj(u) * v - 0.5 * (abs2(u) + abs2(v));
    return std::exp(expo);
}

// exp(z) - 1, accurate for |z| << 1 where naive subtraction cancels.
inline complexd expm1c(complexd z) {
    if (std::abs(z) < 1e-4) {
        return z * (1.0 + z * (1.0 / 2.0 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0)))));
    }
    return std::exp(z) - 1.0;
}

// <u| M |v> with M = I - |0><0|, the threshold-detector projector:
// <u|v> - <u|0><0|v> = exp(-(|u|^2+|v|^2)/2) * (exp(u* v) - 1).
inline complexd detected_overlap(complexd u, complexd v) {
    return std::exp(-0.5 * (abs2(u) + abs2(v))) * expm1c(std::conj(u) * v);
}

// <u| M |u> = 1 - exp(-|u|^2), the detection probability of one mode.
inline double detection_probability(complexd u) {
    return -std::expm1(-abs2(u));
}

} // namespace dit
