#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace rissa::testing {

inline double rel_err(double got, double want) {
    const double scale = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / scale;
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
    const double scale = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / scale;
}

// Relative distance between two complex logarithms, insensitive to the 2 pi i
// ambiguity: |exp(a - b) - 1|.
inline double log_rel_err(std::complex<double> a, std::complex<double> b) {
    return std::abs(std::exp(a - b) - 1.0);
}

}  // namespace rissa::testing
