#pragma once

#include <complex>

#include "rissa/error.hpp"

namespace rissa {

using Complex = std::complex<double>;

// Rician envelope |mu + sigma (g1 + i g2)| with g1, g2 ~ N(0, 1).
// sigma2 is the per-component variance, so the scattered power is 2 sigma2.
struct RicianParams {
    double mu = 1.0;
    double sigma2 = 0.5;

    double k_factor() const { return mu * mu / (2.0 * sigma2); }
    double omega() const { return mu * mu + 2.0 * sigma2; }

    // Throws DomainError unless mu >= 0 and sigma2 > 0 (both finite).
    void validate() const;

    friend bool operator==(const RicianParams&, const RicianParams&) = default;
};

namespace specfun {

/// Principal branch of log Gamma(z). Throws PoleError at z = 0, -1, -2, ...
Complex ln_gamma(Complex z);

/// log Gamma(x) for real x > 0.
double ln_gamma(double x);

/// Upper incomplete gamma Gamma(a, x) = int_x^inf t^(a-1) e^(-t) dt for
/// complex a and real x >= 0. At x = 0 this is Gamma(a) and requires Re a > 0.
Complex upper_inc_gamma(Complex a, double x);

/// log Gamma(a, x) (any branch; intended for exponentiation after summing
/// with other log factors). Does not overflow for large |Gamma(a)|.
Complex log_upper_inc_gamma(Complex a, double x);

/// Lower incomplete gamma gamma(v, y) for real v > 0, y >= 0.
double lower_inc_gamma(double v, double y);

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double gamma_q(double a, double x);

/// Modified Bessel function of the first kind I_order(x), order 0 or 1.
double bessel_i(int order, double x);

/// exp(-x) I_order(x); finite for any x >= 0.
double bessel_i_scaled(int order, double x);

struct RicianMoments {
    double mean = 0.0;
    double second_moment = 0.0;
};

/// First and second moments of a Rician envelope.
RicianMoments rician_moments(const RicianParams& p);

}  // namespace specfun
}  // namespace rissa
