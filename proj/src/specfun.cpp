#include "rissa/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace rissa {

void RicianParams::validate() const {
    if (!std::isfinite(mu) || mu < 0.0) {
        throw DomainError("rician: mu must be finite and >= 0, got " + std::to_string(mu));
    }
    if (!std::isfinite(sigma2) || sigma2 <= 0.0) {
        throw DomainError("rician: sigma2 must be finite and > 0, got " + std::to_string(sigma2));
    }
}

namespace specfun {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogPi = 1.1447298858494001741434273513530587;
constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 20000;

// Lanczos approximation, g = 607/128, 15 terms (Godfrey).
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,  .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,  .36899182659531622704e-5};

template <class T>
T lanczos_ln_gamma(T z) {
    // Valid for Re z >= 0.5.
    z -= 1.0;
    T sum = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) {
        sum += kLanczos[i] / (z + static_cast<double>(i));
    }
    const T t = z + kLanczosG + 0.5;
    return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(sum);
}

bool is_nonpositive_integer(Complex z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

// sin(pi x) and cos(pi x) with the argument reduced first.
double sinpi(double x) {
    const double r = x - 2.0 * std::round(0.5 * x);
    return std::sin(kPi * r);
}
double cospi(double x) {
    const double r = x - 2.0 * std::round(0.5 * x);
    return std::cos(kPi * r);
}

// Principal log of sin(pi z), without overflow for large |Im z|.
Complex log_sinpi(Complex z) {
    const double x = z.real();
    const double y = z.imag();
    if (std::abs(y) < 20.0) {
        const Complex s(sinpi(x) * std::cosh(kPi * y), cospi(x) * std::sinh(kPi * y));
        return std::log(s);
    }
    // sin(pi z) = (e^{i pi z} - e^{-i pi z}) / (2i); keep the dominant exponential.
    Complex out;
    const Complex ipz(-kPi * y, kPi * x);
    if (y > 0.0) {
        out = -ipz + std::log(Complex(0.0, 0.5)) + std::log(1.0 - std::exp(2.0 * ipz));
    } else {
        out = ipz + std::log(Complex(0.0, -0.5)) + std::log(1.0 - std::exp(-2.0 * ipz));
    }
    const double im = std::remainder(out.imag(), 2.0 * kPi);
    return {out.real(), im};
}

// log of the series part of gamma(a, x): sum_{n>=0} x^n / (a (a+1) ... (a+n)).
Complex log_lower_series(Complex a, double x) {
    Complex term = 1.0 / a;
    Complex sum = term;
    for (int n = 1; n < kMaxIter; ++n) {
        term *= x / (a + static_cast<double>(n));
        sum += term;
        if (std::abs(term) < kEps * 0.25 * std::abs(sum)) {
            return a * std::log(x) - x + std::log(sum);
        }
    }
    throw ConvergenceError("incomplete gamma: lower series did not converge");
}

// log Gamma(a, x) by the Legendre continued fraction (modified Lentz).
Complex log_upper_cf(Complex a, double x) {
    constexpr double tiny = 1e-300;
    Complex f = x + 1.0 - a;
    if (std::abs(f) < tiny) f = tiny;
    Complex c = f;
    Complex d = 0.0;
    for (int n = 1; n < kMaxIter; ++n) {
        const double nn = static_cast<double>(n);
        const Complex an = -nn * (nn - a);
        const Complex bn = x + 2.0 * nn + 1.0 - a;
        d = bn + an * d;
        if (std::abs(d) < tiny) d = tiny;
        c = bn + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const Complex delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < kEps) {
            return a * std::log(x) - x - std::log(f);
        }
    }
    throw ConvergenceError("incomplete gamma: continued fraction did not converge");
}

double ln_gamma_positive(double x) {
    if (x < 0.5) return lanczos_ln_gamma(x + 1.0) - std::log(x);
    return lanczos_ln_gamma(x);
}

// Series for P(a, x) (real), valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < kMaxIter; ++n) {
        term *= x / (a + n);
        sum += term;
        if (term < sum * kEps * 0.25) {
            return std::exp(a * std::log(x) - x - ln_gamma_positive(a)) * sum;
        }
    }
    throw ConvergenceError("gamma_p: series did not converge");
}

// Continued fraction for Q(a, x) (real), valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
    constexpr double tiny = 1e-300;
    double f = x + 1.0 - a;
    if (std::abs(f) < tiny) f = tiny;
    double c = f;
    double d = 0.0;
    for (int n = 1; n < kMaxIter; ++n) {
        const double an = -n * (n - a);
        const double bn = x + 2.0 * n + 1.0 - a;
        d = bn + an * d;
        if (std::abs(d) < tiny) d = tiny;
        c = bn + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < kEps) {
            return std::exp(a * std::log(x) - x - ln_gamma_positive(a)) / f;
        }
    }
    throw ConvergenceError("gamma_q: continued fraction did not converge");
}

void check_gamma_args(double a, double x, const char* who) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw DomainError(std::string(who) + ": shape must be finite and > 0");
    }
    if (!(x >= 0.0)) {
        throw DomainError(std::string(who) + ": argument must be >= 0");
    }
}

double bessel_i_series(int order, double x) {
    const double half = 0.5 * x;
    const double q = half * half;
    double term = order == 0 ? 1.0 : half;
    double sum = term;
    for (int k = 1; k < 1000; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k + order));
        sum += term;
        if (term < sum * kEps * 0.25) break;
    }
    return sum;
}

// exp(-x) I_order(x) by the Hankel asymptotic expansion, for x >= 30.
double bessel_i_scaled_asymptotic(int order, double x) {
    const double mu = 4.0 * order * order;
    double term = 1.0;
    double sum = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (k * 8.0 * x);
        const double mag = std::abs(term);
        if (mag > prev) break;  // asymptotic series started to diverge
        sum += term;
        if (mag < kEps * 0.25 * std::abs(sum)) break;
        prev = mag;
    }
    return sum / std::sqrt(2.0 * kPi * x);
}

void check_bessel_args(int order, double x) {
    if (order != 0 && order != 1) throw DomainError("bessel_i: order must be 0 or 1");
    if (!(x >= 0.0)) throw DomainError("bessel_i: argument must be >= 0");
}

constexpr double kBesselSwitch = 30.0;

}  // namespace

Complex ln_gamma(Complex z) {
    if (is_nonpositive_integer(z)) {
        throw PoleError("ln_gamma: pole at z = " + std::to_string(z.real()));
    }
    if (z.real() >= 0.5) return lanczos_ln_gamma(z);
    // Reflection, with the 2 pi i correction that keeps the principal branch.
    const double shift = std::copysign(2.0 * kPi, z.imag()) * std::floor(0.5 * z.real() + 0.25);
    return Complex(kLogPi, shift) - log_sinpi(z) - lanczos_ln_gamma(1.0 - z);
}

double ln_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("ln_gamma: real argument must be > 0");
    return ln_gamma_positive(x);
}

Complex log_upper_inc_gamma(Complex a, double x) {
    if (!(x >= 0.0)) throw DomainError("upper_inc_gamma: x must be >= 0");
    if (x == 0.0) {
        if (!(a.real() > 0.0)) {
            throw DomainError("upper_inc_gamma: x = 0 requires Re a > 0");
        }
        return ln_gamma(a);
    }
    if (x >= std::abs(a) + 1.0) return log_upper_cf(a, x);
    if (a.real() < 0.5) {
        if (a == Complex(0.0, 0.0)) return log_upper_cf(a, x);
        // Gamma(a, x) = (Gamma(a + 1, x) - x^a e^{-x}) / a; Gamma(., x) is entire for x > 0.
        const Complex up = log_upper_inc_gamma(a + 1.0, x);
        const Complex head = a * std::log(x) - x;
        return up + std::log(1.0 - std::exp(head - up)) - std::log(a);
    }
    const Complex lg = ln_gamma(a);
    const Complex lower = log_lower_series(a, x);
    return lg + std::log(1.0 - std::exp(lower - lg));
}

Complex upper_inc_gamma(Complex a, double x) {
    return std::exp(log_upper_inc_gamma(a, x));
}

double gamma_p(double a, double x) {
    check_gamma_args(a, x, "gamma_p");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    check_gamma_args(a, x, "gamma_q");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double lower_inc_gamma(double v, double y) {
    check_gamma_args(v, y, "lower_inc_gamma");
    return std::exp(ln_gamma_positive(v)) * gamma_p(v, y);
}

double bessel_i(int order, double x) {
    check_bessel_args(order, x);
    if (x < kBesselSwitch) return bessel_i_series(order, x);
    return std::exp(x) * bessel_i_scaled_asymptotic(order, x);
}

double bessel_i_scaled(int order, double x) {
    check_bessel_args(order, x);
    if (x < kBesselSwitch) return std::exp(-x) * bessel_i_series(order, x);
    return bessel_i_scaled_asymptotic(order, x);
}

RicianMoments rician_moments(const RicianParams& p) {
    p.validate();
    const double k = p.k_factor();
    const double sigma = std::sqrt(p.sigma2);
    const double h = 0.5 * k;
    // e^{-K/2} is folded into the scaled Bessel functions.
    const double laguerre = (1.0 + k) * bessel_i_scaled(0, h) + k * bessel_i_scaled(1, h);
    return {sigma * std::sqrt(0.5 * kPi) * laguerre, p.omega()};
}

}  // namespace specfun
}  // namespace rissa
