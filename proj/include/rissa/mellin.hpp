#pragma once

#include <vector>

#include "rissa/specfun.hpp"

namespace rissa::mellin {

// Upper parameter pair (a_j, A_j) and lower pair (b_j, B_j).
struct UpperPair {
    double a = 0.0;
    double A = 1.0;
    friend bool operator==(const UpperPair&, const UpperPair&) = default;
};
struct LowerPair {
    double b = 0.0;
    double B = 1.0;
    friend bool operator==(const LowerPair&, const LowerPair&) = default;
};

/// Fox H-function H^{m,n}_{p,q}[z | upper; lower] with p = upper.size(),
/// q = lower.size(). Kernel convention (s-plane):
///
///   K(s) = prod_{j<=n} G(1 - a_j + A_j s) * prod_{j<=m} G(b_j - B_j s)
///          / ( prod_{j>n} G(a_j - A_j s) * prod_{j>m} G(1 - b_j + B_j s) ) * z^s
///
/// and H = (1 / 2 pi i) * integral of K(s) ds along Re s = c.
struct HSpec {
    int m = 0;
    int n = 0;
    std::vector<UpperPair> upper;
    std::vector<LowerPair> lower;
    double z = 1.0;

    int p() const { return static_cast<int>(upper.size()); }
    int q() const { return static_cast<int>(lower.size()); }

    // Throws DomainError when the layout is inconsistent.
    void validate() const;

    friend bool operator==(const HSpec&, const HSpec&) = default;
};

/// Incomplete H-function: the first upper factor G(1 - a_1 + A_1 s) is
/// replaced by the upper incomplete gamma G(1 - a_1 + A_1 s, x). Requires
/// n >= 1. With x = 0 it is the ordinary H-function.
struct IncHSpec : HSpec {
    double x = 0.0;

    HSpec complete() const { return static_cast<const HSpec&>(*this); }
    void validate() const;

    friend bool operator==(const IncHSpec&, const IncHSpec&) = default;
};

struct ContourConfig {
    double abscissa = 0.0;
    double max_height = 400.0;
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_panels = 4000;
};

/// Open interval of admissible abscissae: everything strictly right of the
/// left pole family and strictly left of the right pole family.
struct PoleGap {
    double left = 0.0;   // rightmost left-family pole (or -inf)
    double right = 0.0;  // leftmost right-family pole (or +inf)
};

PoleGap pole_gap(const HSpec& spec);
PoleGap pole_gap(const IncHSpec& spec);

/// Default contour: half a unit right of the left family, or the midpoint of
/// the gap when it is narrower than one. Throws ContourError on an empty gap.
ContourConfig contour_select(const HSpec& spec);
ContourConfig contour_select(const IncHSpec& spec);

/// Abscissa inside the pole gap where |K| is smallest on the real axis. For
/// real kernels this is where the steepest-descent path crosses the axis, so
/// the integrand there is close in size to the result and little is lost to
/// cancellation. Falls back to contour_select when the minimum is not finite.
double saddle_abscissa(const IncHSpec& spec);
double saddle_abscissa(const HSpec& spec);

/// log K(s) (branch unspecified). Returns -inf real part when a denominator
/// gamma sits on a pole. Throws PoleError for numerator poles.
Complex log_kernel(const IncHSpec& spec, Complex s);
Complex log_kernel(const HSpec& spec, Complex s);

Complex kernel(const IncHSpec& spec, Complex s);
Complex kernel(const HSpec& spec, Complex s);

struct ContourResult {
    double value = 0.0;
    double error = 0.0;          // quadrature error + tail estimate
    double height = 0.0;         // accepted truncation T
    int panels = 0;
    long evaluations = 0;
    double imag_residual = 0.0;  // |Im| of the integral before taking Re
};

/// exp(log_scale) * H evaluated as (1/2 pi) * int_{-T}^{T} K(c + i t) dt.
/// Throws ContourError if cfg.abscissa does not separate the pole families,
/// ConvergenceError if the tail or the quadrature tolerance cannot be met.
ContourResult integrate_inc_h(const IncHSpec& spec, const ContourConfig& cfg, double log_scale = 0.0);
ContourResult integrate_h(const HSpec& spec, const ContourConfig& cfg, double log_scale = 0.0);

double eval_inc_h(const IncHSpec& spec, const ContourConfig& cfg);
double eval_inc_h(const IncHSpec& spec);
double eval_h(const HSpec& spec, const ContourConfig& cfg);
double eval_h(const HSpec& spec);

}  // namespace rissa::mellin
