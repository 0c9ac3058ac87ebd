#include "rissa/mellin.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rissa/quadrature.hpp"

namespace rissa::mellin {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMaxPanelWidth = 4.0;
constexpr double kInitialHeight = 8.0;
constexpr double kPoleMargin = 1e-6;

// Gamma(alpha + beta s)
struct Factor {
    double alpha = 0.0;
    double beta = 0.0;
    Complex at(Complex s) const { return alpha + beta * s; }
};

struct Plan {
    bool incomplete = false;
    double x = 0.0;
    Factor first;  // only used when incomplete
    std::vector<Factor> num;
    std::vector<Factor> den;
    double log_z = 0.0;
};

bool on_pole(Complex w) {
    return w.imag() == 0.0 && w.real() <= 0.0 && w.real() == std::floor(w.real());
}

Plan make_plan(const HSpec& spec, bool incomplete, double x) {
    Plan plan;
    plan.incomplete = incomplete;
    plan.x = x;
    plan.log_z = std::log(spec.z);
    for (int j = 0; j < spec.n; ++j) {
        const auto& u = spec.upper[static_cast<std::size_t>(j)];
        const Factor f{1.0 - u.a, u.A};
        if (j == 0 && incomplete) {
            plan.first = f;
        } else {
            plan.num.push_back(f);
        }
    }
    for (int j = 0; j < spec.m; ++j) {
        const auto& l = spec.lower[static_cast<std::size_t>(j)];
        plan.num.push_back({l.b, -l.B});
    }
    for (int j = spec.n; j < spec.p(); ++j) {
        const auto& u = spec.upper[static_cast<std::size_t>(j)];
        plan.den.push_back({u.a, -u.A});
    }
    for (int j = spec.m; j < spec.q(); ++j) {
        const auto& l = spec.lower[static_cast<std::size_t>(j)];
        plan.den.push_back({1.0 - l.b, l.B});
    }
    return plan;
}

Complex log_kernel(const Plan& plan, Complex s) {
    Complex acc = s * plan.log_z;
    for (const auto& f : plan.den) {
        const Complex w = f.at(s);
        if (on_pole(w)) return {-kInf, 0.0};  // 1 / Gamma vanishes
        acc -= specfun::ln_gamma(w);
    }
    if (plan.incomplete) {
        const Complex w = plan.first.at(s);
        acc += plan.x > 0.0 ? specfun::log_upper_inc_gamma(w, plan.x) : specfun::ln_gamma(w);
    }
    for (const auto& f : plan.num) {
        acc += specfun::ln_gamma(f.at(s));
    }
    return acc;
}

PoleGap gap_of(const HSpec& spec, bool skip_first_upper) {
    PoleGap gap{-kInf, kInf};
    for (int j = 0; j < spec.n; ++j) {
        if (j == 0 && skip_first_upper) continue;
        const auto& u = spec.upper[static_cast<std::size_t>(j)];
        gap.left = std::max(gap.left, (u.a - 1.0) / u.A);
    }
    for (int j = 0; j < spec.m; ++j) {
        const auto& l = spec.lower[static_cast<std::size_t>(j)];
        gap.right = std::min(gap.right, l.b / l.B);
    }
    return gap;
}

ContourConfig select(const PoleGap& gap) {
    if (!(gap.left < gap.right)) {
        throw ContourError("contour_select: no vertical line separates the pole families (left " +
                           std::to_string(gap.left) + ", right " + std::to_string(gap.right) + ")");
    }
    ContourConfig cfg;
    if (std::isfinite(gap.left) && std::isfinite(gap.right)) {
        cfg.abscissa = gap.left + 0.5 * std::min(gap.right - gap.left, 1.0);
    } else if (std::isfinite(gap.left)) {
        cfg.abscissa = gap.left + 0.5;
    } else if (std::isfinite(gap.right)) {
        cfg.abscissa = gap.right - 0.5;
    } else {
        cfg.abscissa = 0.0;
    }
    return cfg;
}

double saddle(const Plan& plan, const PoleGap& gap, double fallback) {
    double lo = gap.left;
    double hi = gap.right;
    if (!std::isfinite(lo) && !std::isfinite(hi)) {
        lo = -30.0;
        hi = 30.0;
    } else if (!std::isfinite(lo)) {
        lo = hi - 60.0;
    } else if (!std::isfinite(hi)) {
        hi = lo + 60.0;
    }
    const double margin = std::max(std::min(0.02 * (hi - lo), 0.25), 10.0 * kPoleMargin);
    double a = lo + margin;
    double b = hi - margin;
    if (!(a < b)) return fallback;
    auto f = [&plan](double c) {
        const double v = log_kernel(plan, Complex(c, 0.0)).real();
        return std::isnan(v) ? kInf : v;
    };
    constexpr double kInvPhi = 0.6180339887498949;
    double c1 = b - kInvPhi * (b - a);
    double c2 = a + kInvPhi * (b - a);
    double f1 = f(c1);
    double f2 = f(c2);
    for (int it = 0; it < 100 && b - a > 1e-4; ++it) {
        if (f1 <= f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - kInvPhi * (b - a);
            f1 = f(c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + kInvPhi * (b - a);
            f2 = f(c2);
        }
    }
    const double c = 0.5 * (a + b);
    return std::isfinite(f(c)) ? c : fallback;
}

ContourResult integrate_plan(const Plan& plan, const PoleGap& gap, const ContourConfig& cfg,
                             double log_scale) {
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0) || !(cfg.max_height > 0.0) || cfg.max_panels < 1) {
        throw DomainError("contour: tolerances, height and panel budget must be positive");
    }
    const double c = cfg.abscissa;
    if (!(c > gap.left && c < gap.right)) {
        throw ContourError("contour: abscissa " + std::to_string(c) + " does not separate the pole families");
    }
    if (std::min(c - gap.left, gap.right - c) < kPoleMargin) {
        throw ContourError("contour: abscissa " + std::to_string(c) + " is too close to a pole");
    }

    auto integrand = [&plan, c, log_scale](double t) -> Complex {
        const Complex up = std::exp(log_kernel(plan, Complex(c, t)) + log_scale);
        const Complex down = std::exp(log_kernel(plan, Complex(c, -t)) + log_scale);
        return (up + down) / kTwoPi;
    };

    const double oscillation = std::abs(plan.log_z);
    const double width = oscillation > 0.0 ? std::min(kMaxPanelWidth, kTwoPi / oscillation) : kMaxPanelWidth;

    quad::AdaptiveGaussLegendre<Complex, decltype(integrand)> engine(integrand, cfg.max_panels);
    double height = std::min(kInitialHeight, cfg.max_height);
    engine.cover(0.0, height, width);
    double tail = 0.0;
    for (;;) {
        if (!engine.refine(cfg.rel_tol, cfg.abs_tol)) {
            throw ConvergenceError("contour: panel budget exhausted before reaching tolerance (error " +
                                   std::to_string(engine.error()) + ")");
        }
        tail = engine.last_panel()->l1;
        if (tail < 1e-3 * cfg.abs_tol) break;
        if (height >= cfg.max_height) {
            throw ConvergenceError("contour: tail " + std::to_string(tail) + " above tolerance at height " +
                                   std::to_string(height));
        }
        const double next = std::min(2.0 * height, cfg.max_height);
        engine.cover(height, next, width);
        height = next;
    }

    const auto res = engine.result(true);
    ContourResult out;
    out.value = res.value.real();
    out.imag_residual = std::abs(res.value.imag());
    out.error = res.error + tail;
    out.height = height;
    out.panels = res.panels;
    out.evaluations = 2 * res.evaluations;
    const double roundoff = 8.0 * std::numeric_limits<double>::epsilon() * res.l1;
    if (out.imag_residual > 10.0 * std::max(cfg.abs_tol, roundoff)) {
        throw ConvergenceError("contour: integral is not real (|Im| = " + std::to_string(out.imag_residual) + ")");
    }
    return out;
}

void validate_layout(const HSpec& s) {
    if (s.m < 0 || s.n < 0 || s.n > s.p() || s.m > s.q()) {
        throw DomainError("H-spec: need 0 <= n <= p and 0 <= m <= q");
    }
    for (const auto& u : s.upper) {
        if (!std::isfinite(u.a) || !(u.A > 0.0) || !std::isfinite(u.A)) {
            throw DomainError("H-spec: upper pairs need finite a_j and A_j > 0");
        }
    }
    for (const auto& l : s.lower) {
        if (!std::isfinite(l.b) || !(l.B > 0.0) || !std::isfinite(l.B)) {
            throw DomainError("H-spec: lower pairs need finite b_j and B_j > 0");
        }
    }
    if (!(s.z > 0.0) || !std::isfinite(s.z)) {
        throw DomainError("H-spec: argument z must be finite and > 0");
    }
}

}  // namespace

void HSpec::validate() const { validate_layout(*this); }

void IncHSpec::validate() const {
    validate_layout(*this);
    if (n < 1) throw DomainError("incomplete H-spec: needs n >= 1");
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("incomplete H-spec: x must be finite and >= 0");
}

PoleGap pole_gap(const HSpec& spec) {
    spec.validate();
    return gap_of(spec, false);
}

PoleGap pole_gap(const IncHSpec& spec) {
    spec.validate();
    // Gamma(., x) with x > 0 is entire, so the first upper pair contributes no poles.
    return gap_of(spec, spec.x > 0.0);
}

ContourConfig contour_select(const HSpec& spec) { return select(pole_gap(spec)); }
ContourConfig contour_select(const IncHSpec& spec) { return select(pole_gap(spec)); }

double saddle_abscissa(const IncHSpec& spec) {
    return saddle(make_plan(spec, true, spec.x), pole_gap(spec), contour_select(spec).abscissa);
}

double saddle_abscissa(const HSpec& spec) {
    return saddle(make_plan(spec, false, 0.0), pole_gap(spec), contour_select(spec).abscissa);
}

Complex log_kernel(const IncHSpec& spec, Complex s) {
    spec.validate();
    return log_kernel(make_plan(spec, true, spec.x), s);
}

Complex log_kernel(const HSpec& spec, Complex s) {
    spec.validate();
    return log_kernel(make_plan(spec, false, 0.0), s);
}

Complex kernel(const IncHSpec& spec, Complex s) { return std::exp(log_kernel(spec, s)); }
Complex kernel(const HSpec& spec, Complex s) { return std::exp(log_kernel(spec, s)); }

ContourResult integrate_inc_h(const IncHSpec& spec, const ContourConfig& cfg, double log_scale) {
    const PoleGap gap = pole_gap(spec);
    return integrate_plan(make_plan(spec, true, spec.x), gap, cfg, log_scale);
}

ContourResult integrate_h(const HSpec& spec, const ContourConfig& cfg, double log_scale) {
    const PoleGap gap = pole_gap(spec);
    return integrate_plan(make_plan(spec, false, 0.0), gap, cfg, log_scale);
}

double eval_inc_h(const IncHSpec& spec, const ContourConfig& cfg) { return integrate_inc_h(spec, cfg).value; }
double eval_inc_h(const IncHSpec& spec) { return eval_inc_h(spec, contour_select(spec)); }
double eval_h(const HSpec& spec, const ContourConfig& cfg) { return integrate_h(spec, cfg).value; }
double eval_h(const HSpec& spec) { return eval_h(spec, contour_select(spec)); }

}  // namespace rissa::mellin
