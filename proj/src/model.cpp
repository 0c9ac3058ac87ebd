#include "rissa/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rissa/error.hpp"

namespace rissa {

void SystemParams::validate() const {
    if (n_elements < 1) throw DomainError("params: N must be >= 1, got " + std::to_string(n_elements));
    hop1.validate();
    hop2.validate();
    auto positive = [](double value, const char* name) {
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw DomainError(std::string("params: ") + name + " must be finite and > 0");
        }
    };
    positive(lambda, "lambda");
    positive(q, "Q");
    positive(p, "P");
    positive(n0, "N0");
}

GammaApprox gamma_approx(const SystemParams& params) {
    params.validate();
    const auto m1 = specfun::rician_moments(params.hop1);
    const auto m2 = specfun::rician_moments(params.hop2);
    const double mean = m1.mean * m2.mean;
    const double var = m1.second_moment * m2.second_moment - mean * mean;
    if (!(var / (mean * mean) >= 1e-12)) {
        throw ConditioningError("gamma_approx: var(R_n)/E[R_n]^2 = " + std::to_string(var / (mean * mean)) +
                                " is below 1e-12; the shape parameter diverges");
    }
    return {params.n_elements * mean * mean / var, var / mean};
}

SnrDistribution::SnrDistribution(const SystemParams& params, const mellin::ContourConfig& accuracy)
    : SnrDistribution(params, gamma_approx(params), accuracy) {}

SnrDistribution::SnrDistribution(const SystemParams& params, const GammaApprox& approx,
                                 const mellin::ContourConfig& accuracy)
    : params_(params), approx_(approx), accuracy_(accuracy) {
    params_.validate();
    if (!(approx.v > 0.0) || !(approx.b > 0.0) || !std::isfinite(approx.v) || !std::isfinite(approx.b)) {
        throw DomainError("gamma approximation: v and b must be finite and > 0");
    }
    p_ = params_.p / params_.n0;
    q_ = params_.q / params_.n0;
    log_gamma_v_ = std::lgamma(approx_.v);
}

mellin::IncHSpec SnrDistribution::cdf_spec(double z) const {
    const double b = approx_.b;
    return {{1, 2, {{0, 0.5}, {1, 1}}, {{approx_.v, 1}, {0, 1}}, std::sqrt(z * params_.lambda / (b * b * q_))}, x()};
}

mellin::IncHSpec SnrDistribution::pdf_spec(double z) const {
    const double b = approx_.b;
    return {{1, 3, {{0, 0.5}, {0, 0.5}, {1, 1}}, {{approx_.v, 1}, {0, 1}, {1, 0.5}},
             std::sqrt(z * params_.lambda / (b * b * q_))},
            x()};
}

namespace {

// Integrates on the saddle abscissa. When the kernel there is smaller than
// exp(log_scale), the integrand is renormalized to unit peak so that abs_tol
// acts relative to the size of the result rather than in absolute units.
template <class Spec, class Integrate>
mellin::ContourResult evaluate_on_saddle(const Spec& spec, mellin::ContourConfig cfg, double log_scale,
                                         Integrate integrate) {
    cfg.abscissa = mellin::saddle_abscissa(spec);
    const double peak = mellin::log_kernel(spec, Complex(cfg.abscissa, 0.0)).real() + log_scale;
    const double shift = std::isfinite(peak) ? std::min(peak, 0.0) : 0.0;
    auto r = integrate(spec, cfg, log_scale - shift);
    const double back = std::exp(shift);
    r.value *= back;
    r.error *= back;
    r.imag_residual *= back;
    return r;
}

}  // namespace

mellin::ContourResult SnrDistribution::evaluate(const mellin::IncHSpec& spec, double log_scale) const {
    return evaluate_on_saddle(spec, accuracy_, log_scale, [](const auto& s, const auto& c, double l) {
        return mellin::integrate_inc_h(s, c, l);
    });
}

mellin::ContourResult SnrDistribution::evaluate(const mellin::HSpec& spec, double log_scale) const {
    return evaluate_on_saddle(spec, accuracy_, log_scale, [](const auto& s, const auto& c, double l) {
        return mellin::integrate_h(s, c, l);
    });
}

SnrTerms SnrDistribution::cdf_terms(double z) const {
    if (!(z >= 0.0)) throw DomainError("snr_cdf: z must be >= 0");
    if (z == 0.0) return {};
    if (std::isinf(z)) return {peak_weight(), std::exp(-x()), 0.0};
    const double u = std::sqrt(z / (approx_.b * approx_.b * p_));
    SnrTerms t;
    t.peak = specfun::gamma_p(approx_.v, u) * peak_weight();
    const auto h = evaluate(cdf_spec(z), -log_gamma_v_);
    t.interference = h.value;
    t.error = h.error;
    return t;
}

SnrTerms SnrDistribution::pdf_terms(double z) const {
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("snr_pdf: z must be finite and > 0");
    const double u = std::sqrt(z / (approx_.b * approx_.b * p_));
    SnrTerms t;
    // z^{v/2-1} e^{-u} / (2 (b^2 P)^{v/2} Gamma(v)) = u^v e^{-u} / (2 z Gamma(v))
    t.peak = std::exp(approx_.v * std::log(u) - u - log_gamma_v_) / (2.0 * z) * peak_weight();
    const auto h = evaluate(pdf_spec(z), -log_gamma_v_);
    t.interference = h.value / z;
    t.error = h.error / z;
    return t;
}

double SnrDistribution::cdf(double z) const { return cdf_terms(z).total(); }
double SnrDistribution::pdf(double z) const { return pdf_terms(z).total(); }

}  // namespace rissa
