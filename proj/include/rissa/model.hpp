#pragma once

#include <cmath>

#include "rissa/mellin.hpp"
#include "rissa/specfun.hpp"

namespace rissa {

/// Physical configuration of the secondary link. All quantities linear.
struct SystemParams {
    int n_elements = 16;
    RicianParams hop1;   // source -> RIS
    RicianParams hop2;   // RIS -> destination
    double lambda = 1.0; // mean gain of the interference channel to the primary receiver
    double q = 1.0;      // interference power limit
    double p = 1.0;      // peak transmit power
    double n0 = 1.0;     // noise power

    void validate() const;

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// R = sum of N Rician products, approximated as Gamma(v, b) (shape, scale).
struct GammaApprox {
    double v = 1.0;
    double b = 1.0;

    friend bool operator==(const GammaApprox&, const GammaApprox&) = default;
};

/// Throws ConditioningError when var(R_n) / E[R_n]^2 < 1e-12.
GammaApprox gamma_approx(const SystemParams& params);

/// CDF or PDF value split into the peak-power-limited term (weighted by
/// 1 - exp(-x)) and the interference-limited term.
struct SnrTerms {
    double peak = 0.0;
    double interference = 0.0;
    double error = 0.0;  // contour error estimate of the interference term

    double total() const { return peak + interference; }
};

/// Law of rho = min(Q / h, P) R^2 / N0 with h ~ Exp(mean lambda), R ~ Gamma(v, b).
class SnrDistribution {
public:
    explicit SnrDistribution(const SystemParams& params, const mellin::ContourConfig& accuracy = {});
    SnrDistribution(const SystemParams& params, const GammaApprox& approx, const mellin::ContourConfig& accuracy = {});

    const SystemParams& params() const { return params_; }
    const GammaApprox& approx() const { return approx_; }
    // Tolerances used for every contour integral (the abscissa is chosen per spec).
    const mellin::ContourConfig& accuracy() const { return accuracy_; }

    // Q / (P lambda), the incompleteness parameter.
    double x() const { return q_ / (p_ * params_.lambda); }
    // Probability that the peak power, not the interference limit, is active.
    double peak_weight() const { return -std::expm1(-x()); }
    double log_gamma_v() const { return log_gamma_v_; }
    // P / N0 and Q / N0.
    double snr_p() const { return p_; }
    double snr_q() const { return q_; }

    double cdf(double z) const;
    double pdf(double z) const;
    SnrTerms cdf_terms(double z) const;
    SnrTerms pdf_terms(double z) const;

    // Incomplete H-function layouts of the interference terms, before the
    // 1 / Gamma(v) (and 1 / z for the PDF) factor.
    mellin::IncHSpec cdf_spec(double z) const;
    mellin::IncHSpec pdf_spec(double z) const;

    // exp(log_scale) * H for the given spec, with this distribution's tolerances.
    mellin::ContourResult evaluate(const mellin::IncHSpec& spec, double log_scale) const;
    mellin::ContourResult evaluate(const mellin::HSpec& spec, double log_scale) const;

private:
    SystemParams params_;
    GammaApprox approx_;
    mellin::ContourConfig accuracy_;
    double p_ = 1.0;
    double q_ = 1.0;
    double log_gamma_v_ = 0.0;
};

}  // namespace rissa
