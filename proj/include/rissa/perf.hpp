#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rissa/mellin.hpp"
#include "rissa/model.hpp"

namespace rissa {

enum class Mode {
    exact,
    asymptotic,             // high P: only the interference-limited term, x kept
    asymptotic_infinite_p,  // P -> infinity: same term with x = 0
    oracle,                 // direct quadrature, no H-functions for the final step
};

std::string_view to_string(Mode mode);
// Throws DomainError for unknown names.
Mode parse_mode(std::string_view name);

struct PerfResult {
    double value = 0.0;
    double error_estimate = 0.0;
    Mode method = Mode::exact;
};

/// Binary modulation with conditional BER Gamma(zeta, delta rho) / (2 Gamma(zeta)).
struct Modulation {
    double zeta = 0.5;
    double delta = 1.0;
    std::string name = "bpsk";

    void validate() const;
    friend bool operator==(const Modulation&, const Modulation&) = default;
};

/// bpsk (1/2, 1), bfsk (coherent, 1/2, 1/2), dpsk (1, 1), ncbfsk (noncoherent, 1, 1/2).
const std::vector<Modulation>& modulation_table();
// Throws DomainError for unknown names.
Modulation modulation(std::string_view name);

double ber_conditional(const Modulation& mod, double rho);

/// Exact value = peak + interference; the asymptotic mode keeps only the
/// interference term.
struct Decomposition {
    double peak = 0.0;
    double interference = 0.0;
    double peak_error = 0.0;
    double interference_error = 0.0;

    double total() const { return peak + interference; }
    double error() const { return peak_error + interference_error; }
};

Decomposition outage_terms(const SnrDistribution& dist, double gamma_th);
Decomposition capacity_terms(const SnrDistribution& dist);
Decomposition ber_terms(const SnrDistribution& dist, const Modulation& mod);

PerfResult outage(const SnrDistribution& dist, double gamma_th, Mode mode);
PerfResult capacity(const SnrDistribution& dist, Mode mode);
PerfResult avg_ber(const SnrDistribution& dist, const Modulation& mod, Mode mode);

/// H-function layouts (before their scalar prefactors). `x` is the
/// incompleteness parameter: dist.x() for the exact and asymptotic forms, 0
/// for the infinite-P limit.
mellin::HSpec capacity_peak_spec(const SnrDistribution& dist);
mellin::IncHSpec capacity_interference_spec(const SnrDistribution& dist, double x);
mellin::HSpec ber_peak_spec(const SnrDistribution& dist, const Modulation& mod);
mellin::IncHSpec ber_interference_spec(const SnrDistribution& dist, const Modulation& mod, double x);

}  // namespace rissa
