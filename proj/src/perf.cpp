#include "rissa/perf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "rissa/error.hpp"
#include "rissa/quadrature.hpp"

namespace rissa {
namespace {

const double kLn2 = std::numbers::ln2;

// Positive integrands whose value may be far below abs_tol (deep BER, tiny
// capacity) are integrated to relative accuracy only.
quad::Tolerance oracle_tolerance(const SnrDistribution& dist, bool relative_only = false) {
    quad::Tolerance tol;
    tol.rel = std::min(dist.accuracy().rel_tol, 1e-7);
    tol.abs = relative_only ? 1e-300 : dist.accuracy().abs_tol;
    tol.max_panels = 20000;
    return tol;
}

// Sorted, deduplicated breakpoints inside [lo, hi], endpoints included.
std::vector<double> breaks_within(double lo, double hi, std::vector<double> pts) {
    pts.push_back(lo);
    pts.push_back(hi);
    std::vector<double> out;
    for (double p : pts) {
        if (p >= lo && p <= hi && std::isfinite(p)) out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

template <class F>
quad::Result<double> integrate_checked(F&& f, const std::vector<double>& breaks, const quad::Tolerance& tol,
                                       const char* who) {
    auto res = quad::integrate<double>(std::forward<F>(f), std::span<const double>(breaks), tol);
    if (!res.converged) {
        throw ConvergenceError(std::string(who) + ": oracle quadrature did not reach tolerance (error " +
                               std::to_string(res.error) + ")");
    }
    return res;
}

// Breakpoints that resolve a Gamma(v, 1) variate: its bulk, tails and origin.
std::vector<double> gamma_variate_breaks(double v) {
    std::vector<double> pts;
    const double sd = std::sqrt(v);
    for (int k = -12; k <= 40; k += 4) pts.push_back(v + k * sd);
    for (int k = 1; k <= 8; k += 2) pts.push_back(v * std::ldexp(1.0, -k));
    return pts;
}

// P(rho <= z) by integrating over the interference channel gain t = h / lambda.
PerfResult outage_oracle(const SnrDistribution& dist, double z) {
    if (!(z > 0.0)) throw DomainError("outage: gamma_th must be > 0");
    const auto& g = dist.approx();
    const double x = dist.x();
    const double c2 = z * dist.params().lambda / (g.b * g.b * dist.snr_q());
    const double peak = specfun::gamma_p(g.v, std::sqrt(z / (g.b * g.b * dist.snr_p()))) * dist.peak_weight();
    // The regularized gamma switches on around t = v^2 / c2.
    const double t_star = g.v * g.v / c2;
    std::vector<double> pts;
    for (int k = -6; k <= 6; ++k) pts.push_back(x + t_star * std::ldexp(1.0, k));
    for (int k = 0; k <= 6; ++k) pts.push_back(x + std::ldexp(1.0, k));
    const auto breaks = breaks_within(x, x + 64.0, pts);
    const auto res = integrate_checked(
        [&](double t) { return specfun::gamma_p(g.v, std::sqrt(c2 * t)) * std::exp(-t); }, breaks,
        oracle_tolerance(dist), "outage");
    return {peak + res.value, res.error, Mode::oracle};
}

// Peak-power term: E[ln(1 + b^2 P u^2)] over u ~ Gamma(v, 1), weighted.
double capacity_peak_oracle(const SnrDistribution& dist, double& error) {
    const auto& g = dist.approx();
    const double k = g.b * g.b * dist.snr_p();
    const double lgv = dist.log_gamma_v();
    const auto breaks = breaks_within(0.0, g.v + 60.0 * std::sqrt(g.v) + 60.0, gamma_variate_breaks(g.v));
    const auto res = integrate_checked(
        [&](double u) {
            if (u <= 0.0) return 0.0;
            return std::log1p(k * u * u) * std::exp((g.v - 1.0) * std::log(u) - u - lgv);
        },
        breaks, oracle_tolerance(dist, true), "capacity");
    error = res.error * dist.peak_weight() / kLn2;
    return res.value * dist.peak_weight() / kLn2;
}

// Interference term: int ln(1 + z) f(z) dz over the interference part of the
// SNR density, in the variable u = sqrt(z / (b^2 P)).
double capacity_interference_oracle(const SnrDistribution& dist, double& error) {
    const auto& g = dist.approx();
    const double scale = g.b * g.b * dist.snr_p();
    const double x = dist.x();
    // rho = (R / b)^2 b^2 P x / t with t = h / lambda > x, so u = (R / b) sqrt(x / t).
    const double hi = g.v + 40.0 * std::sqrt(g.v) + 40.0;
    const double lo = std::max(g.v - 12.0 * std::sqrt(g.v), 0.05 * g.v) * std::sqrt(std::min(1.0, x) / 80.0);
    const double sd = std::sqrt(g.v);
    std::vector<double> pts{g.v - 6.0 * sd, g.v - 2.0 * sd, g.v + 2.0 * sd, g.v + 6.0 * sd, g.v + 14.0 * sd};
    for (double u = lo; u < g.v - 6.0 * sd; u *= 4.0) pts.push_back(u);
    const auto breaks = breaks_within(lo, hi, pts);
    const auto res = integrate_checked(
        [&](double u) {
            const double z = scale * u * u;
            return std::log1p(z) * dist.pdf_terms(z).interference * 2.0 * scale * u;
        },
        breaks, oracle_tolerance(dist, true), "capacity");
    error = res.error / kLn2;
    return res.value / kLn2;
}

// Average BER from the CDF: delta^zeta / (2 Gamma(zeta)) int e^{-delta z} z^{zeta-1} F(z) dz, with z = u^2.
// When F rises faster than e^{-delta z} decays (deep-tail settings) the mass
// sits far out, so the range grows until the last slab is negligible.
PerfResult ber_oracle(const SnrDistribution& dist, const Modulation& mod) {
    const double log_front = mod.zeta * std::log(mod.delta) - std::lgamma(mod.zeta);
    const auto tol = oracle_tolerance(dist, true);
    auto f = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double z = u * u;
        return std::exp(log_front - mod.delta * z + (2.0 * mod.zeta - 1.0) * std::log(u)) * dist.cdf(z);
    };
    double lo = 0.0;
    double hi = std::sqrt(40.0 / mod.delta);
    PerfResult r{0.0, 0.0, Mode::oracle};
    for (int slab = 0; slab < 64; ++slab) {
        std::vector<double> pts;
        for (int k = 1; k < 4; ++k) pts.push_back(lo + (hi - lo) * k / 4.0);
        const auto res = integrate_checked(f, breaks_within(lo, hi, pts), tol, "avg_ber");
        r.value += res.value;
        r.error_estimate += res.error;
        if (slab > 0 && res.value <= 1e-3 * tol.rel * r.value) return r;
        lo = hi;
        hi *= 1.5;
    }
    throw ConvergenceError("avg_ber: oracle range did not capture the mass");
}

}  // namespace

std::string_view to_string(Mode mode) {
    switch (mode) {
        case Mode::exact: return "exact";
        case Mode::asymptotic: return "asymptotic";
        case Mode::asymptotic_infinite_p: return "asymptotic_infinite_p";
        case Mode::oracle: return "oracle";
    }
    return "unknown";
}

Mode parse_mode(std::string_view name) {
    for (Mode m : {Mode::exact, Mode::asymptotic, Mode::asymptotic_infinite_p, Mode::oracle}) {
        if (to_string(m) == name) return m;
    }
    throw DomainError("unknown mode '" + std::string(name) + "'");
}

void Modulation::validate() const {
    if (!(zeta > 0.0) || !(delta > 0.0) || !std::isfinite(zeta) || !std::isfinite(delta)) {
        throw DomainError("modulation: zeta and delta must be finite and > 0");
    }
}

const std::vector<Modulation>& modulation_table() {
    static const std::vector<Modulation> table{
        {0.5, 1.0, "bpsk"},
        {0.5, 0.5, "bfsk"},
        {1.0, 1.0, "dpsk"},
        {1.0, 0.5, "ncbfsk"},
    };
    return table;
}

Modulation modulation(std::string_view name) {
    for (const auto& m : modulation_table()) {
        if (m.name == name) return m;
    }
    throw DomainError("unknown modulation '" + std::string(name) + "'");
}

double ber_conditional(const Modulation& mod, double rho) {
    mod.validate();
    if (!(rho >= 0.0)) throw DomainError("ber_conditional: rho must be >= 0");
    return 0.5 * specfun::gamma_q(mod.zeta, mod.delta * rho);
}

mellin::HSpec capacity_peak_spec(const SnrDistribution& dist) {
    const auto& g = dist.approx();
    return {1, 3, {{1.0 - g.v, 2}, {1, 1}, {1, 1}}, {{1, 1}, {0, 1}}, g.b * g.b * dist.snr_p()};
}

// The interference capacity term is written with both Gamma(-s/2) factors on
// the right of the contour, which puts the s = 0 double pole where the
// expectation of ln(1 + rho) needs it.
mellin::IncHSpec capacity_interference_spec(const SnrDistribution& dist, double x) {
    const auto& g = dist.approx();
    const double w = std::sqrt(dist.params().lambda / (g.b * g.b * dist.snr_q()));
    return {{3, 2, {{0, 0.5}, {0, 0.5}, {1, 0.5}}, {{g.v, 1}, {0, 0.5}, {0, 0.5}}, w}, x};
}

mellin::HSpec ber_peak_spec(const SnrDistribution& dist, const Modulation& mod) {
    const auto& g = dist.approx();
    return {1, 2, {{1.0 - mod.zeta, 0.5}, {1, 1}}, {{g.v, 1}, {0, 1}},
            std::sqrt(1.0 / (mod.delta * g.b * g.b * dist.snr_p()))};
}

mellin::IncHSpec ber_interference_spec(const SnrDistribution& dist, const Modulation& mod, double x) {
    const auto& g = dist.approx();
    return {{1, 3, {{0, 0.5}, {1.0 - mod.zeta, 0.5}, {1, 1}}, {{g.v, 1}, {0, 1}},
             std::sqrt(dist.params().lambda / (mod.delta * g.b * g.b * dist.snr_q()))},
            x};
}

namespace {

mellin::ContourResult eval_maybe_complete(const SnrDistribution& dist, const mellin::IncHSpec& spec,
                                          double log_scale) {
    if (spec.x == 0.0) return dist.evaluate(spec.complete(), log_scale);
    return dist.evaluate(spec, log_scale);
}

double capacity_interference(const SnrDistribution& dist, double x, double& error) {
    const auto h = eval_maybe_complete(dist, capacity_interference_spec(dist, x), -dist.log_gamma_v());
    error = h.error / (2.0 * kLn2);
    return h.value / (2.0 * kLn2);
}

double ber_interference(const SnrDistribution& dist, const Modulation& mod, double x, double& error) {
    const double log_scale = -dist.log_gamma_v() - std::lgamma(mod.zeta) - std::numbers::ln2;
    const auto h = eval_maybe_complete(dist, ber_interference_spec(dist, mod, x), log_scale);
    error = h.error;
    return h.value;
}

double cdf_interference(const SnrDistribution& dist, double z, double x, double& error) {
    auto spec = dist.cdf_spec(z);
    spec.x = x;
    const auto h = eval_maybe_complete(dist, spec, -dist.log_gamma_v());
    error = h.error;
    return h.value;
}

}  // namespace

Decomposition outage_terms(const SnrDistribution& dist, double gamma_th) {
    if (!(gamma_th > 0.0)) throw DomainError("outage: gamma_th must be > 0");
    const auto t = dist.cdf_terms(gamma_th);
    return {t.peak, t.interference, 0.0, t.error};
}

Decomposition capacity_terms(const SnrDistribution& dist) {
    Decomposition d;
    const auto h = dist.evaluate(capacity_peak_spec(dist), -dist.log_gamma_v());
    d.peak = dist.peak_weight() * h.value / kLn2;
    d.peak_error = dist.peak_weight() * h.error / kLn2;
    d.interference = capacity_interference(dist, dist.x(), d.interference_error);
    return d;
}

Decomposition ber_terms(const SnrDistribution& dist, const Modulation& mod) {
    mod.validate();
    Decomposition d;
    const double log_scale = -dist.log_gamma_v() - std::lgamma(mod.zeta) - std::numbers::ln2;
    const auto h = dist.evaluate(ber_peak_spec(dist, mod), log_scale);
    d.peak = dist.peak_weight() * h.value;
    d.peak_error = dist.peak_weight() * h.error;
    d.interference = ber_interference(dist, mod, dist.x(), d.interference_error);
    return d;
}

PerfResult outage(const SnrDistribution& dist, double gamma_th, Mode mode) {
    if (!(gamma_th > 0.0)) throw DomainError("outage: gamma_th must be > 0");
    PerfResult r;
    r.method = mode;
    switch (mode) {
        case Mode::exact: {
            const auto d = outage_terms(dist, gamma_th);
            r.value = d.total();
            r.error_estimate = d.error();
            break;
        }
        case Mode::asymptotic: r.value = cdf_interference(dist, gamma_th, dist.x(), r.error_estimate); break;
        case Mode::asymptotic_infinite_p: r.value = cdf_interference(dist, gamma_th, 0.0, r.error_estimate); break;
        case Mode::oracle: return outage_oracle(dist, gamma_th);
    }
    return r;
}

PerfResult capacity(const SnrDistribution& dist, Mode mode) {
    PerfResult r;
    r.method = mode;
    switch (mode) {
        case Mode::exact: {
            const auto d = capacity_terms(dist);
            r.value = d.total();
            r.error_estimate = d.error();
            break;
        }
        case Mode::asymptotic: r.value = capacity_interference(dist, dist.x(), r.error_estimate); break;
        case Mode::asymptotic_infinite_p: r.value = capacity_interference(dist, 0.0, r.error_estimate); break;
        case Mode::oracle: {
            double e1 = 0.0;
            double e2 = 0.0;
            r.value = capacity_peak_oracle(dist, e1) + capacity_interference_oracle(dist, e2);
            r.error_estimate = e1 + e2;
            break;
        }
    }
    return r;
}

PerfResult avg_ber(const SnrDistribution& dist, const Modulation& mod, Mode mode) {
    mod.validate();
    PerfResult r;
    r.method = mode;
    switch (mode) {
        case Mode::exact: {
            const auto d = ber_terms(dist, mod);
            r.value = d.total();
            r.error_estimate = d.error();
            break;
        }
        case Mode::asymptotic: r.value = ber_interference(dist, mod, dist.x(), r.error_estimate); break;
        case Mode::asymptotic_infinite_p: r.value = ber_interference(dist, mod, 0.0, r.error_estimate); break;
        case Mode::oracle: return ber_oracle(dist, mod);
    }
    return r;
}

}  // namespace rissa
