#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "rissa/model.hpp"
#include "rissa/perf.hpp"

namespace rissa::mc {

/// xoshiro256++ (Blackman & Vigna). Period 2^256 - 1; jump() advances by
/// 2^128 draws, which gives each batch its own non-overlapping substream.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();
    void jump();

private:
    std::array<std::uint64_t, 4> s_{};
};

enum class Sampler {
    rician,  // physical: N Rician products per draw
    gamma,   // R drawn from the gamma approximation Gamma(v, b)
};

std::string_view to_string(Sampler sampler);
// Throws DomainError for unknown names.
Sampler parse_sampler(std::string_view name);

struct SimConfig {
    long samples = 10'000'000;
    std::uint64_t seed = 1;
    SystemParams params;
    long batch = 1L << 16;
    Sampler sampler = Sampler::rician;
    int threads = 1;

    void validate() const;
};

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    long n = 0;
};

double sample_rician(const RicianParams& p, Rng& rng);

/// One realization of the quantities that do not depend on P, Q or lambda:
/// R^2 and the unit-mean exponential e, with |h0|^2 = lambda e.
struct ChannelDraw {
    double r2 = 0.0;
    double e = 0.0;
};

ChannelDraw draw_channel(const SystemParams& params, Sampler sampler, const GammaApprox& approx, Rng& rng);

/// rho = min(Q / |h0|^2, P) R^2 / N0.
double snr(const SystemParams& params, const ChannelDraw& draw);

/// Physical SNR sample.
double sample_snr(const SystemParams& params, Rng& rng);

enum class Metric { outage, capacity, ber };

/// A metric evaluated at one operating point. P, Q and lambda may differ
/// between probes of one run; N and the hop parameters come from SimConfig.
struct Probe {
    Metric metric = Metric::outage;
    double gamma_th = 10.0;     // outage threshold (linear)
    Modulation modulation;      // ber
    double p = 1.0;
    double q = 1.0;
    double lambda = 1.0;
};

/// Probe at the operating point of cfg.params.
Probe probe(const SimConfig& cfg, Metric metric);

/// One estimate per probe, all from the same channel draws. Bitwise
/// reproducible for fixed (seed, batch, samples) regardless of thread count.
std::vector<Estimate> estimate(const SimConfig& cfg, std::span<const Probe> probes);

/// Single-metric convenience at cfg.params.
Estimate estimate(Metric metric, const SimConfig& cfg, double gamma_th = 10.0, const Modulation& mod = {});

}  // namespace rissa::mc
