#include "rissa/mc.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include "rissa/error.hpp"

namespace rissa::mc {
namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

struct Welford {
    long n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }

    void merge(const Welford& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double total = static_cast<double>(n + o.n);
        const double d = o.mean - mean;
        mean += d * static_cast<double>(o.n) / total;
        m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
        n += o.n;
    }

    Estimate estimate() const {
        Estimate e;
        e.n = n;
        e.mean = mean;
        e.std_error = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
        return e;
    }
};

// Per-stream samplers; distribution objects keep state, so each batch owns its own.
struct Drawer {
    const SystemParams& params;
    Sampler sampler;
    std::normal_distribution<double> normal{0.0, 1.0};
    std::exponential_distribution<double> expo{1.0};
    std::gamma_distribution<double> gamma;
    double sd1;
    double sd2;

    Drawer(const SystemParams& p, Sampler s, const GammaApprox& g)
        : params(p), sampler(s), gamma(g.v, g.b), sd1(std::sqrt(p.hop1.sigma2)), sd2(std::sqrt(p.hop2.sigma2)) {}

    double rician(double mu, double sd, Rng& rng) {
        const double re = mu + sd * normal(rng);
        const double im = sd * normal(rng);
        return std::hypot(re, im);
    }

    ChannelDraw operator()(Rng& rng) {
        ChannelDraw d;
        if (sampler == Sampler::gamma) {
            const double r = gamma(rng);
            d.r2 = r * r;
        } else {
            double r = 0.0;
            for (int i = 0; i < params.n_elements; ++i) {
                r += rician(params.hop1.mu, sd1, rng) * rician(params.hop2.mu, sd2, rng);
            }
            d.r2 = r * r;
        }
        d.e = expo(rng);
        return d;
    }
};

double conditional_ber(const Modulation& mod, double rho) {
    const double y = mod.delta * rho;
    if (mod.zeta == 0.5) return 0.5 * std::erfc(std::sqrt(y));
    if (mod.zeta == 1.0) return 0.5 * std::exp(-y);
    return 0.5 * specfun::gamma_q(mod.zeta, y);
}

double functional(const Probe& pr, const SystemParams& base, const ChannelDraw& d) {
    const double h = pr.lambda * d.e;
    const double rho = std::min(pr.q / h, pr.p) * d.r2 / base.n0;
    switch (pr.metric) {
        case Metric::outage: return rho <= pr.gamma_th ? 1.0 : 0.0;
        case Metric::capacity: return std::log1p(rho) / std::numbers::ln2;
        case Metric::ber: return conditional_ber(pr.modulation, rho);
    }
    return 0.0;
}

void validate_probe(const Probe& pr) {
    if (!(pr.p > 0.0) || !(pr.q > 0.0) || !(pr.lambda > 0.0)) {
        throw DomainError("mc probe: P, Q and lambda must be > 0");
    }
    if (pr.metric == Metric::outage && !(pr.gamma_th >= 0.0)) {
        throw DomainError("mc probe: outage threshold must be >= 0");
    }
    if (pr.metric == Metric::ber) pr.modulation.validate();
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& w : s_) w = splitmix64(x);
}

Rng::result_type Rng::operator()() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

void Rng::jump() {
    static constexpr std::array<std::uint64_t, 4> kJump{0x180ec6d33cfd0abaULL, 0xd5a61266f0c9392cULL,
                                                        0xa9582618e03fc9aaULL, 0x39abdc4529b1661cULL};
    std::array<std::uint64_t, 4> acc{};
    for (std::uint64_t word : kJump) {
        for (int b = 0; b < 64; ++b) {
            if (word & (std::uint64_t{1} << b)) {
                for (std::size_t i = 0; i < 4; ++i) acc[i] ^= s_[i];
            }
            (*this)();
        }
    }
    s_ = acc;
}

std::string_view to_string(Sampler sampler) { return sampler == Sampler::gamma ? "gamma" : "rician"; }

Sampler parse_sampler(std::string_view name) {
    if (name == "rician") return Sampler::rician;
    if (name == "gamma") return Sampler::gamma;
    throw DomainError("unknown sampler '" + std::string(name) + "'");
}

void SimConfig::validate() const {
    if (samples < 1) throw DomainError("mc: samples must be >= 1");
    if (batch < 1) throw DomainError("mc: batch must be >= 1");
    if (threads < 1) throw DomainError("mc: threads must be >= 1");
    params.validate();
}

double sample_rician(const RicianParams& p, Rng& rng) {
    p.validate();
    std::normal_distribution<double> normal;
    const double sd = std::sqrt(p.sigma2);
    return std::hypot(p.mu + sd * normal(rng), sd * normal(rng));
}

ChannelDraw draw_channel(const SystemParams& params, Sampler sampler, const GammaApprox& approx, Rng& rng) {
    Drawer d(params, sampler, approx);
    return d(rng);
}

double snr(const SystemParams& params, const ChannelDraw& draw) {
    const double h = params.lambda * draw.e;
    return std::min(params.q / h, params.p) * draw.r2 / params.n0;
}

double sample_snr(const SystemParams& params, Rng& rng) {
    params.validate();
    return snr(params, draw_channel(params, Sampler::rician, {}, rng));
}

Probe probe(const SimConfig& cfg, Metric metric) {
    Probe pr;
    pr.metric = metric;
    pr.p = cfg.params.p;
    pr.q = cfg.params.q;
    pr.lambda = cfg.params.lambda;
    return pr;
}

std::vector<Estimate> estimate(const SimConfig& cfg, std::span<const Probe> probes) {
    cfg.validate();
    for (const auto& pr : probes) validate_probe(pr);
    const GammaApprox approx = cfg.sampler == Sampler::gamma ? gamma_approx(cfg.params) : GammaApprox{};

    const long n_batches = (cfg.samples + cfg.batch - 1) / cfg.batch;
    std::vector<Rng> streams;
    streams.reserve(static_cast<std::size_t>(n_batches));
    Rng master(cfg.seed);
    for (long b = 0; b < n_batches; ++b) {
        streams.push_back(master);
        master.jump();
    }

    const std::size_t np = probes.size();
    std::vector<Welford> parts(static_cast<std::size_t>(n_batches) * np);
    auto run_batch = [&](long b) {
        Rng rng = streams[static_cast<std::size_t>(b)];
        Drawer draw(cfg.params, cfg.sampler, approx);
        Welford* acc = parts.data() + static_cast<std::size_t>(b) * np;
        const long count = std::min(cfg.batch, cfg.samples - b * cfg.batch);
        for (long i = 0; i < count; ++i) {
            const ChannelDraw d = draw(rng);
            for (std::size_t k = 0; k < np; ++k) acc[k].add(functional(probes[k], cfg.params, d));
        }
    };

    const int workers = static_cast<int>(std::min<long>(cfg.threads, n_batches));
    if (workers <= 1) {
        for (long b = 0; b < n_batches; ++b) run_batch(b);
    } else {
        std::atomic<long> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (long b = next++; b < n_batches; b = next++) run_batch(b);
            });
        }
        for (auto& t : pool) t.join();
    }

    std::vector<Estimate> out;
    out.reserve(np);
    for (std::size_t k = 0; k < np; ++k) {
        Welford total;
        for (long b = 0; b < n_batches; ++b) total.merge(parts[static_cast<std::size_t>(b) * np + k]);
        out.push_back(total.estimate());
    }
    return out;
}

Estimate estimate(Metric metric, const SimConfig& cfg, double gamma_th, const Modulation& mod) {
    Probe pr = probe(cfg, metric);
    pr.gamma_th = gamma_th;
    pr.modulation = mod;
    return estimate(cfg, std::span<const Probe>(&pr, 1)).front();
}

}  // namespace rissa::mc
