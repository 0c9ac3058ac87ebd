#include "rissa/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <thread>

namespace rissa::cli {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

PerfResult evaluate(const SnrDistribution& dist, Metric metric, Mode mode, double gamma_th, const Modulation& mod) {
    switch (metric) {
        case Metric::outage: return outage(dist, gamma_th, mode);
        case Metric::capacity: return capacity(dist, mode);
        case Metric::ber: return avg_ber(dist, mod, mode);
    }
    return {};
}

void fail_row(Row& row, const std::string& message) {
    row.failed = true;
    row.value = std::nan("");
    row.err = std::nan("");
    row.message = message;
}

// Analytic rows of one grid point.
void run_point(const RunSpec& spec, std::size_t i, std::vector<Row>& rows, const std::vector<std::size_t>& slots) {
    std::optional<SnrDistribution> dist;
    std::string setup_error;
    try {
        dist.emplace(point_params(spec, i));
    } catch (const std::exception& e) {
        setup_error = e.what();
    }
    const double gamma_th = point_gamma_th(spec, i);
    for (std::size_t slot : slots) {
        Row& row = rows[slot];
        if (!dist) {
            fail_row(row, setup_error);
            continue;
        }
        const auto t0 = Clock::now();
        try {
            const auto r = evaluate(*dist, row.plan.metric, row.plan.mode.analytic, gamma_th, spec.modulation);
            row.value = r.value;
            row.err = r.error_estimate;
            if (!std::isfinite(r.value)) fail_row(row, "non-finite result");
        } catch (const std::exception& e) {
            fail_row(row, e.what());
        }
        row.seconds = seconds_since(t0);
    }
}

// Monte-Carlo rows sharing one set of channel draws (same N).
void run_mc_group(const RunSpec& spec, const RunOptions& options, const std::vector<std::size_t>& slots,
                  std::vector<Row>& rows) {
    const auto t0 = Clock::now();
    try {
        mc::SimConfig cfg;
        cfg.samples = spec.mc.samples;
        cfg.seed = options.seed.value_or(spec.mc.seed);
        cfg.batch = spec.mc.batch;
        cfg.sampler = spec.mc.sampler;
        cfg.threads = std::max(1, options.threads);
        cfg.params = point_params(spec, rows[slots.front()].plan.grid_index);

        std::vector<mc::Probe> probes;
        for (std::size_t slot : slots) {
            const std::size_t i = rows[slot].plan.grid_index;
            const SystemParams p = point_params(spec, i);
            mc::Probe pr;
            pr.metric = rows[slot].plan.metric;
            pr.gamma_th = point_gamma_th(spec, i);
            pr.modulation = spec.modulation;
            pr.p = p.p;
            pr.q = p.q;
            pr.lambda = p.lambda;
            probes.push_back(pr);
        }
        const auto est = mc::estimate(cfg, probes);
        for (std::size_t k = 0; k < slots.size(); ++k) {
            rows[slots[k]].value = est[k].mean;
            rows[slots[k]].err = est[k].std_error;
        }
    } catch (const std::exception& e) {
        for (std::size_t slot : slots) fail_row(rows[slot], e.what());
    }
    const double share = seconds_since(t0) / static_cast<double>(slots.size());
    for (std::size_t slot : slots) rows[slot].seconds = share;
}

}  // namespace

std::vector<Row> run(const RunSpec& spec, const RunOptions& options) {
    validate(spec);
    const auto p = plan(spec);
    std::vector<Row> rows(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) rows[k].plan = p[k];

    std::vector<std::vector<std::size_t>> analytic(spec.grid.size());
    std::map<int, std::vector<std::size_t>> mc_groups;  // keyed by N
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k].mode.mc) {
            mc_groups[point_params(spec, p[k].grid_index).n_elements].push_back(k);
        } else {
            analytic[p[k].grid_index].push_back(k);
        }
    }

    const std::size_t n_points = spec.grid.size();
    const auto workers = static_cast<std::size_t>(std::max(1, options.threads));
    if (workers <= 1 || n_points <= 1) {
        for (std::size_t i = 0; i < n_points; ++i) run_point(spec, i, rows, analytic[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < std::min(workers, n_points); ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n_points; i = next++) run_point(spec, i, rows, analytic[i]);
            });
        }
        for (auto& t : pool) t.join();
    }

    for (const auto& [n, slots] : mc_groups) run_mc_group(spec, options, slots, rows);
    return rows;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

void write_csv(std::ostream& out, const RunSpec& spec, const std::vector<Row>& rows, bool timing) {
    out << kCsvHeader << '\n';
    for (const Row& r : rows) {
        out << to_string(spec.sweep_var) << ',' << format_number(r.plan.sweep_value) << ',' << to_string(r.plan.metric)
            << ',' << to_string(r.plan.mode) << ',' << format_number(r.value) << ',' << format_number(r.err) << ',';
        if (timing) out << format_number(r.seconds);
        out << '\n';
    }
}

}  // namespace rissa::cli
