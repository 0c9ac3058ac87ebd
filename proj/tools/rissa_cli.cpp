#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rissa/runner.hpp"

namespace {

int env_threads() {
    const char* s = std::getenv("RISSA_THREADS");
    if (!s || !*s) return 0;
    try {
        return std::max(0, std::stoi(s));
    } catch (const std::exception&) {
        std::cerr << "warning: ignoring RISSA_THREADS='" << s << "'\n";
        return 0;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sweeps outage, capacity and BER of RIS-assisted underlay links"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Execute a run configuration and write CSV");
    std::string config;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    bool timing = false;
    run->add_option("config", config, "Run configuration (JSON)")->required();
    run->add_option("--out", out_path, "CSV output path (default: stdout)");
    run->add_option("--seed", seed, "Monte-Carlo seed, overrides the configuration");
    run->add_option("--threads", threads, "Worker threads (default: RISSA_THREADS or 1)")->check(CLI::PositiveNumber);
    run->add_flag("--timing", timing, "Fill the seconds column");

    CLI11_PARSE(app, argc, argv);

    rissa::cli::RunSpec spec;
    try {
        spec = rissa::cli::load_runspec(config);
    } catch (const rissa::cli::ConfigError& e) {
        std::cerr << config << ": " << e.what() << '\n';
        return 2;
    }

    rissa::cli::RunOptions options;
    options.threads = threads > 0 ? threads : std::max(1, env_threads());
    options.seed = seed;
    const auto rows = rissa::cli::run(spec, options);

    int failed = 0;
    for (const auto& r : rows) {
        if (!r.failed) continue;
        ++failed;
        std::cerr << "row failed: " << rissa::cli::to_string(spec.sweep_var) << '=' << r.plan.sweep_value << ' '
                  << rissa::cli::to_string(r.plan.metric) << ' ' << rissa::cli::to_string(r.plan.mode) << ": "
                  << r.message << '\n';
    }

    if (out_path.empty()) {
        rissa::cli::write_csv(std::cout, spec, rows, timing);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write '" << out_path << "'\n";
            return 2;
        }
        rissa::cli::write_csv(out, spec, rows, timing);
    }
    return failed > 0 ? 1 : 0;
}
