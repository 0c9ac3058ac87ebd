#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rissa/error.hpp"
#include "rissa/mc.hpp"
#include "rissa/model.hpp"
#include "rissa/perf.hpp"

namespace rissa::cli {

using mc::Metric;

/// Invalid run configuration. `line` is 1-based, 0 when unknown; `field` is a
/// JSON pointer such as "/mc/samples".
class ConfigError : public Error {
public:
    ConfigError(const std::string& message, std::string field, int line);

    const std::string& field() const { return field_; }
    int line() const { return line_; }

private:
    std::string field_;
    int line_;
};

enum class SweepVar { p_db, q_db, n, gamma_th_db };

std::string_view to_string(SweepVar var);
std::optional<SweepVar> parse_sweep_var(std::string_view name);

/// A mode column of the output: one of the analytic modes or Monte-Carlo.
struct RunMode {
    bool mc = false;
    Mode analytic = Mode::exact;

    friend bool operator==(const RunMode&, const RunMode&) = default;
};

std::string_view to_string(RunMode mode);

struct McSettings {
    long samples = 10'000'000;
    std::uint64_t seed = 1;
    long batch = 1L << 16;
    mc::Sampler sampler = mc::Sampler::rician;

    friend bool operator==(const McSettings&, const McSettings&) = default;
};

/// Fixed values in dB carry a _db suffix in the file and are kept in dB here;
/// conversion to linear happens in point_params().
struct RunSpec {
    std::string name;
    std::vector<std::string> assumptions;  // assumed values, carried through for the reader
    SweepVar sweep_var = SweepVar::p_db;
    std::vector<double> grid;

    int n = 16;
    double p_db = 0.0;
    double q_db = 0.0;
    double lambda_db = 0.0;
    double gamma_th_db = 10.0;
    double n0_db = 0.0;
    RicianParams hop1;
    RicianParams hop2;

    std::vector<Metric> metrics;
    std::vector<RunMode> modes;
    Modulation modulation;
    McSettings mc;

    friend bool operator==(const RunSpec&, const RunSpec&) = default;
};

double db_to_linear(double db);

/// Throws ConfigError.
RunSpec parse_runspec(std::string_view text);
RunSpec load_runspec(const std::string& path);
std::string serialize(const RunSpec& spec);
void validate(const RunSpec& spec);

/// System parameters at grid index i.
SystemParams point_params(const RunSpec& spec, std::size_t i);
double point_gamma_th(const RunSpec& spec, std::size_t i);

struct PlanRow {
    std::size_t grid_index = 0;
    double sweep_value = 0.0;
    Metric metric = Metric::outage;
    RunMode mode;

    friend bool operator==(const PlanRow&, const PlanRow&) = default;
};

/// Output rows in order: grid index, then metrics and modes as listed.
std::vector<PlanRow> plan(const RunSpec& spec);

std::string_view to_string(Metric metric);
std::optional<Metric> parse_metric(std::string_view name);

}  // namespace rissa::cli
