#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rissa/runspec.hpp"

namespace rissa::cli {

struct RunOptions {
    int threads = 1;
    std::optional<std::uint64_t> seed;  // overrides the spec's mc.seed
};

struct Row {
    PlanRow plan;
    double value = 0.0;
    double err = 0.0;
    double seconds = 0.0;  // mc rows: share of the simulation time of their group
    bool failed = false;
    std::string message;
};

/// Executes every row of plan(spec). Numeric failures are recorded on the row
/// and the run continues.
std::vector<Row> run(const RunSpec& spec, const RunOptions& options = {});

/// %.10g; nan and inf spelled out.
std::string format_number(double x);

inline constexpr const char* kCsvHeader = "sweep_var,sweep_value,metric,mode,value,err,seconds";

/// The seconds column stays empty unless `timing` is set, so that runs with
/// the same seed produce identical bytes.
void write_csv(std::ostream& out, const RunSpec& spec, const std::vector<Row>& rows, bool timing = false);

}  // namespace rissa::cli
