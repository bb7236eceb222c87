#pragma once

#include <optional>
#include <string>
#include <vector>

#include "occulp/io.hpp"
#include "occulp/limits.hpp"

namespace occulp::cli {

struct SimulateSpec {
    State y0;
    int control = 0;
    int horizon = 1;
    bool operator==(const SimulateSpec&) const = default;
};

struct LpSpec {
    std::string kind = "average";   // "average" | "discounted"
    double alpha = 0.9;             // discounted only
    State y0;                       // discounted only
    bool compactified = false;      // average only
    bool operator==(const LpSpec&) const = default;
};

/// One experiment per invocation; schedules and tolerances have documented
/// defaults (indicator basis, vi_tol 1e-8, lp_tol 1e-9, output_dir "out").
struct RunConfig {
    std::string system_name;
    Params system_params;
    std::optional<GridSpec> grid;
    std::string cost_name;
    Params cost_params;
    std::optional<double> cost_truncation;   // cap M; mutually exclusive with
    std::optional<double> cost_at_inf;       // an explicit infinity cost
    BasisSpec basis;
    std::string experiment;
    std::vector<double> alphas;
    std::vector<long long> horizons;
    std::vector<double> truncations;
    double vi_tol = 1e-8;
    double lp_tol = 1e-9;
    std::string output_dir = "out";
    std::optional<SimulateSpec> simulate;
    std::optional<LpSpec> lp;

    bool operator==(const RunConfig&) const = default;
};

/// Parses and validates a strict-schema JSON config; unknown keys are
/// rejected with their key path. Throws std::invalid_argument on violations.
RunConfig parse_config(const std::string& json_text);

/// Canonical JSON for a config; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

/// Runs the configured experiment, writing artifacts under output_dir.
/// Returns 0 on success and 1 on experiment-level failure; failures also
/// leave a diagnostic.json in the output directory.
int run(const RunConfig& config, bool quiet = false);

/// Flag-level entry point: --config <path>, --output <dir>,
/// --experiment <name>, --quiet. Returns the process exit code
/// (0 success, 1 experiment failure, 2 config failure).
int main(int argc, char** argv);

}   // namespace occulp::cli
