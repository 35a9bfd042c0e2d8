// runner.hpp — config ingestion, scenario dispatch, sweeps, manifests,
// trace comparison.

#pragma once

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <vector>

namespace recoh::runner {

struct SweepRequest {
    std::string key;   // config path, e.g. "sudden.theta" or shorthand "theta"
    double from = 0.0;
    double to = 0.0;
    int count = 0;
};

struct RunOptions {
    std::string config_path;
    std::optional<std::string> scenario_override;
    std::optional<std::string> out_override;
    std::optional<SweepRequest> sweep;
    int workers = 1;
    std::optional<long> seed_override;
};

// Executes a scenario (or a sweep of them); writes CSV artifacts plus an
// atomically-renamed manifest. Returns the output directory.
std::string run(const RunOptions& opts);

struct CompareReport {
    std::string column;
    double max_abs = 0.0;
    double max_abs_at_t = 0.0;
    double rms = 0.0;
    bool interpolated = false;
    bool ok = true;
};

// Per-column discrepancy between two trace CSVs. Grids must match exactly;
// otherwise the second file is linearly interpolated and the report flagged.
// `column` empty means every shared column except t.
std::vector<CompareReport> compare(const std::string& path_a, const std::string& path_b,
                                   const std::string& column, double tol);

// "a:b:n" with optional pi-literals ("0:pi:36", "0:1.5pi:10")
SweepRequest parse_sweep(const std::string& key_and_range);

// Named example configs shipped under configs/
struct ExampleInfo {
    std::string name;
    std::string description;
};
std::vector<ExampleInfo> list_examples(const std::string& dir);

} // namespace recoh::runner
