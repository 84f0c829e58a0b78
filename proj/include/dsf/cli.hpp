#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dsf {

// Exit codes: 0 success, 1 internal invariant violation, 2 usage error,
// 3 budget exhausted (partial outputs written).
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;

struct RunConfig {
    std::string subcommand;

    // environment
    int d = 2;
    double p = 0.5;
    std::uint64_t seed = 1;

    // experiment knobs
    std::int64_t replicas = 1000;
    std::int64_t steps = 1000;            // path / domination step counts
    std::int64_t step_cap = 1'000'000;    // joint-step budget
    std::int64_t level_cap = 100'000;     // coalescence censoring cap
    std::int64_t horizon = 100'000;       // census / density horizon
    int separation = 1;
    std::int64_t j_max = 10;
    int max_radius = 10'000;
    int extent = 20;                      // census half-extent on the first axis
    int window_halfwidth = 1000;          // density window
    std::vector<std::int64_t> density_ts = {1, 10, 100, 1000, 10'000};
    int lyapunov_x1 = 48;
    int lyapunov_x2 = 64;

    // scaling diagnostics
    int scale_n = 100;
    double t = 1.0;
    double a = 0.0;
    double b = 1.0;
    std::vector<double> epsilons = {0.05, 0.1, 0.2, 0.4, 0.8};
    int grid = 20;
    std::int64_t constants_replicas = 1000;
    int constants_j = 100;

    // execution
    std::string out_dir = "out";
    int workers = 0;  // 0: DSF_WORKERS env or hardware concurrency
};

/// Executes one subcommand; writes CSV data, summary.json and manifest.json
/// into out_dir. Returns a process exit code.
int run(const RunConfig& config);

/// Parses argv into a config. Throws std::invalid_argument on usage errors
/// (after CLI11 has printed its message).
int parse_and_run(int argc, char** argv);

}  // namespace dsf
