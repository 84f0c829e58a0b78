#pragma once

#include <cstdint>
#include <vector>

#include "dsf/domination.hpp"
#include "dsf/exploration.hpp"
#include "dsf/stats.hpp"

namespace dsf {

// Seed-stream tags for per-replica field derivation. Each driver owns one so
// that experiments never share lattice realizations.
inline constexpr std::uint64_t kSeedCoalesce = 0xC0A1;
inline constexpr std::uint64_t kSeedStay = 0x57A1;
inline constexpr std::uint64_t kSeedMartingale = 0x3A47;
inline constexpr std::uint64_t kSeedLyapunov = 0x1AFA;
inline constexpr std::uint64_t kSeedCensus = 0xCE05;
inline constexpr std::uint64_t kSeedRegen = 0x4E6E;
inline constexpr std::uint64_t kSeedDomination = 0xD011;
inline constexpr std::uint64_t kSeedDensity = 0xDE5A;

struct CoalescenceSample {
    std::vector<std::int32_t> separation;
    std::int64_t T_nu = 0;  // level at coalescence, or the cap when censored
    std::int64_t nu = 0;    // regeneration count at coalescence
    bool censored = false;
};

/// Two walkers at lattice separation `separation` along the first axis, run
/// per replica until they coincide at a regeneration or pass level_cap.
std::vector<CoalescenceSample> coalescence_experiment(const FieldParams& params,
                                                      int separation, int replicas,
                                                      std::int64_t level_cap,
                                                      int workers = 1);

struct StayProbability {
    double empirical = 0.0;
    double se = 0.0;
    double bound = 0.0;  // 1 - (1-p)^6 p^3, independent of m
    std::int64_t replicas = 0;
};

/// Monte Carlo estimate of P(Z_1 = m | Z_0 = m) from fresh starts at
/// separation m (d=2), with the analytic upper bound it must respect.
StayProbability stay_probability_bound_check(const FieldParams& params, int m,
                                             int replicas, int workers = 1);

struct DriftPoint {
    int j = 0;
    double mean = 0.0;
    double se = 0.0;
    std::int64_t n = 0;
};

/// Raw per-replica increments of the left walker's first coordinate at joint
/// regenerations (d=2); inner vectors may be shorter than j_max when a run
/// exhausts its budget.
std::vector<std::vector<double>> martingale_increments(const FieldParams& params,
                                                       int separation, int j_max,
                                                       int replicas, int workers = 1);

/// Per-j mean and standard error of the first-coordinate increments of the
/// left walker at successive joint regenerations (d=2).
std::vector<DriftPoint> martingale_drift_test(const FieldParams& params, int separation,
                                              int j_max, int replicas, int workers = 1);

struct LyapunovResult {
    double mean = 0.0;
    double se = 0.0;
    double upper99 = 0.0;  // one-sided 99% upper confidence bound
    std::int64_t n = 0;
};

double lyapunov_f(double x1, double x2);

/// Raw one-regeneration Lyapunov increments, one per replica.
std::vector<double> lyapunov_increments(const FieldParams& params, std::int32_t x1,
                                        std::int32_t x2, int replicas, int workers = 1);

/// Mean one-regeneration increment of f(z) = sqrt(log(1+|z|^2)) for a pair
/// separated by (x1, x2) in d=3.
LyapunovResult lyapunov_drift_test(const FieldParams& params, std::int32_t x1,
                                   std::int32_t x2, int replicas, int workers = 1);

struct ForestCensus {
    int d = 0;
    std::vector<Vertex> starts;
    std::int64_t horizon = 0;
    std::vector<std::int64_t> checkpoint_levels;
    std::vector<std::int64_t> components;  // one count per checkpoint
};

/// Launches a path from every open vertex of the level-0 box given by
/// per-axis half-extents and counts surviving components at checkpoints.
ForestCensus forest_census(const FieldParams& params, const std::vector<int>& extents,
                           std::int64_t horizon,
                           std::vector<std::int64_t> checkpoints = {});

std::vector<std::int64_t> default_census_checkpoints(std::int64_t horizon);

struct IndependentPairRun {
    std::vector<DifferenceSample> samples;  // includes j=0
    bool budget_exhausted = false;
};

/// One walker per independent environment, advanced in tandem; samples the
/// projected difference at joint regenerations (both histories empty).
IndependentPairRun independent_pair_walk(const FieldParams& params_a,
                                         const FieldParams& params_b, const Vertex& u,
                                         const Vertex& v, std::int64_t j_max,
                                         std::int64_t step_cap = kDefaultStepCap);

struct TailFit {
    std::vector<double> thresholds;
    std::vector<double> survival;
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Least-squares fit of log-survival against the threshold; geometric-like
/// tails give a negative slope. Thresholds with survival below min_survival
/// are dropped.
TailFit exp_tail_fit(const std::vector<std::int64_t>& samples,
                     double min_survival = 1e-3);

/// Least-squares fit of log-survival against log-threshold on a geometric
/// grid over [t_min, t_max]; censored samples enter through Kaplan-Meier
/// counting.
TailFit power_tail_fit(const std::vector<double>& values,
                       const std::vector<bool>& censored, double t_min, double t_max,
                       int grid_points = 15);

/// Fraction of the columns of [-L, L] x {0} whose paths occupy a vertex at
/// level exactly t (d=2). Paths start from every vertex, open or closed.
double point_density(const FieldParams& params, int L, std::int64_t t);

struct DensityCurve {
    std::vector<std::int64_t> t;
    std::vector<std::int64_t> occupied;
    std::vector<double> density;
};

DensityCurve point_density_curve(const FieldParams& params, int L,
                                 const std::vector<std::int64_t>& ts);

/// Advances the lower of two cross-level starts until the walkers sit at the
/// same level, so the level-aligned machinery applies. Fails in-band if the
/// levels refuse to meet within step_cap.
struct AlignedPair {
    Vertex u, v;
    bool aligned = false;
    std::int64_t steps = 0;
};
AlignedPair align_levels(const FieldParams& params, Vertex u, Vertex v,
                         std::int64_t step_cap = kDefaultStepCap);

}  // namespace dsf
