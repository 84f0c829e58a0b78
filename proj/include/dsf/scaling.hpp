#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "dsf/analysis.hpp"
#include "dsf/successor.hpp"

namespace dsf {

inline constexpr std::uint64_t kSeedConstants = 0x5CA1;
inline constexpr std::uint64_t kSeedWebB1 = 0xB1;
inline constexpr std::uint64_t kSeedWebE1 = 0xE1;

/// Diffusive normalization constants: mean regeneration duration and the
/// standard deviation of the per-regeneration horizontal increment.
struct ScalingConstants {
    double gamma0 = 1.0;
    double sigma0 = 1.0;
    double gamma0_se = 0.0;
    double sigma0_se = 0.0;
    double p = 0.0;
    int d = 2;
    std::int64_t n_increments = 0;
};

struct IncrementSample {
    std::int64_t replica = 0;
    std::int64_t j = 0;
    std::int64_t dT = 0;  // levels travelled between regenerations
    std::int64_t dx = 0;  // first-coordinate displacement between regenerations
};

/// Raw single-walker regeneration increments (d=2), replica-sharded.
std::vector<IncrementSample> regeneration_increments(const FieldParams& params,
                                                     int replicas, int j_per_replica,
                                                     int workers = 1);

/// Estimates (gamma0, sigma0) from single-walker regeneration increments
/// (d=2). Requires at least 10^3 increments in total.
ScalingConstants estimate_constants(const FieldParams& params, int replicas,
                                    int j_per_replica, int workers = 1);

/// Exact rational position of an interpolated lattice path at an integer
/// level; den > 0 and gcd-reduced, so equal values compare equal.
struct Frac {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Frac make(std::int64_t num, std::int64_t den) {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        return g > 1 ? Frac{num / g, den / g} : Frac{num, den};
    }
    double value() const { return double(num) / double(den); }
    bool operator==(const Frac& o) const { return num == o.num && den == o.den; }
    bool operator<(const Frac& o) const {
        return num != o.num ? num < o.num : den < o.den;
    }
};

/// Linear interpolation of the segment (x1,l1)-(x2,l2) at level q in (l1,l2].
inline Frac interpolate_at_level(std::int32_t x1, std::int32_t l1, std::int32_t x2,
                                 std::int32_t l2, std::int64_t q) {
    const std::int64_t den = std::int64_t(l2) - l1;
    const std::int64_t num = std::int64_t(x1) * den + (std::int64_t(x2) - x1) * (q - l1);
    return Frac::make(num, den);
}

/// A d=2 lattice path carried into rescaled coordinates: knots are stored on
/// the lattice, the map (x,t) -> (x/(n sigma), t/(n^2 gamma)) is applied by
/// the accessors. Queries beyond the last knot extend the path constantly.
struct ScaledPath {
    std::vector<std::pair<std::int32_t, std::int32_t>> knots;  // (x, level)
    double xscale = 1.0;  // n * sigma0
    double tscale = 1.0;  // n^2 * gamma0

    std::size_t size() const { return knots.size(); }
    double time(std::size_t i) const { return double(knots[i].second) / tscale; }
    double pos(std::size_t i) const { return double(knots[i].first) / xscale; }
    double start_time() const { return time(0); }
    std::int32_t start_level() const { return knots.front().second; }
    std::int32_t last_level() const { return knots.back().second; }

    /// Piecewise-linear evaluation at a scaled time (clamped to the knot range).
    double eval(double t) const;
    /// Exact rational lattice position at an integer level (>= start level).
    Frac value_at_level(std::int64_t q) const;
};

struct ScaledEnsemble {
    int n = 1;
    ScalingConstants constants;
    std::vector<ScaledPath> paths;

    std::int64_t snap_level(double scaled_time) const;
};

ScaledEnsemble rescale(const std::vector<PathRecord>& paths, int n,
                       const ScalingConstants& constants);

/// Number of distinct positions at time t0+t among paths born at or before t0
/// that pass through [a,b] at t0. Query times snap to the nearest lattice
/// level; distinctness is exact on lattice-derived rationals.
int eta_count(const ScaledEnsemble& ensemble, double t0, double t, double a, double b);

/// Number of distinct positions in the open interval (a,b) at time t0+t
/// touched by paths born at or before t0.
int eta_hat_count(const ScaledEnsemble& ensemble, double t0, double t, double a,
                  double b);

/// The tanh-compactified sup metric on paths. The supremum over time is
/// bracketed by Lipschitz branch-and-bound to absolute accuracy ~1e-14.
double path_distance(const ScaledPath& p1, const ScaledPath& p2);

/// Per-start interpolated positions of a coalescing path family at a set of
/// lattice levels. Backs the counting diagnostics without materializing paths.
struct LevelValueTable {
    std::vector<std::int32_t> start_columns;
    std::vector<std::int64_t> levels;         // sorted
    std::vector<std::vector<Frac>> values;    // [level_index][start_index]
};

/// Paths from every open vertex of [col_lo, col_hi] x {0} (d=2).
LevelValueTable collect_level_values(const FieldParams& params, std::int32_t col_lo,
                                     std::int32_t col_hi,
                                     std::vector<std::int64_t> levels);

struct B1Cell {
    double epsilon = 0.0;
    double a = 0.0;
    double t0 = 0.0;
    std::int64_t hits = 0;
    double p_hat = 0.0;
};

struct B1Summary {
    double epsilon = 0.0;
    double p_sup = 0.0;   // grid supremum of P(eta >= 2)
    double se = 0.0;      // binomial SE at the achieving grid point
    double a_at = 0.0;
    double t0_at = 0.0;
};

struct B1Result {
    std::vector<B1Cell> cells;
    std::vector<B1Summary> sups;
    ScalingConstants constants;
    int n = 0;
    double t = 0.0;
    std::int64_t replicas = 0;
    int grid = 0;
};

/// Estimates sup over an (a, t0) grid of P(eta(t0,t;a,a+eps) >= 2) per
/// epsilon. The grid covers one scaled unit square; the sup is a grid sup.
B1Result b1_diagnostic(const FieldParams& params, int n, double t,
                       const std::vector<double>& epsilons, int replicas,
                       int grid = 20, int workers = 1);

struct E1Result {
    double mean = 0.0;
    double se = 0.0;
    double target = 0.0;  // (b-a)/sqrt(t*pi)
    std::vector<int> counts;
    ScalingConstants constants;
    std::int64_t replicas = 0;
};

/// Sample mean of eta_hat(0, t; a, b) over replicas of a full-lattice path
/// family at scale n.
E1Result e1_diagnostic(const FieldParams& params, int n, double t, double a, double b,
                       int replicas, int workers = 1);

}  // namespace dsf
