#include "dsf/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "dsf/parallel.hpp"
#include "dsf/pathforest.hpp"

namespace dsf {

std::vector<IncrementSample> regeneration_increments(const FieldParams& params,
                                                     int replicas, int j_per_replica,
                                                     int workers) {
    if (params.d != 2)
        throw std::invalid_argument("regeneration_increments: d must be 2");
    if (replicas < 1 || j_per_replica < 1)
        throw std::invalid_argument("regeneration_increments: bad arguments");

    std::vector<std::vector<IncrementSample>> shards(replicas);
    parallel_for(replicas, workers, [&](std::int64_t r) {
        FieldParams pr = params;
        pr.seed = derive_seed(params.seed, kSeedConstants, std::uint64_t(r));
        Vertex o;
        o.dim = 2;
        RegenerationRun run = run_until_regenerations(pr, {o}, j_per_replica);
        std::int64_t prev_T = 0;
        std::int32_t prev_x = 0;
        for (const auto& rec : run.records) {
            shards[r].push_back({r, rec.j, rec.T_time - prev_T,
                                 std::int64_t(rec.positions[0].c[0]) - prev_x});
            prev_T = rec.T_time;
            prev_x = rec.positions[0].c[0];
        }
    });

    std::vector<IncrementSample> out;
    for (auto& s : shards) out.insert(out.end(), s.begin(), s.end());
    return out;
}

ScalingConstants estimate_constants(const FieldParams& params, int replicas,
                                    int j_per_replica, int workers) {
    if (std::int64_t(replicas) * j_per_replica < 1000)
        throw std::invalid_argument("estimate_constants: need at least 10^3 increments");
    const auto samples = regeneration_increments(params, replicas, j_per_replica, workers);
    if (samples.size() < 2)
        throw std::invalid_argument("estimate_constants: too few increments");

    std::vector<double> dt, dx;
    dt.reserve(samples.size());
    dx.reserve(samples.size());
    for (const auto& s : samples) {
        dt.push_back(double(s.dT));
        dx.push_back(double(s.dx));
    }

    MeanSE mdt = mean_se(dt);
    MeanSE mdx = mean_se(dx);
    double ss = 0.0;
    for (double x : dx) ss += (x - mdx.mean) * (x - mdx.mean);
    const double var = ss / double(dx.size() - 1);

    ScalingConstants c;
    c.gamma0 = mdt.mean;
    c.gamma0_se = mdt.se;
    c.sigma0 = std::sqrt(var);
    c.sigma0_se = c.sigma0 / std::sqrt(2.0 * double(dx.size()));
    c.p = params.p;
    c.d = params.d;
    c.n_increments = static_cast<std::int64_t>(dx.size());
    return c;
}

double ScaledPath::eval(double t) const {
    const double t_lattice = t * tscale;
    if (t_lattice <= knots.front().second) return pos(0);
    if (t_lattice >= knots.back().second) return pos(size() - 1);
    auto it = std::upper_bound(
        knots.begin(), knots.end(), t_lattice,
        [](double q, const std::pair<std::int32_t, std::int32_t>& k) {
            return q < double(k.second);
        });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (t_lattice - lo.second) / double(hi.second - lo.second);
    return (double(lo.first) + w * (double(hi.first) - lo.first)) / xscale;
}

Frac ScaledPath::value_at_level(std::int64_t q) const {
    if (q <= knots.front().second) return Frac{knots.front().first, 1};
    if (q >= knots.back().second) return Frac{knots.back().first, 1};
    auto it = std::upper_bound(
        knots.begin(), knots.end(), q,
        [](std::int64_t lvl, const std::pair<std::int32_t, std::int32_t>& k) {
            return lvl < std::int64_t(k.second);
        });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    return interpolate_at_level(lo.first, lo.second, hi.first, hi.second, q);
}

std::int64_t ScaledEnsemble::snap_level(double scaled_time) const {
    return std::llround(scaled_time * double(n) * double(n) * constants.gamma0);
}

ScaledEnsemble rescale(const std::vector<PathRecord>& paths, int n,
                       const ScalingConstants& constants) {
    if (n < 1) throw std::invalid_argument("rescale: n must be >= 1");
    ScaledEnsemble ens;
    ens.n = n;
    ens.constants = constants;
    const double xs = double(n) * constants.sigma0;
    const double ts = double(n) * double(n) * constants.gamma0;
    ens.paths.reserve(paths.size());
    for (const PathRecord& rec : paths) {
        if (rec.start.dim != 2)
            throw std::invalid_argument("rescale: paths must live in d=2");
        ScaledPath sp;
        sp.xscale = xs;
        sp.tscale = ts;
        sp.knots.reserve(rec.steps.size());
        for (const Vertex& v : rec.steps) sp.knots.emplace_back(v.c[0], v.c[1]);
        ens.paths.push_back(std::move(sp));
    }
    return ens;
}

namespace {

int distinct_fracs(std::vector<Frac>& vals) {
    std::sort(vals.begin(), vals.end());
    return static_cast<int>(std::unique(vals.begin(), vals.end()) - vals.begin());
}

}  // namespace

int eta_count(const ScaledEnsemble& ensemble, double t0, double t, double a, double b) {
    if (!(t > 0.0)) throw std::invalid_argument("eta_count: t must be > 0");
    if (!(a < b)) throw std::invalid_argument("eta_count: need a < b");
    const std::int64_t l0 = ensemble.snap_level(t0);
    const std::int64_t l1 = ensemble.snap_level(t0 + t);
    const double xs = double(ensemble.n) * ensemble.constants.sigma0;
    std::vector<Frac> vals;
    for (const ScaledPath& p : ensemble.paths) {
        if (std::int64_t(p.start_level()) > l0) continue;  // born after t0
        const double at_t0 = p.value_at_level(l0).value() / xs;
        if (at_t0 < a || at_t0 > b) continue;
        vals.push_back(p.value_at_level(l1));
    }
    return distinct_fracs(vals);
}

int eta_hat_count(const ScaledEnsemble& ensemble, double t0, double t, double a,
                  double b) {
    if (!(t > 0.0)) throw std::invalid_argument("eta_hat_count: t must be > 0");
    if (!(a < b)) throw std::invalid_argument("eta_hat_count: need a < b");
    const std::int64_t l0 = ensemble.snap_level(t0);
    const std::int64_t l1 = ensemble.snap_level(t0 + t);
    const double xs = double(ensemble.n) * ensemble.constants.sigma0;
    std::vector<Frac> vals;
    for (const ScaledPath& p : ensemble.paths) {
        if (std::int64_t(p.start_level()) > l0) continue;
        const Frac f = p.value_at_level(l1);
        const double x = f.value() / xs;
        if (x > a && x < b) vals.push_back(f);
    }
    return distinct_fracs(vals);
}

namespace {

struct PathEval {
    const ScaledPath& p;
    double clamp_from;  // sigma of this path; queries below are clamped

    double operator()(double t) const { return p.eval(std::max(t, clamp_from)); }
};

double metric_gap(const PathEval& e1, const PathEval& e2, double t) {
    return std::abs(std::tanh(e1(t)) / (1.0 + std::abs(t)) -
                    std::tanh(e2(t)) / (1.0 + std::abs(t)));
}

// Golden-section refinement of a bracketed local maximum.
double refine_max(const PathEval& e1, const PathEval& e2, double lo, double hi) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = metric_gap(e1, e2, x1);
    double f2 = metric_gap(e1, e2, x2);
    for (int it = 0; it < 90 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = metric_gap(e1, e2, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = metric_gap(e1, e2, x1);
        }
    }
    return std::max(f1, f2);
}

// Supremum of the gap over [u, v]: sample, then refine every bracketed local
// maximum. Pieces are smooth with few oscillations, so a moderate sample
// count resolves all brackets.
double sup_on_piece(const PathEval& e1, const PathEval& e2, double u, double v) {
    if (!(v > u)) return metric_gap(e1, e2, u);
    constexpr int kSamples = 48;
    std::array<double, kSamples + 1> fs{};
    fs[0] = metric_gap(e1, e2, u);
    double best = fs[0];
    for (int i = 1; i <= kSamples; ++i) {
        const double t = u + (v - u) * double(i) / double(kSamples);
        fs[std::size_t(i)] = metric_gap(e1, e2, t);
        best = std::max(best, fs[std::size_t(i)]);
    }
    for (int i = 1; i < kSamples; ++i) {
        if (fs[std::size_t(i)] >= fs[std::size_t(i - 1)] &&
            fs[std::size_t(i)] >= fs[std::size_t(i + 1)]) {
            const double lo = u + (v - u) * double(i - 1) / double(kSamples);
            const double hi = u + (v - u) * double(i + 1) / double(kSamples);
            best = std::max(best, refine_max(e1, e2, lo, hi));
        }
    }
    // the ends can hide one-sided maxima
    best = std::max(best, refine_max(e1, e2, u, u + (v - u) / double(kSamples)));
    best = std::max(best, refine_max(e1, e2, v - (v - u) / double(kSamples), v));
    return best;
}

}  // namespace

double path_distance(const ScaledPath& p1, const ScaledPath& p2) {
    const double s1 = p1.start_time();
    const double s2 = p2.start_time();
    double d = std::abs(std::tanh(s1) - std::tanh(s2));

    PathEval e1{p1, s1};
    PathEval e2{p2, s2};

    // breakpoints: knots of both paths, the clamp kinks, and the |t| kink
    std::vector<double> bps;
    const double tmin = std::min(s1, s2);
    bps.push_back(tmin);
    for (std::size_t i = 0; i < p1.size(); ++i) bps.push_back(p1.time(i));
    for (std::size_t i = 0; i < p2.size(); ++i) bps.push_back(p2.time(i));
    bps.push_back(s1);
    bps.push_back(s2);
    bps.push_back(0.0);
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    bps.erase(std::remove_if(bps.begin(), bps.end(),
                             [&](double t) { return t < tmin; }),
              bps.end());

    double sup = 0.0;
    for (std::size_t i = 0; i + 1 < bps.size(); ++i)
        sup = std::max(sup, sup_on_piece(e1, e2, bps[i], bps[i + 1]));
    // beyond the last knot both paths are constant; the gap decays in |t|
    const double tail_t = std::max(bps.back(), 0.0);
    sup = std::max(sup, metric_gap(e1, e2, tail_t));
    // before both starts the clamped gap peaks at t = 0; without this region
    // the triangle inequality fails for paths born at positive times
    if (tmin > 0.0) sup = std::max(sup, metric_gap(e1, e2, 0.0));

    return std::max(d, sup);
}

namespace {

// Assigns interpolated positions at requested levels to every start carried
// by a cluster. Merges splice member lists, so each start receives exactly
// one value per level.
struct LevelValueObserver {
    const std::vector<std::int64_t>& levels;  // sorted
    std::vector<std::vector<Frac>>& values;   // [level_idx][start_idx]
    std::vector<std::vector<int>> members;

    LevelValueObserver(const std::vector<std::int64_t>& lv,
                       std::vector<std::vector<Frac>>& out, std::size_t n_starts)
        : levels(lv), values(out), members(n_starts) {
        for (std::size_t i = 0; i < n_starts; ++i) members[i] = {int(i)};
    }

    void assign(int cluster, std::size_t level_idx, const Frac& f) {
        for (int s : members[cluster]) values[level_idx][std::size_t(s)] = f;
    }
    void on_start(int id, const Vertex& v) {
        auto it = std::lower_bound(levels.begin(), levels.end(),
                                   std::int64_t(v.level()));
        if (it != levels.end() && *it == v.level())
            assign(id, std::size_t(it - levels.begin()), Frac{v.c[0], 1});
    }
    void on_step(int id, const Vertex& from, const Vertex& to) {
        auto it = std::upper_bound(levels.begin(), levels.end(),
                                   std::int64_t(from.level()));
        for (; it != levels.end() && *it <= to.level(); ++it) {
            const Frac f =
                interpolate_at_level(from.c[0], from.c[1], to.c[0], to.c[1], *it);
            assign(id, std::size_t(it - levels.begin()), f);
        }
    }
    void on_merge(int into, int from) {
        auto& a = members[std::size_t(into)];
        auto& b = members[std::size_t(from)];
        a.insert(a.end(), b.begin(), b.end());
        b.clear();
        b.shrink_to_fit();
    }
};

}  // namespace

LevelValueTable collect_level_values(const FieldParams& params, std::int32_t col_lo,
                                     std::int32_t col_hi,
                                     std::vector<std::int64_t> levels) {
    if (params.d != 2)
        throw std::invalid_argument("collect_level_values: d must be 2");
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    LevelValueTable table;
    table.levels = levels;
    std::vector<Vertex> starts;
    for (std::int32_t x = col_lo; x <= col_hi; ++x) {
        Vertex v{x, 0};
        if (is_open(params, v)) {
            table.start_columns.push_back(x);
            starts.push_back(v);
        }
    }
    table.values.assign(levels.size(), std::vector<Frac>(starts.size()));
    if (starts.empty()) return table;

    const std::int64_t horizon = levels.empty() ? 0 : levels.back();
    LevelValueObserver obs(table.levels, table.values, starts.size());
    advance_path_family(params, starts, horizon, obs);
    return table;
}

namespace {

struct SortedLevelIndex {
    std::vector<std::pair<double, int>> by_value;  // (scaled value, start idx)

    SortedLevelIndex(const std::vector<Frac>& fracs, double xs) {
        by_value.reserve(fracs.size());
        for (std::size_t i = 0; i < fracs.size(); ++i)
            by_value.emplace_back(fracs[i].value() / xs, int(i));
        std::sort(by_value.begin(), by_value.end());
    }
};

// eta >= 2: at least two distinct end values among starts passing [a, a+eps]
bool eta_at_least_two(const SortedLevelIndex& idx, const std::vector<Frac>& end_vals,
                      double a, double b) {
    auto lo = std::lower_bound(idx.by_value.begin(), idx.by_value.end(),
                               std::make_pair(a, std::numeric_limits<int>::min()));
    const Frac* first = nullptr;
    for (auto it = lo; it != idx.by_value.end() && it->first <= b; ++it) {
        const Frac& f = end_vals[std::size_t(it->second)];
        if (!first) {
            first = &f;
        } else if (!(f == *first)) {
            return true;
        }
    }
    return false;
}

}  // namespace

B1Result b1_diagnostic(const FieldParams& params, int n, double t,
                       const std::vector<double>& epsilons, int replicas, int grid,
                       int workers) {
    if (params.d != 2) throw std::invalid_argument("b1_diagnostic: d must be 2");
    if (n < 1 || replicas < 1 || grid < 1 || epsilons.empty() || !(t > 0.0))
        throw std::invalid_argument("b1_diagnostic: bad arguments");

    B1Result res;
    res.n = n;
    res.t = t;
    res.replicas = replicas;
    res.grid = grid;
    FieldParams cparams = params;
    cparams.seed = derive_seed(params.seed, kSeedConstants, 0);
    res.constants = estimate_constants(cparams, 400, 100, workers);

    const double xs = double(n) * res.constants.sigma0;
    const double ts = double(n) * double(n) * res.constants.gamma0;
    double eps_max = 0.0;
    for (double e : epsilons) eps_max = std::max(eps_max, e);

    const double t0_max = double(grid - 1) / double(grid);
    const double margin = 8.0 * std::sqrt(t0_max) + 1.0;
    const std::int32_t col_lo = std::int32_t(std::floor((0.0 - margin) * xs));
    const std::int32_t col_hi =
        std::int32_t(std::ceil((1.0 + eps_max + margin) * xs));

    std::vector<std::int64_t> levels;
    std::vector<std::int64_t> l0s(grid), l1s(grid);
    for (int j = 0; j < grid; ++j) {
        const double t0 = double(j) / double(grid);
        l0s[j] = std::llround(t0 * ts);
        l1s[j] = std::llround((t0 + t) * ts);
        levels.push_back(l0s[j]);
        levels.push_back(l1s[j]);
    }

    // hits[e][j][i]
    std::vector<std::vector<std::vector<std::int64_t>>> hits(
        epsilons.size(), std::vector<std::vector<std::int64_t>>(
                             grid, std::vector<std::int64_t>(grid, 0)));
    std::mutex mu;

    parallel_for(replicas, workers, [&](std::int64_t r) {
        FieldParams pr = params;
        pr.seed = derive_seed(params.seed, kSeedWebB1, std::uint64_t(r));
        const LevelValueTable table = collect_level_values(pr, col_lo, col_hi, levels);
        auto level_index = [&](std::int64_t q) {
            return std::size_t(std::lower_bound(table.levels.begin(),
                                                table.levels.end(), q) -
                               table.levels.begin());
        };
        std::vector<std::vector<std::int64_t>> local(
            epsilons.size(), std::vector<std::int64_t>(grid * grid, 0));
        for (int j = 0; j < grid; ++j) {
            const SortedLevelIndex idx(table.values[level_index(l0s[j])], xs);
            const auto& end_vals = table.values[level_index(l1s[j])];
            for (int i = 0; i < grid; ++i) {
                const double a = double(i) / double(grid);
                for (std::size_t e = 0; e < epsilons.size(); ++e) {
                    if (eta_at_least_two(idx, end_vals, a, a + epsilons[e]))
                        local[e][std::size_t(j) * grid + i] = 1;
                }
            }
        }
        std::lock_guard<std::mutex> lock(mu);
        for (std::size_t e = 0; e < epsilons.size(); ++e)
            for (int j = 0; j < grid; ++j)
                for (int i = 0; i < grid; ++i)
                    hits[e][j][i] += local[e][std::size_t(j) * grid + i];
    });

    for (std::size_t e = 0; e < epsilons.size(); ++e) {
        B1Summary sum;
        sum.epsilon = epsilons[e];
        for (int j = 0; j < grid; ++j) {
            for (int i = 0; i < grid; ++i) {
                B1Cell cell;
                cell.epsilon = epsilons[e];
                cell.a = double(i) / double(grid);
                cell.t0 = double(j) / double(grid);
                cell.hits = hits[e][j][i];
                cell.p_hat = double(cell.hits) / double(replicas);
                if (cell.p_hat > sum.p_sup) {
                    sum.p_sup = cell.p_hat;
                    sum.a_at = cell.a;
                    sum.t0_at = cell.t0;
                }
                res.cells.push_back(cell);
            }
        }
        sum.se = std::sqrt(sum.p_sup * (1.0 - sum.p_sup) / double(replicas));
        res.sups.push_back(sum);
    }
    return res;
}

E1Result e1_diagnostic(const FieldParams& params, int n, double t, double a, double b,
                       int replicas, int workers) {
    if (params.d != 2) throw std::invalid_argument("e1_diagnostic: d must be 2");
    if (n < 1 || replicas < 1 || !(t > 0.0) || !(a < b))
        throw std::invalid_argument("e1_diagnostic: bad arguments");

    E1Result res;
    res.replicas = replicas;
    FieldParams cparams = params;
    cparams.seed = derive_seed(params.seed, kSeedConstants, 0);
    res.constants = estimate_constants(cparams, 400, 100, workers);

    const double xs = double(n) * res.constants.sigma0;
    const double ts = double(n) * double(n) * res.constants.gamma0;
    const double margin = 8.0 * std::sqrt(t);
    const std::int32_t col_lo = std::int32_t(std::floor((a - margin) * xs));
    const std::int32_t col_hi = std::int32_t(std::ceil((b + margin) * xs));
    const std::int64_t l1 = std::llround(t * ts);

    res.counts.assign(replicas, 0);
    parallel_for(replicas, workers, [&](std::int64_t r) {
        FieldParams pr = params;
        pr.seed = derive_seed(params.seed, kSeedWebE1, std::uint64_t(r));
        const LevelValueTable table = collect_level_values(pr, col_lo, col_hi, {l1});
        std::vector<Frac> vals;
        for (const Frac& f : table.values[0]) {
            const double x = f.value() / xs;
            if (x > a && x < b) vals.push_back(f);
        }
        std::sort(vals.begin(), vals.end());
        res.counts[r] = int(std::unique(vals.begin(), vals.end()) - vals.begin());
    });

    std::vector<double> xs_d(res.counts.begin(), res.counts.end());
    MeanSE ms = mean_se(xs_d);
    res.mean = ms.mean;
    res.se = ms.se;
    res.target = (b - a) / std::sqrt(t * 3.14159265358979323846);
    return res;
}

}  // namespace dsf
