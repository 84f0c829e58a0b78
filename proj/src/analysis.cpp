#include "dsf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dsf/parallel.hpp"
#include "dsf/pathforest.hpp"

namespace dsf {

namespace {

Vertex origin(int d) {
    Vertex v;
    v.dim = static_cast<std::uint8_t>(d);
    return v;
}

Vertex offset_first(int d, std::int32_t x1, std::int32_t x2 = 0) {
    Vertex v = origin(d);
    v.c[0] = x1;
    if (d > 2) v.c[1] = x2;
    return v;
}

FieldParams replica_params(const FieldParams& base, std::uint64_t tag, std::int64_t r) {
    FieldParams p = base;
    p.seed = derive_seed(base.seed, tag, std::uint64_t(r));
    return p;
}

}  // namespace

std::vector<CoalescenceSample> coalescence_experiment(const FieldParams& params,
                                                      int separation, int replicas,
                                                      std::int64_t level_cap,
                                                      int workers) {
    if (params.d != 2 && params.d != 3)
        throw std::invalid_argument("coalescence_experiment: d must be 2 or 3");
    if (separation < 0)
        throw std::invalid_argument("coalescence_experiment: separation must be >= 0");

    std::vector<CoalescenceSample> out(replicas);
    parallel_for(replicas, workers, [&](std::int64_t r) {
        CoalescenceSample s;
        s.separation.assign(params.d - 1, 0);
        s.separation[0] = separation;
        if (separation == 0) {
            out[r] = std::move(s);  // already coalesced
            return;
        }
        const FieldParams pr = replica_params(params, kSeedCoalesce, r);
        JointState st = init_joint(pr, {origin(params.d), offset_first(params.d, separation)});
        std::int64_t nu = 0;
        while (true) {
            if (st.min_level - st.start_level > level_cap) {
                s.censored = true;
                s.T_nu = level_cap;
                s.nu = nu;
                break;
            }
            step_joint(st, pr);
            if (st.regenerated()) {
                ++nu;
                if (st.coincident()) {
                    s.T_nu = st.min_level - st.start_level;
                    s.nu = nu;
                    break;
                }
            }
        }
        out[r] = std::move(s);
    });
    return out;
}

StayProbability stay_probability_bound_check(const FieldParams& params, int m,
                                             int replicas, int workers) {
    if (params.d != 2)
        throw std::invalid_argument("stay_probability_bound_check: d must be 2");
    if (m < 1) throw std::invalid_argument("stay_probability_bound_check: m must be >= 1");

    std::vector<std::uint8_t> stays(replicas, 0);
    parallel_for(replicas, workers, [&](std::int64_t r) {
        const FieldParams pr = replica_params(params, kSeedStay, r ^ (std::uint64_t(m) << 32));
        DifferenceRun run = difference_chain(pr, origin(2), offset_first(2, m), 1);
        stays[r] = (run.samples.size() >= 2 && run.samples[1].z[0] == m) ? 1 : 0;
    });

    StayProbability res;
    res.replicas = replicas;
    double hits = 0.0;
    for (auto s : stays) hits += s;
    res.empirical = hits / double(replicas);
    res.se = std::sqrt(res.empirical * (1.0 - res.empirical) / double(replicas));
    res.bound = 1.0 - std::pow(1.0 - params.p, 6) * std::pow(params.p, 3);
    return res;
}

std::vector<std::vector<double>> martingale_increments(const FieldParams& params,
                                                       int separation, int j_max,
                                                       int replicas, int workers) {
    if (params.d != 2)
        throw std::invalid_argument("martingale_increments: d must be 2");
    if (separation < 1 || j_max < 1)
        throw std::invalid_argument("martingale_increments: bad separation or j_max");

    std::vector<std::vector<double>> incs(replicas);
    parallel_for(replicas, workers, [&](std::int64_t r) {
        const FieldParams pr = replica_params(params, kSeedMartingale, r);
        RegenerationRun run = run_until_regenerations(
            pr, {origin(2), offset_first(2, separation)}, j_max);
        std::vector<double>& v = incs[r];
        std::int32_t prev = 0;
        for (const auto& rec : run.records) {
            v.push_back(double(rec.positions[0].c[0] - prev));
            prev = rec.positions[0].c[0];
        }
    });
    return incs;
}

std::vector<DriftPoint> martingale_drift_test(const FieldParams& params, int separation,
                                              int j_max, int replicas, int workers) {
    const auto incs =
        martingale_increments(params, separation, j_max, replicas, workers);
    std::vector<DriftPoint> out;
    for (int j = 1; j <= j_max; ++j) {
        std::vector<double> xs;
        xs.reserve(replicas);
        for (const auto& v : incs)
            if (static_cast<int>(v.size()) >= j) xs.push_back(v[j - 1]);
        MeanSE ms = mean_se(xs);
        out.push_back({j, ms.mean, ms.se, ms.n});
    }
    return out;
}

double lyapunov_f(double x1, double x2) {
    return std::sqrt(std::log1p(x1 * x1 + x2 * x2));
}

std::vector<double> lyapunov_increments(const FieldParams& params, std::int32_t x1,
                                        std::int32_t x2, int replicas, int workers) {
    if (params.d != 3)
        throw std::invalid_argument("lyapunov_increments: d must be 3");
    if (x1 == 0 && x2 == 0)
        throw std::invalid_argument("lyapunov_increments: separation must be nonzero");

    std::vector<double> incs(replicas, 0.0);
    parallel_for(replicas, workers, [&](std::int64_t r) {
        const FieldParams pr = replica_params(params, kSeedLyapunov, r);
        DifferenceRun run = difference_chain(pr, origin(3), offset_first(3, x1, x2), 1);
        const auto& z0 = run.samples[0].z;
        const auto& z1 = run.samples[1].z;
        incs[r] = lyapunov_f(z1[0], z1[1]) - lyapunov_f(z0[0], z0[1]);
    });
    return incs;
}

LyapunovResult lyapunov_drift_test(const FieldParams& params, std::int32_t x1,
                                   std::int32_t x2, int replicas, int workers) {
    const auto incs = lyapunov_increments(params, x1, x2, replicas, workers);
    MeanSE ms = mean_se(incs);
    LyapunovResult res;
    res.mean = ms.mean;
    res.se = ms.se;
    res.n = ms.n;
    res.upper99 = ms.mean + 2.326 * ms.se;
    return res;
}

std::vector<std::int64_t> default_census_checkpoints(std::int64_t horizon) {
    std::vector<std::int64_t> cps{0};
    for (std::int64_t base = 1; base <= horizon; base *= 10) {
        for (std::int64_t mult : {1, 2, 5}) {
            const std::int64_t c = base * mult;
            if (c <= horizon) cps.push_back(c);
        }
    }
    if (cps.back() != horizon) cps.push_back(horizon);
    return cps;
}

namespace {

// Component census observer: a head crossing a checkpoint level records the
// last vertex at or below it. Coalesced paths report the same vertex, so
// counting distinct records per checkpoint counts components.
struct CensusObserver {
    const std::vector<std::int64_t>& checkpoints;
    std::vector<std::vector<Vertex>> records;

    explicit CensusObserver(const std::vector<std::int64_t>& cps)
        : checkpoints(cps), records(cps.size()) {}

    void on_start(int, const Vertex&) {}
    void on_step(int, const Vertex& from, const Vertex& to) {
        auto lo = std::lower_bound(checkpoints.begin(), checkpoints.end(),
                                   std::int64_t(from.level()));
        for (auto it = lo; it != checkpoints.end() && *it < to.level(); ++it)
            records[std::size_t(it - checkpoints.begin())].push_back(from);
    }
    void on_merge(int, int) {}
};

std::int64_t distinct_count(std::vector<Vertex>& vs) {
    std::sort(vs.begin(), vs.end(), LevelLexLess{});
    return static_cast<std::int64_t>(
        std::unique(vs.begin(), vs.end()) - vs.begin());
}

}  // namespace

ForestCensus forest_census(const FieldParams& params, const std::vector<int>& extents,
                           std::int64_t horizon, std::vector<std::int64_t> checkpoints) {
    if (static_cast<int>(extents.size()) != params.d - 1)
        throw std::invalid_argument("forest_census: need d-1 extents");
    if (checkpoints.empty()) checkpoints = default_census_checkpoints(horizon);
    std::sort(checkpoints.begin(), checkpoints.end());

    ForestCensus census;
    census.d = params.d;
    census.horizon = horizon;
    census.checkpoint_levels = checkpoints;

    // open vertices of the level-0 box
    Vertex v = origin(params.d);
    std::vector<int> idx(params.d - 1);
    for (int i = 0; i < params.d - 1; ++i) idx[i] = -extents[i];
    while (true) {
        for (int i = 0; i < params.d - 1; ++i) v.c[i] = idx[i];
        if (is_open(params, v)) census.starts.push_back(v);
        int i = params.d - 2;
        while (i >= 0 && idx[i] == extents[i]) {
            idx[i] = -extents[i];
            --i;
        }
        if (i < 0) break;
        ++idx[i];
    }

    CensusObserver obs(checkpoints);
    if (!census.starts.empty())
        advance_path_family(params, census.starts, horizon, obs);
    census.components.reserve(checkpoints.size());
    for (auto& recs : obs.records) census.components.push_back(distinct_count(recs));
    return census;
}

namespace {

// Single walker in its own environment. The history floor is supplied by the
// caller: for the independent pair it is the joint minimum level, which can
// lie below this walker's own position.
struct EnvWalker {
    Vertex pos;
    std::set<Vertex, LevelLexLess> history;
};

void env_step(EnvWalker& w, const FieldParams& params) {
    const SuccessorStep s = successor_step(params, w.pos);
    const int lvl = w.pos.level();
    for (int dz = 1; dz <= s.radius; ++dz) {
        Vertex x = w.pos;
        x.c[w.pos.dim - 1] = lvl + dz;
        detail::for_each_sideways_offset(w.pos, s.radius - dz, x,
                                         [&](const Vertex& y) { w.history.insert(y); });
    }
    w.pos = s.v;
}

void env_prune(EnvWalker& w, std::int32_t floor) {
    while (!w.history.empty() && w.history.begin()->level() <= floor)
        w.history.erase(w.history.begin());
}

}  // namespace

IndependentPairRun independent_pair_walk(const FieldParams& params_a,
                                         const FieldParams& params_b, const Vertex& u,
                                         const Vertex& v, std::int64_t j_max,
                                         std::int64_t step_cap) {
    if (params_a.d != params_b.d)
        throw std::invalid_argument("independent_pair_walk: dimension mismatch");
    if (u.level() != v.level())
        throw std::invalid_argument("independent_pair_walk: starts must share the level");

    EnvWalker a{u, {}};
    EnvWalker b{v, {}};

    IndependentPairRun run;
    auto sample = [&](std::int64_t j) {
        DifferenceSample s;
        s.j = j;
        s.z.resize(params_a.d - 1);
        for (int i = 0; i < params_a.d - 1; ++i)
            s.z[i] = b.pos.c[i] - a.pos.c[i];
        run.samples.push_back(std::move(s));
    };
    sample(0);

    std::int64_t j = 0, steps = 0;
    while (j < j_max) {
        if (steps >= step_cap) {
            run.budget_exhausted = true;
            break;
        }
        const std::int32_t la = a.pos.level();
        const std::int32_t lb = b.pos.level();
        if (la <= lb) env_step(a, params_a);
        if (lb <= la) env_step(b, params_b);
        ++steps;

        const std::int32_t joint_min = std::min(a.pos.level(), b.pos.level());
        env_prune(a, joint_min);
        env_prune(b, joint_min);

        if (a.history.empty() && b.history.empty()) {
            ++j;
            sample(j);
        }
    }
    return run;
}

TailFit exp_tail_fit(const std::vector<std::int64_t>& samples, double min_survival) {
    if (samples.size() < 1000)
        throw std::invalid_argument("exp_tail_fit: need at least 10^3 samples");
    std::vector<std::int64_t> xs = samples;
    std::sort(xs.begin(), xs.end());
    if (xs.front() == xs.back())
        throw FitUndefinedError("exp_tail_fit: all samples equal");

    const double n = double(xs.size());
    TailFit fit;
    std::vector<double> lx, ly;
    for (std::int64_t t = xs.front(); t <= xs.back(); ++t) {
        const auto below = std::lower_bound(xs.begin(), xs.end(), t) - xs.begin();
        const double surv = (n - double(below)) / n;  // P(X >= t)
        if (surv < min_survival) break;
        fit.thresholds.push_back(double(t));
        fit.survival.push_back(surv);
        lx.push_back(double(t));
        ly.push_back(std::log(surv));
    }
    LinearFit lf = least_squares(lx, ly);
    fit.slope = lf.slope;
    fit.intercept = lf.intercept;
    fit.r2 = lf.r2;
    return fit;
}

TailFit power_tail_fit(const std::vector<double>& values,
                       const std::vector<bool>& censored, double t_min, double t_max,
                       int grid_points) {
    if (values.size() < 1000)
        throw std::invalid_argument("power_tail_fit: need at least 10^3 samples");
    if (!(t_min > 0.0) || t_max / t_min < 100.0)
        throw std::invalid_argument("power_tail_fit: need t_max/t_min >= 10^2");
    if (grid_points < 3)
        throw std::invalid_argument("power_tail_fit: need at least 3 grid points");

    KaplanMeier km = km_survival(values, censored);
    TailFit fit;
    std::vector<double> lx, ly;
    const double ratio = std::pow(t_max / t_min, 1.0 / double(grid_points - 1));
    double t = t_min;
    for (int i = 0; i < grid_points; ++i, t *= ratio) {
        const double s = km.eval(t);
        if (s > 0.0) {
            fit.thresholds.push_back(t);
            fit.survival.push_back(s);
            lx.push_back(std::log(t));
            ly.push_back(std::log(s));
        }
    }
    LinearFit lf = least_squares(lx, ly);
    fit.slope = lf.slope;
    fit.intercept = lf.intercept;
    fit.r2 = lf.r2;
    return fit;
}

namespace {

struct DensityObserver {
    const std::vector<std::int64_t>& checkpoints;  // sorted
    std::vector<std::vector<Vertex>> visited;

    explicit DensityObserver(const std::vector<std::int64_t>& cps)
        : checkpoints(cps), visited(cps.size()) {}

    void record(const Vertex& v) {
        auto it = std::lower_bound(checkpoints.begin(), checkpoints.end(),
                                   std::int64_t(v.level()));
        if (it != checkpoints.end() && *it == v.level())
            visited[std::size_t(it - checkpoints.begin())].push_back(v);
    }
    void on_start(int, const Vertex& v) { record(v); }
    void on_step(int, const Vertex&, const Vertex& to) { record(to); }
    void on_merge(int, int) {}
};

}  // namespace

DensityCurve point_density_curve(const FieldParams& params, int L,
                                 const std::vector<std::int64_t>& ts) {
    if (params.d != 2) throw std::invalid_argument("point_density: d must be 2");
    if (L < 0) throw std::invalid_argument("point_density: L must be >= 0");
    std::vector<std::int64_t> cps = ts;
    std::sort(cps.begin(), cps.end());

    std::vector<Vertex> starts;
    starts.reserve(2 * L + 1);
    for (int x = -L; x <= L; ++x) starts.push_back(Vertex{x, 0});

    DensityObserver obs(cps);
    advance_path_family(params, starts, cps.empty() ? 0 : cps.back(), obs);

    DensityCurve curve;
    curve.t = cps;
    for (auto& vs : obs.visited) {
        const std::int64_t occ = distinct_count(vs);
        curve.occupied.push_back(occ);
        curve.density.push_back(double(occ) / double(2 * L + 1));
    }
    return curve;
}

double point_density(const FieldParams& params, int L, std::int64_t t) {
    return point_density_curve(params, L, {t}).density.at(0);
}

AlignedPair align_levels(const FieldParams& params, Vertex u, Vertex v,
                         std::int64_t step_cap) {
    AlignedPair out;
    std::int64_t steps = 0;
    while (u.level() != v.level() && steps < step_cap) {
        Vertex& lower = u.level() < v.level() ? u : v;
        lower = successor(params, lower);
        ++steps;
    }
    out.u = u;
    out.v = v;
    out.aligned = u.level() == v.level();
    out.steps = steps;
    return out;
}

}  // namespace dsf
