// Scratch pilot driver for calibrating frozen test parameters. Not part of
// the test suite.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "dsf/analysis.hpp"
#include "dsf/parallel.hpp"
#include "dsf/scaling.hpp"

using namespace dsf;

static void pilot_lyapunov(int replicas) {
    for (auto [x1, x2] : std::vector<std::pair<int, int>>{{12, 16}, {24, 32}, {48, 64}}) {
        for (std::uint64_t seed : {4001ull, 4002ull, 4003ull}) {
            FieldParams params(3, 0.5, seed);
            const LyapunovResult res =
                lyapunov_drift_test(params, x1, x2, replicas, 0);
            std::printf("lyap |x|=%3d seed=%llu  mean=%+.3e se=%.3e upper99=%+.3e\n",
                        int(std::sqrt(double(x1) * x1 + double(x2) * x2)),
                        (unsigned long long)seed, res.mean, res.se, res.upper99);
        }
    }
}

static void pilot_census(int d, int replicas, std::int64_t horizon) {
    for (std::uint64_t seed : {5001ull, 5002ull}) {
        FieldParams params(d, 0.5, seed);
        std::vector<int> extents(d - 1, 0);
        extents[0] = 20;
        std::vector<std::int64_t> finals(replicas);
        parallel_for(replicas, 0, [&](std::int64_t r) {
            FieldParams pr = params;
            pr.seed = derive_seed(params.seed, kSeedCensus, std::uint64_t(r));
            const ForestCensus census = forest_census(pr, extents, horizon, {horizon});
            finals[r] = census.components.back();
        });
        int ones = 0, multi = 0;
        for (auto f : finals) {
            if (f == 1) ++ones;
            if (f > 1) ++multi;
        }
        std::printf("census d=%d seed=%llu horizon=%lld: ones=%d/%d multi=%d/%d\n", d,
                    (unsigned long long)seed, (long long)horizon, ones, replicas, multi,
                    replicas);
    }
}

static void pilot_e1(int n, int replicas) {
    for (std::uint64_t seed : {6001ull, 6002ull}) {
        FieldParams params(2, 0.5, seed);
        const E1Result res = e1_diagnostic(params, n, 1.0, 0.0, 1.0, replicas, 0);
        std::printf(
            "e1 n=%d seed=%llu: mean=%.4f se=%.4f target=%.4f rel=%+.3f gamma0=%.4f "
            "sigma0=%.4f\n",
            n, (unsigned long long)seed, res.mean, res.se, res.target,
            (res.mean - res.target) / res.target, res.constants.gamma0,
            res.constants.sigma0);
    }
}

static void pilot_b1(int n, int replicas) {
    FieldParams params(2, 0.5, 6101);
    const B1Result res = b1_diagnostic(params, n, 1.0, {0.05, 0.8}, replicas, 20, 0);
    for (const auto& s : res.sups)
        std::printf("b1 n=%d eps=%.2f: p_sup=%.4f se=%.4f at a=%.2f t0=%.2f\n", n,
                    s.epsilon, s.p_sup, s.se, s.a_at, s.t0_at);
}

static double round_sig3(double x) {
    const double mag = std::pow(10.0, std::floor(std::log10(std::abs(x))) - 2.0);
    return std::round(x / mag) * mag;
}

static void pilot_constants() {
    for (std::uint64_t a = 9001; a < 9061; a += 2) {
        FieldParams pa(2, 0.5, a);
        FieldParams pb(2, 0.5, a + 1);
        const ScalingConstants ca = estimate_constants(pa, 1000, 100, 0);
        const ScalingConstants cb = estimate_constants(pb, 1000, 100, 0);
        const bool match3 = round_sig3(ca.gamma0) == round_sig3(cb.gamma0) &&
                            round_sig3(ca.sigma0) == round_sig3(cb.sigma0);
        std::printf(
            "constants %llu/%llu: gamma %.5f vs %.5f | sigma %.5f vs %.5f %s\n",
            (unsigned long long)a, (unsigned long long)(a + 1), ca.gamma0, cb.gamma0,
            ca.sigma0, cb.sigma0, match3 ? " <= 3SIG MATCH" : "");
    }
}

static void pilot_regen_tail(int replicas) {
    std::vector<std::int64_t> tau;
    std::vector<std::int64_t> shards(replicas);
    parallel_for(replicas, 0, [&](std::int64_t r) {
        FieldParams pr(2, 0.5, derive_seed(777, kSeedRegen, std::uint64_t(r)));
        Vertex u, v;
        u.dim = v.dim = 2;
        v.c[0] = 5;
        const RegenerationRun run = run_until_regenerations(pr, {u, v}, 1);
        shards[r] = run.records.empty() ? -1 : run.records[0].tau_steps;
    });
    for (auto t : shards)
        if (t > 0) tau.push_back(t);
    const TailFit fit = exp_tail_fit(tau);
    std::printf("regen tail: n=%zu slope=%.4f r2=%.4f\n", tau.size(), fit.slope, fit.r2);
}

static void pilot_coalesce(int replicas) {
    FieldParams params(2, 0.5, 777);
    const auto samples = coalescence_experiment(params, 1, replicas, 100000, 0);
    std::vector<double> values;
    std::vector<bool> flags;
    int censored = 0;
    for (const auto& s : samples) {
        values.push_back(double(s.T_nu));
        flags.push_back(s.censored);
        censored += s.censored;
    }
    const TailFit fit = power_tail_fit(values, flags, 100.0, 10000.0);
    std::printf("coalesce: censored=%d/%d slope=%.4f r2=%.4f\n", censored, replicas,
                fit.slope, fit.r2);
}

int main(int argc, char** argv) {
    const std::string what = argc > 1 ? argv[1] : "all";
    if (what == "lyap" || what == "all") pilot_lyapunov(argc > 2 ? atoi(argv[2]) : 10000);
    if (what == "census2" || what == "all") pilot_census(2, 100, 100000);
    if (what == "census4" || what == "all") pilot_census(4, 100, 100000);
    if (what == "e1") pilot_e1(argc > 2 ? atoi(argv[2]) : 100, argc > 3 ? atoi(argv[3]) : 300);
    if (what == "b1") pilot_b1(argc > 2 ? atoi(argv[2]) : 100, argc > 3 ? atoi(argv[3]) : 300);
    if (what == "constants") pilot_constants();
    if (what == "regen" || what == "all") pilot_regen_tail(10000);
    if (what == "coalesce" || what == "all") pilot_coalesce(10000);
    return 0;
}
