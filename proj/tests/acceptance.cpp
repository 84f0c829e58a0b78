// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Every tolerance is pinned here; seeds are frozen for bit reproducibility.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "dsf/analysis.hpp"
#include "dsf/cli.hpp"
#include "dsf/domination.hpp"
#include "dsf/io.hpp"
#include "dsf/parallel.hpp"
#include "dsf/scaling.hpp"

using namespace dsf;

namespace {

int g_failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail,
            double seconds) {
    std::printf("[%s] %2d %-24s %s (%.1fs)\n", pass ? "PASS" : "FAIL", id, name,
                detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

Vertex origin(int d) {
    Vertex v;
    v.dim = std::uint8_t(d);
    return v;
}

Vertex offset_first(int d, std::int32_t x) {
    Vertex v = origin(d);
    v.c[0] = x;
    return v;
}

// 1. shell successor equals the literal windowed scan, 10^4 vertices per
// (d, p) cell
void criterion_successor_oracle() {
    Timer timer;
    const FieldParams coords(2, 0.5, 1234);
    std::int64_t checked = 0, agreed = 0;
    for (int d : {2, 3, 4}) {
        for (double p : {0.2, 0.5, 0.8}) {
            FieldParams params(d, p, 100 * d + int(p * 10));
            for (int i = 0; i < 10000; ++i) {
                Vertex u;
                u.dim = std::uint8_t(d);
                for (int k = 0; k < d; ++k)
                    u.c[k] = int((uniform_at(coords, Vertex{int(checked), k}) - 0.5) *
                                 200000.0);
                const Vertex got = successor(params, u);
                Vertex want;
                int window = 8;
                while (true) {
                    try {
                        want = successor_bruteforce(params, u, window);
                        break;
                    } catch (const OracleWindowError&) {
                        window *= 2;
                    }
                }
                ++checked;
                if (got == want) ++agreed;
            }
        }
    }
    report(1, "successor-oracle", agreed == checked,
           fmt("%lld/%lld agree", (long long)agreed, (long long)checked),
           timer.seconds());
}

// 2. pathwise L_n <= M_n over 10^4 coupled runs of 10^3 steps
void criterion_domination_coupling() {
    Timer timer;
    const int l0 = minimal_l0(0.5);
    const FieldParams params(2, 0.5, 2026);
    std::vector<std::int64_t> violations(10000, 0);
    parallel_for(10000, 0, [&](std::int64_t r) {
        FieldParams pr = params;
        pr.seed = derive_seed(params.seed, kSeedDomination, std::uint64_t(r));
        const DominationTrace tr =
            coupled_domination_run(pr, origin(2), offset_first(2, 5), 1000, l0);
        violations[r] = tr.violations;
    });
    std::int64_t total = 0;
    for (auto v : violations) total += v;
    report(2, "domination-coupling", l0 == 4 && total == 0,
           fmt("l0=%d violations=%lld over 10^7 steps", l0, (long long)total),
           timer.seconds());
}

// 3. exponential tail of the pair regeneration time
void criterion_regeneration_tail() {
    Timer timer;
    std::vector<std::int64_t> tau(10000);
    parallel_for(10000, 0, [&](std::int64_t r) {
        FieldParams pr(2, 0.5, derive_seed(777, kSeedRegen, std::uint64_t(r)));
        const RegenerationRun run =
            run_until_regenerations(pr, {origin(2), offset_first(2, 5)}, 1);
        tau[r] = run.records.empty() ? -1 : run.records[0].tau_steps;
    });
    std::vector<std::int64_t> clean;
    for (auto t : tau)
        if (t > 0) clean.push_back(t);
    const TailFit fit = exp_tail_fit(clean, 1e-3);
    const bool pass = clean.size() == 10000 && fit.slope < 0.0 && fit.r2 >= 0.95;
    report(3, "regeneration-tail", pass,
           fmt("slope=%.3f r2=%.3f n=%zu", fit.slope, fit.r2, clean.size()),
           timer.seconds());
}

// 4. closed-form walk arithmetic
void criterion_zwalk_arithmetic() {
    Timer timer;
    bool pass = minimal_l0(0.5) == 4 && minimal_l0(0.1) == 72;
    double worst_sum = 0.0;
    for (int i = 1; i <= 99; ++i) {
        const double p = double(i) / 100.0;
        const DominationParams dp{p, minimal_l0(p)};
        if (!(z_walk_drift(dp) < 0.0)) pass = false;
        double total = 0.0;
        for (std::int64_t k = -1;; ++k) {
            const double q = z_walk_pmf(dp, k);
            total += q;
            if (k >= 1 && q < 1e-15) break;
        }
        worst_sum = std::max(worst_sum, std::abs(total - 1.0));
    }
    if (worst_sum >= 1e-12) pass = false;
    report(4, "zwalk-arithmetic", pass,
           fmt("max|sum-1|=%.2e l0(0.5)=%d l0(0.1)=%d", worst_sum, minimal_l0(0.5),
               minimal_l0(0.1)),
           timer.seconds());
}

// 5. martingale drift at regenerations, j = 1..5
void criterion_martingale() {
    Timer timer;
    const FieldParams params(2, 0.5, 31415);
    const auto points = martingale_drift_test(params, 10, 5, 10000, 0);
    bool pass = points.size() == 5;
    std::string detail;
    for (const auto& pt : points) {
        if (!(std::abs(pt.mean) < 3.0 * pt.se)) pass = false;
        detail += fmt("j%d:%+.3f<%.3f ", pt.j, pt.mean, 3.0 * pt.se);
    }
    report(5, "martingale-increments", pass, detail, timer.seconds());
}

// 6. coalescing-time tail: KM log-log slope in [-0.65, -0.35] on [1e2, 1e4]
void criterion_coalescence_tail() {
    Timer timer;
    const FieldParams params(2, 0.5, 777);
    const auto samples = coalescence_experiment(params, 1, 10000, 100000, 0);
    std::vector<double> values;
    std::vector<bool> flags;
    std::int64_t censored = 0;
    for (const auto& s : samples) {
        values.push_back(double(s.T_nu));
        flags.push_back(s.censored);
        censored += s.censored;
    }
    const TailFit fit = power_tail_fit(values, flags, 100.0, 10000.0);
    const bool pass = fit.slope >= -0.65 && fit.slope <= -0.35;
    report(6, "coalescence-tail", pass,
           fmt("slope=%.3f r2=%.3f censored=%lld/10000", fit.slope, fit.r2,
               (long long)censored),
           timer.seconds());
}

// 7. stay probability against the closed-form bound
void criterion_stay_probability() {
    Timer timer;
    const FieldParams params(2, 0.5, 4242);
    bool pass = true;
    std::string detail;
    for (int m : {1, 2, 5, 10}) {
        const StayProbability res = stay_probability_bound_check(params, m, 10000, 0);
        if (std::abs(res.bound - 0.998046875) > 1e-12) pass = false;
        if (!(res.empirical <= res.bound + 3.0 * res.se)) pass = false;
        detail += fmt("m%d:%.4f ", m, res.empirical);
    }
    detail += "bound=0.998047";
    report(7, "stay-probability", pass, detail, timer.seconds());
}

// 8. dichotomy census: d=2 collapses to one tree, d=4 stays a forest
void criterion_census_dichotomy() {
    Timer timer;
    auto final_components = [](int d, std::uint64_t seed) {
        FieldParams params(d, 0.5, seed);
        std::vector<int> extents(d - 1, 0);
        extents[0] = 20;
        std::vector<std::int64_t> finals(100);
        parallel_for(100, 0, [&](std::int64_t r) {
            FieldParams pr = params;
            pr.seed = derive_seed(params.seed, kSeedCensus, std::uint64_t(r));
            const ForestCensus census = forest_census(pr, extents, 100000, {100000});
            finals[r] = census.components.back();
        });
        return finals;
    };
    const auto f2 = final_components(2, 5001);
    const auto f4 = final_components(4, 5001);
    int ones2 = 0, multi4 = 0;
    for (auto f : f2) ones2 += f == 1;
    for (auto f : f4) multi4 += f > 1;
    const bool pass = ones2 >= 99 && multi4 >= 60;
    report(8, "census-dichotomy", pass,
           fmt("d2 single=%d/100 (>=99) d4 multi=%d/100 (>=60)", ones2, multi4),
           timer.seconds());
}

// 9. Lyapunov drift at |x| = 80 in d=3
void criterion_lyapunov() {
    Timer timer;
    const FieldParams params(3, 0.5, 4001);
    const LyapunovResult res = lyapunov_drift_test(params, 48, 64, 10000, 0);
    report(9, "lyapunov-drift", res.upper99 < 0.0,
           fmt("mean=%.2e se=%.2e upper99=%.2e", res.mean, res.se, res.upper99),
           timer.seconds());
}

// 10. point-count diagnostic against (b-a)/sqrt(t*pi)
void criterion_e1() {
    Timer timer;
    const FieldParams params(2, 0.5, 6001);
    const E1Result res = e1_diagnostic(params, 100, 1.0, 0.0, 1.0, 1500, 0);
    const double rel = std::abs(res.mean - res.target) / res.target;
    report(10, "e1-point-count", rel <= 0.15,
           fmt("mean=%.4f target=%.4f rel=%.3f se=%.4f", res.mean, res.target, rel,
               res.se),
           timer.seconds());
}

// 11. crossing-count probability grows with the interval width
void criterion_b1() {
    Timer timer;
    const FieldParams params(2, 0.5, 6101);
    const B1Result res = b1_diagnostic(params, 100, 1.0, {0.05, 0.8}, 400, 20, 0);
    const B1Summary& narrow = res.sups[0];
    const B1Summary& wide = res.sups[1];
    const double se_diff =
        std::sqrt(narrow.se * narrow.se + wide.se * wide.se) + 1e-12;
    const bool pass = wide.p_sup - narrow.p_sup >= 3.0 * se_diff;
    report(11, "b1-monotonicity", pass,
           fmt("eps=0.05: %.4f, eps=0.8: %.4f, gap=%.4f, 3se=%.4f", narrow.p_sup,
               wide.p_sup, wide.p_sup - narrow.p_sup, 3.0 * se_diff),
           timer.seconds());
}

// 12. byte-identical reruns regardless of worker count
void criterion_determinism() {
    Timer timer;
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "dsf_acceptance_determinism";
    fs::remove_all(base);
    bool pass = true;
    std::string detail;
    for (const std::string sub : {"coalesce", "regen"}) {
        RunConfig a;
        a.subcommand = sub;
        a.d = 2;
        a.p = 0.5;
        a.seed = 7;
        a.separation = 1;
        a.replicas = 300;
        a.level_cap = 3000;
        a.j_max = 5;
        a.workers = 1;
        a.out_dir = (base / (sub + "_w1")).string();
        RunConfig b = a;
        b.workers = 4;
        b.out_dir = (base / (sub + "_w4")).string();
        if (run(a) != kExitOk || run(b) != kExitOk) {
            pass = false;
            continue;
        }
        const std::string data = sub + ".csv";
        const bool same =
            files_identical((fs::path(a.out_dir) / data).string(),
                            (fs::path(b.out_dir) / data).string()) &&
            files_identical((fs::path(a.out_dir) / "summary.json").string(),
                            (fs::path(b.out_dir) / "summary.json").string());
        if (!same) pass = false;
        detail += fmt("%s:%s ", sub.c_str(), same ? "identical" : "DIFFER");
    }
    report(12, "determinism", pass, detail, timer.seconds());
}

}  // namespace

int main() {
    criterion_successor_oracle();
    criterion_domination_coupling();
    criterion_regeneration_tail();
    criterion_zwalk_arithmetic();
    criterion_martingale();
    criterion_coalescence_tail();
    criterion_stay_probability();
    criterion_census_dichotomy();
    criterion_lyapunov();
    criterion_e1();
    criterion_b1();
    criterion_determinism();
    if (g_failures > 0)
        std::printf("%d criterion(s) failed\n", g_failures);
    else
        std::printf("all 12 criteria passed\n");
    return g_failures == 0 ? 0 : 1;
}
