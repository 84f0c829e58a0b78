#include "doctest.h"
#include "dsf/successor.hpp"

#include <algorithm>
#include <cmath>
#include <map>

using namespace dsf;

namespace {

// Brute-force shell oracle: enumerate a box and filter.
std::vector<Vertex> shell_oracle(const Vertex& center, int k) {
    std::vector<Vertex> out;
    const int d = center.dim;
    std::vector<int> off(d, -k);
    while (true) {
        std::int64_t s = 0;
        for (int i = 0; i < d; ++i) s += std::abs(off[i]);
        if (s == k && off[d - 1] > 0) {
            Vertex w = center;
            for (int i = 0; i < d; ++i) w.c[i] = center.c[i] + off[i];
            out.push_back(w);
        }
        int i = d - 1;
        while (i >= 0 && off[i] == k) off[i--] = -k;
        if (i < 0) break;
        ++off[i];
    }
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

}  // namespace

TEST_CASE("forward_shell: frozen small cases") {
    const Shell s1 = forward_shell(Vertex{0, 0}, 1, 2);
    REQUIRE(s1.members.size() == 1);
    CHECK(s1.members[0] == Vertex{0, 1});

    const Shell s2 = forward_shell(Vertex{0, 0}, 2, 2);
    REQUIRE(s2.members.size() == 3);
    CHECK(s2.members[0] == Vertex{-1, 1});
    CHECK(s2.members[1] == Vertex{0, 2});
    CHECK(s2.members[2] == Vertex{1, 1});

    const Shell s3 = forward_shell(Vertex{0, 0, 0}, 2, 3);
    REQUIRE(s3.members.size() == 5);
    CHECK(s3.members[0] == Vertex{-1, 0, 1});
    CHECK(s3.members[1] == Vertex{0, -1, 1});
    CHECK(s3.members[2] == Vertex{0, 0, 2});
    CHECK(s3.members[3] == Vertex{0, 1, 1});
    CHECK(s3.members[4] == Vertex{1, 0, 1});
}

TEST_CASE("forward_shell equals the box-filter oracle") {
    for (int d = 2; d <= 4; ++d) {
        Vertex center;
        center.dim = std::uint8_t(d);
        center.c[0] = 3;
        center.c[d - 1] = -2;
        for (int k = 1; k <= 5; ++k) {
            const Shell s = forward_shell(center, k, d);
            const auto oracle = shell_oracle(center, k);
            REQUIRE(s.members.size() == oracle.size());
            for (std::size_t i = 0; i < oracle.size(); ++i)
                CHECK(s.members[i] == oracle[i]);
        }
    }
}

TEST_CASE("forward_shell rejects bad radius and dimension") {
    CHECK_THROWS_AS(forward_shell(Vertex{0, 0}, 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(forward_shell(Vertex{0, 0}, 1, 3), std::invalid_argument);
}

TEST_CASE("successor: distance-1 candidate always wins when open") {
    FieldParams params(2, 0.6, 21);
    int checked = 0;
    for (int x = 0; x < 400 && checked < 50; ++x) {
        const Vertex u{x, 0};
        const Vertex up{x, 1};
        if (is_open(params, up)) {
            CHECK(successor(params, u) == up);
            ++checked;
        }
    }
    CHECK(checked == 50);
}

TEST_CASE("successor: unique open vertex at minimal distance wins") {
    FieldParams params(2, 0.4, 137);
    // find an instance where the shell-1 vertex is closed and exactly one
    // shell-2 vertex is open
    int found = 0;
    for (int x = -2000; x < 2000 && found < 20; ++x) {
        const Vertex u{x, 0};
        if (is_open(params, Vertex{x, 1})) continue;
        std::vector<Vertex> open2;
        for (const Vertex& w : forward_shell(u, 2, 2).members)
            if (is_open(params, w)) open2.push_back(w);
        if (open2.size() == 1) {
            CHECK(successor(params, u) == open2[0]);
            ++found;
        }
    }
    CHECK(found == 20);
}

TEST_CASE("successor: minimal uniform value breaks the shell tie") {
    FieldParams params(2, 0.7, 1729);
    int found = 0;
    for (int x = -4000; x < 4000 && found < 20; ++x) {
        const Vertex u{x, 0};
        if (is_open(params, Vertex{x, 1})) continue;
        std::vector<Vertex> open2;
        for (const Vertex& w : forward_shell(u, 2, 2).members)
            if (is_open(params, w)) open2.push_back(w);
        if (open2.size() >= 2) {
            const Vertex* best = &open2[0];
            for (const Vertex& w : open2)
                if (uniform_at(params, w) < uniform_at(params, *best)) best = &w;
            CHECK(successor(params, u) == *best);
            ++found;
        }
    }
    CHECK(found == 20);
}

TEST_CASE("successor agrees with the brute-force oracle") {
    int idx = 0;
    for (int d : {2, 3, 4}) {
        for (double p : {0.2, 0.5, 0.8}) {
            FieldParams params(d, p, 555 + d * 10 + int(p * 10));
            for (int i = 0; i < 500; ++i, ++idx) {
                Vertex u;
                u.dim = std::uint8_t(d);
                for (int k = 0; k < d; ++k)
                    u.c[k] = int((uniform_at(FieldParams(2, 0.5, 1234),
                                             Vertex{idx, k}) -
                                  0.5) *
                                 2000.0);
                Vertex got = successor(params, u);
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
                REQUIRE(got == want);
            }
        }
    }
}

TEST_CASE("oracle window too small raises") {
    FieldParams params(2, 0.5, 77);
    // a closed column: find u whose forward ball of radius 1 is closed
    for (int x = 0; x < 200; ++x) {
        const Vertex u{x, 0};
        if (!is_open(params, Vertex{x, 1})) {
            CHECK_THROWS_AS(successor_bruteforce(params, u, 1), OracleWindowError);
            return;
        }
    }
    FAIL("no instance found");
}

TEST_CASE("iterate_path basics") {
    FieldParams params(2, 0.5, 3);
    const Vertex u{2, 5};
    const PathRecord r0 = iterate_path(params, u, 0);
    CHECK(r0.steps.size() == 1);
    CHECK(r0.steps[0] == u);

    const PathRecord r = iterate_path(params, u, 200);
    REQUIRE(r.steps.size() == 201);
    for (std::size_t i = 1; i < r.steps.size(); ++i) {
        CHECK(r.steps[i].level() > r.steps[i - 1].level());  // strict monotonicity
        CHECK(l1_distance(r.steps[i - 1], r.steps[i]) == r.step_radii[i - 1]);
        CHECK(is_open(params, r.steps[i]));
    }
}

TEST_CASE("paths that meet stay together") {
    FieldParams params(2, 0.5, 9);
    const PathRecord a = iterate_path(params, Vertex{0, 0}, 400);
    const PathRecord b = iterate_path(params, Vertex{7, 0}, 400);
    // find a common vertex, then compare suffixes at matching levels
    std::map<std::pair<int, int>, std::size_t> seen;
    for (std::size_t i = 0; i < a.steps.size(); ++i)
        seen[{a.steps[i].c[0], a.steps[i].c[1]}] = i;
    bool met = false;
    for (std::size_t j = 0; j < b.steps.size(); ++j) {
        auto it = seen.find({b.steps[j].c[0], b.steps[j].c[1]});
        if (it != seen.end()) {
            met = true;
            std::size_t i = it->second;
            while (i < a.steps.size() && j < b.steps.size()) {
                CHECK(a.steps[i] == b.steps[j]);
                ++i;
                ++j;
            }
            break;
        }
    }
    CHECK(met);
}

TEST_CASE("jump-radius tail matches the closed-shell volume law") {
    // P(radius >= r+1) = (1-p)^(sum of shell sizes up to r), by independence
    // of the per-vertex words; checked empirically at p = 0.5, d = 2.
    FieldParams params(2, 0.5, 4242);
    const int n = 100000;
    std::map<int, int> radius_count;
    for (int i = 0; i < n; ++i) {
        const Vertex u{i % 1000, 3 * (i / 1000)};
        radius_count[successor_step(params, u).radius] += 1;
    }
    double survival = 1.0;  // P(radius >= r)
    int cum = 0;
    for (int r = 1; r <= 3; ++r) {
        survival = 1.0 - double(cum) / double(n);
        std::int64_t closed_volume = 0;  // vertices in shells 1..r-1
        for (int k = 1; k < r; ++k)
            closed_volume += std::int64_t(forward_shell(Vertex{0, 0}, k, 2).members.size());
        const double expect = std::pow(0.5, double(closed_volume));
        const double se = std::sqrt(expect * (1.0 - expect) / double(n)) + 1e-12;
        CHECK(std::abs(survival - expect) < 5.0 * se + 0.002);
        cum += radius_count.count(r) ? radius_count[r] : 0;
    }
}
