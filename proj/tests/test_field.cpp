#include "doctest.h"
#include "dsf/field.hpp"

#include <cmath>
#include <cstdint>

using namespace dsf;

TEST_CASE("uniform_at is pure and in [0,1)") {
    FieldParams params(2, 0.5, 42);
    const Vertex v{3, -7};
    const double u1 = uniform_at(params, v);
    const double u2 = uniform_at(params, v);
    CHECK(u1 == u2);
    CHECK(u1 >= 0.0);
    CHECK(u1 < 1.0);
}

TEST_CASE("dimension mismatch is rejected") {
    FieldParams params(3, 0.5, 1);
    CHECK_THROWS_AS(uniform_at(params, Vertex{0, 0}), std::invalid_argument);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(FieldParams(1, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(FieldParams(2, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(FieldParams(2, 1.0, 1), std::invalid_argument);
}

TEST_CASE("seed change decorrelates values") {
    FieldParams a(2, 0.5, 1000);
    FieldParams b(2, 0.5, 1001);
    int differs = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const Vertex v{i % 500 - 250, i / 500};
        if (uniform_at(a, v) != uniform_at(b, v)) ++differs;
    }
    CHECK(differs >= n * 999 / 1000);
}

TEST_CASE("empirical mean over 10^6 vertices is 0.5 within 0.002") {
    FieldParams params(2, 0.5, 7);
    double sum = 0.0;
    for (int x = -500; x < 500; ++x)
        for (int t = 0; t < 1000; ++t) sum += uniform_at(params, Vertex{x, t});
    const double mean = sum / 1e6;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.004));
    CHECK(std::abs(mean - 0.5) < 0.002);
}

TEST_CASE("openness fraction concentrates around p") {
    for (double p : {0.2, 0.5, 0.8}) {
        FieldParams params(2, p, 99);
        std::int64_t open = 0;
        const std::int64_t n = 1000000;
        for (int x = -500; x < 500; ++x)
            for (int t = 0; t < 1000; ++t)
                if (is_open(params, Vertex{x, t})) ++open;
        const double sigma = std::sqrt(p * (1.0 - p) / double(n));
        CHECK(std::abs(double(open) / double(n) - p) < 4.0 * sigma);
    }
}

TEST_CASE("is_open matches uniform_at < p, strictly") {
    FieldParams params(2, 0.5, 5);
    for (int x = 0; x < 200; ++x) {
        const Vertex v{x, 11};
        CHECK(is_open(params, v) == (uniform_at(params, v) < params.p));
    }
    // p equal to the vertex's own value: strict inequality means closed
    const Vertex w{17, 23};
    FieldParams boundary(2, uniform_at(params, w), 5);
    CHECK_FALSE(is_open(boundary, w));
}

TEST_CASE("single-coordinate change flips the value") {
    FieldParams params(3, 0.5, 314159);
    int same = 0;
    const int n = 40000;
    for (int i = 0; i < n; ++i) {
        const Vertex v{i % 200 - 100, (i / 200) % 200 - 100, i % 97};
        Vertex w = v;
        w[i % 3] += 1 + (i % 5);
        if (uniform_bits(params, v) == uniform_bits(params, w)) ++same;
    }
    CHECK(double(same) / double(n) <= 1e-4);
}

TEST_CASE("aux stream is decoupled from vertex words") {
    FieldParams params(2, 0.5, 8);
    const double a = aux_uniform(params.seed, 1, 2, 3);
    CHECK(a >= 0.0);
    CHECK(a < 1.0);
    CHECK(a == aux_uniform(params.seed, 1, 2, 3));
    CHECK(a != aux_uniform(params.seed, 2, 2, 3));
    CHECK(a != aux_uniform(params.seed ^ 1, 1, 2, 3));
}
