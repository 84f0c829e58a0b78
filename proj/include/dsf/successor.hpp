#pragma once

#include <vector>

#include "dsf/errors.hpp"
#include "dsf/field.hpp"

namespace dsf {

inline constexpr int kDefaultMaxRadius = 10000;

/// Forward L1 shell: vertices at L1 distance exactly k from the center with a
/// strictly larger level, in lexicographic order.
struct Shell {
    Vertex center;
    int radius = 0;
    std::vector<Vertex> members;
};

namespace detail {

// Enumerates the forward shell at radius k around `center` in lexicographic
// coordinate order. The first d-1 offsets spend at most k-1 of the budget;
// the level offset takes the rest and is therefore always >= 1.
template <class F>
void shell_visit(const Vertex& center, int k, int axis, int spent, Vertex& w, F& f) {
    const int d = center.dim;
    if (axis == d - 1) {
        w.c[d - 1] = center.c[d - 1] + (k - spent);
        f(static_cast<const Vertex&>(w));
        return;
    }
    const int avail = (k - 1) - spent;
    for (int dx = -avail; dx <= avail; ++dx) {
        w.c[axis] = center.c[axis] + dx;
        shell_visit(center, k, axis + 1, spent + (dx < 0 ? -dx : dx), w, f);
    }
}

template <class F>
void for_each_shell_vertex(const Vertex& center, int k, F&& f) {
    Vertex w = center;
    shell_visit(center, k, 0, 0, w, f);
}

// All offset vectors over `axes` coordinates with L1 norm <= budget, applied
// on top of `w` starting at coordinate 0. Visits in lexicographic order.
template <class F>
void ball_visit(const Vertex& base, int axes, int axis, int budget, Vertex& w, F& f) {
    if (axis == axes) {
        f(static_cast<const Vertex&>(w));
        return;
    }
    for (int dx = -budget; dx <= budget; ++dx) {
        w.c[axis] = base.c[axis] + dx;
        ball_visit(base, axes, axis + 1, budget - (dx < 0 ? -dx : dx), w, f);
    }
}

template <class F>
void for_each_sideways_offset(const Vertex& base, int budget, Vertex& w, F&& f) {
    ball_visit(base, base.dim - 1, 0, budget, w, f);
}

}  // namespace detail

Shell forward_shell(const Vertex& center, int k, int d);

struct SuccessorStep {
    Vertex v;
    int radius = 0;
};

/// One application of the successor rule: expand forward shells outward, stop
/// at the first shell holding an open vertex, take the minimal uniform value
/// there (ties: lexicographically smallest coordinates).
SuccessorStep successor_step(const FieldParams& params, const Vertex& u,
                             int max_radius = kDefaultMaxRadius);

Vertex successor(const FieldParams& params, const Vertex& u,
                 int max_radius = kDefaultMaxRadius);

/// Test oracle: scans every vertex of the forward L1 ball of `window_radius`
/// and applies the successor conditions literally.
Vertex successor_bruteforce(const FieldParams& params, const Vertex& u,
                            int window_radius);

struct PathRecord {
    Vertex start;
    std::vector<Vertex> steps;    // steps[0] == start
    std::vector<int> step_radii;  // L1 length of each jump
};

PathRecord iterate_path(const FieldParams& params, const Vertex& u, std::int64_t n_steps,
                        int max_radius = kDefaultMaxRadius);

}  // namespace dsf
