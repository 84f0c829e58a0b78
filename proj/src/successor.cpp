#include "dsf/successor.hpp"

#include <cstdint>
#include <limits>

namespace dsf {

Shell forward_shell(const Vertex& center, int k, int d) {
    if (k <= 0) throw std::invalid_argument("forward_shell: radius must be >= 1");
    if (d != center.dim)
        throw std::invalid_argument("forward_shell: d does not match center dimension");
    Shell s;
    s.center = center;
    s.radius = k;
    detail::for_each_shell_vertex(center, k,
                                  [&](const Vertex& w) { s.members.push_back(w); });
    return s;
}

SuccessorStep successor_step(const FieldParams& params, const Vertex& u, int max_radius) {
    if (u.dim != params.d)
        throw std::invalid_argument("successor: vertex dimension mismatch");
    for (int k = 1; k <= max_radius; ++k) {
        bool found = false;
        std::uint64_t best_bits = std::numeric_limits<std::uint64_t>::max();
        Vertex best;
        detail::for_each_shell_vertex(u, k, [&](const Vertex& w) {
            const std::uint64_t bits = uniform_bits(params, w);
            if (to_unit(bits) < params.p) {
                // strict < keeps the first (lexicographically smallest) vertex
                // on the ~2^-64 event of equal words
                if (!found || bits < best_bits) {
                    found = true;
                    best_bits = bits;
                    best = w;
                }
            }
        });
        if (found) return {best, k};
    }
    throw SearchExhaustedError("successor: no open forward vertex within radius " +
                               std::to_string(max_radius) + " of " + u.to_string());
}

Vertex successor(const FieldParams& params, const Vertex& u, int max_radius) {
    return successor_step(params, u, max_radius).v;
}

Vertex successor_bruteforce(const FieldParams& params, const Vertex& u,
                            int window_radius) {
    if (u.dim != params.d)
        throw std::invalid_argument("successor_bruteforce: vertex dimension mismatch");
    if (window_radius < 1)
        throw std::invalid_argument("successor_bruteforce: window must be >= 1");

    bool found = false;
    std::int64_t best_dist = 0;
    std::uint64_t best_bits = 0;
    Vertex best;

    const int d = params.d;
    // Plain odometer over the sideways box per forward level; deliberately
    // independent of the shell enumeration used by successor().
    for (int dz = 1; dz <= window_radius; ++dz) {
        const int budget = window_radius - dz;
        std::array<int, kMaxDim> off{};
        for (int i = 0; i < d - 1; ++i) off[i] = -budget;
        while (true) {
            std::int64_t side = 0;
            for (int i = 0; i < d - 1; ++i) side += off[i] < 0 ? -off[i] : off[i];
            if (side <= budget) {
                Vertex w = u;
                for (int i = 0; i < d - 1; ++i) w.c[i] = u.c[i] + off[i];
                w.c[d - 1] = u.c[d - 1] + dz;
                if (is_open(params, w)) {
                    const std::int64_t dist = side + dz;
                    const std::uint64_t bits = uniform_bits(params, w);
                    const bool wins =
                        !found || dist < best_dist ||
                        (dist == best_dist &&
                         (bits < best_bits || (bits == best_bits && lex_less(w, best))));
                    if (wins) {
                        found = true;
                        best_dist = dist;
                        best_bits = bits;
                        best = w;
                    }
                }
            }
            // odometer increment
            int i = d - 2;
            while (i >= 0 && off[i] == budget) off[i--] = -budget;
            if (i < 0) break;
            ++off[i];
        }
    }
    if (!found)
        throw OracleWindowError("successor_bruteforce: no open forward vertex within " +
                                std::to_string(window_radius) + " of " + u.to_string());
    return best;
}

PathRecord iterate_path(const FieldParams& params, const Vertex& u, std::int64_t n_steps,
                        int max_radius) {
    if (n_steps < 0) throw std::invalid_argument("iterate_path: n_steps must be >= 0");
    PathRecord rec;
    rec.start = u;
    rec.steps.reserve(static_cast<std::size_t>(n_steps) + 1);
    rec.steps.push_back(u);
    rec.step_radii.reserve(static_cast<std::size_t>(n_steps));
    Vertex cur = u;
    for (std::int64_t i = 0; i < n_steps; ++i) {
        SuccessorStep s = successor_step(params, cur, max_radius);
        rec.steps.push_back(s.v);
        rec.step_radii.push_back(s.radius);
        cur = s.v;
    }
    return rec;
}

}  // namespace dsf
