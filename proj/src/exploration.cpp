#include "dsf/exploration.hpp"

#include <algorithm>

namespace dsf {

bool JointState::coincident() const {
    for (std::size_t i = 1; i < positions.size(); ++i)
        if (positions[i] != positions[0]) return false;
    return true;
}

JointState init_joint(const FieldParams& params, const std::vector<Vertex>& starts) {
    if (starts.empty()) throw std::invalid_argument("init_joint: no start vertices");
    for (const Vertex& s : starts) {
        if (s.dim != params.d)
            throw std::invalid_argument("init_joint: start dimension mismatch");
        if (s.level() != starts[0].level())
            throw std::invalid_argument("init_joint: starts must share the last coordinate");
    }
    for (std::size_t i = 0; i < starts.size(); ++i)
        for (std::size_t j = i + 1; j < starts.size(); ++j)
            if (starts[i] == starts[j])
                throw std::invalid_argument("init_joint: starts must be pairwise distinct");

    JointState st;
    st.positions = starts;
    st.n = 0;
    st.min_level = starts[0].level();
    st.start_level = starts[0].level();
    return st;
}

StepInfo step_joint(JointState& state, const FieldParams& params, int max_radius) {
    StepInfo info;

    std::int32_t min_level = state.positions[0].level();
    for (const Vertex& g : state.positions) min_level = std::min(min_level, g.level());

    // Movers: distinct vertices at the minimum level. Walkers sharing a vertex
    // have coalesced and advance as one.
    std::vector<Vertex> movers;
    for (const Vertex& g : state.positions) {
        if (g.level() != min_level) continue;
        bool seen = false;
        for (const Vertex& m : movers)
            if (m == g) { seen = true; break; }
        if (!seen) movers.push_back(g);
    }

    info.moves.reserve(movers.size());
    std::vector<Vertex> targets(movers.size());
    for (std::size_t i = 0; i < movers.size(); ++i) {
        SuccessorStep s = successor_step(params, movers[i], max_radius);
        targets[i] = s.v;
        info.moves.emplace_back(movers[i], s.radius);
    }

    for (Vertex& g : state.positions) {
        if (g.level() != min_level) continue;
        for (std::size_t i = 0; i < movers.size(); ++i) {
            if (g == movers[i]) {
                info.width_added += l1_distance(g, targets[i]);
                g = targets[i];
                break;
            }
        }
    }

    std::int32_t new_min = state.positions[0].level();
    for (const Vertex& g : state.positions) new_min = std::min(new_min, g.level());

    // Prune everything at or below the new minimum level; the comparator makes
    // this a prefix of the set.
    while (!state.history.empty() && state.history.begin()->level() <= new_min)
        state.history.erase(state.history.begin());

    // Examined region of each mover: the forward part of the L1 ball of its
    // jump radius. Only vertices strictly above the new minimum level are kept.
    for (std::size_t i = 0; i < movers.size(); ++i) {
        const Vertex& m = movers[i];
        const int r = info.moves[i].second;
        const int lvl = m.level();
        for (int dz = std::max(1, new_min + 1 - lvl); dz <= r; ++dz) {
            Vertex w = m;
            w.c[m.dim - 1] = lvl + dz;
            detail::for_each_sideways_offset(
                m, r - dz, w, [&](const Vertex& x) { state.history.insert(x); });
        }
    }

    state.min_level = new_min;
    state.n += 1;
    return info;
}

RegenerationRun run_until_regenerations(const FieldParams& params,
                                        const std::vector<Vertex>& starts,
                                        std::int64_t j_max, std::int64_t step_cap,
                                        int max_radius) {
    if (j_max < 1) throw std::invalid_argument("run_until_regenerations: j_max must be >= 1");
    JointState st = init_joint(params, starts);
    RegenerationRun run;
    std::int64_t width_accum = 0;
    std::int64_t j = 0;
    while (j < j_max) {
        if (st.n >= step_cap) {
            run.budget_exhausted = true;
            break;
        }
        StepInfo info = step_joint(st, params, max_radius);
        width_accum += info.width_added;
        if (st.regenerated()) {
            ++j;
            RegenerationRecord rec;
            rec.j = j;
            rec.tau_steps = st.n;
            rec.T_time = st.min_level - st.start_level;
            rec.width = width_accum;
            rec.positions = st.positions;
            run.records.push_back(std::move(rec));
            width_accum = 0;
        }
    }
    run.steps = st.n;
    return run;
}

namespace {

std::vector<std::int32_t> projected_difference(const Vertex& a, const Vertex& b) {
    std::vector<std::int32_t> z(a.dim - 1);
    for (int i = 0; i < a.dim - 1; ++i) z[i] = b.c[i] - a.c[i];
    return z;
}

bool all_zero(const std::vector<std::int32_t>& z) {
    for (auto x : z)
        if (x != 0) return false;
    return true;
}

}  // namespace

DifferenceRun difference_chain(const FieldParams& params, const Vertex& u,
                               const Vertex& v, std::int64_t j_max,
                               std::int64_t step_cap) {
    if (u == v) throw std::invalid_argument("difference_chain: starts must differ");
    JointState st = init_joint(params, {u, v});
    DifferenceRun run;
    run.samples.push_back({0, projected_difference(u, v)});
    std::int64_t j = 0;
    while (j < j_max) {
        if (st.n >= step_cap) {
            run.budget_exhausted = true;
            break;
        }
        step_joint(st, params);
        if (st.regenerated()) {
            ++j;
            DifferenceSample s{j, projected_difference(st.positions[0], st.positions[1])};
            const bool absorbed = all_zero(s.z);
            run.samples.push_back(std::move(s));
            if (absorbed) {
                run.absorbed = true;
                break;
            }
        }
    }
    return run;
}

}  // namespace dsf
