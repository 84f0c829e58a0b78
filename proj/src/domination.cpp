#include "dsf/domination.hpp"

#include <algorithm>
#include <cmath>

namespace dsf {

int minimal_l0(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("minimal_l0: p must lie in (0,1)");
    for (int l0 = 1;; ++l0) {
        if (2.0 * std::pow(1.0 - p, l0 + 1) / p < p * p) return l0;
    }
}

double z_walk_pmf(const DominationParams& params, std::int64_t k) {
    const double p = params.p;
    if (k < -1) return 0.0;
    if (k == -1) return p * p;
    if (k == 0) return 1.0 - p * p - 2.0 * std::pow(1.0 - p, params.l0 + 1);
    return 2.0 * p * std::pow(1.0 - p, double(params.l0 + k));
}

double z_walk_drift(const DominationParams& params) {
    const double p = params.p;
    return 2.0 * std::pow(1.0 - p, params.l0 + 1) / p - p * p;
}

MChainState m_chain_step(MChainState state, std::int64_t J, int l0) {
    if (J < 1) throw std::invalid_argument("m_chain_step: J must be >= 1");
    MChainState next;
    next.n = state.n + 1;
    if (J == 1) {
        next.M = std::max<std::int64_t>(state.M - 1, 0);
    } else if (J <= state.M && state.M >= l0) {
        next.M = state.M;
    } else if (J > state.M && state.M >= l0) {
        next.M = J;
    } else {
        next.M = l0 + J;
    }
    return next;
}

namespace {

constexpr std::uint64_t kAuxGeometricTag = 0x6E0;

// Height of the first open vertex straight above g. Fresh geometric(p): the
// column above a current walker position is never part of the history set.
std::int64_t column_height(const FieldParams& params, const Vertex& g) {
    Vertex w = g;
    for (std::int64_t m = 1;; ++m) {
        w.c[g.dim - 1] = g.level() + static_cast<std::int32_t>(m);
        if (is_open(params, w)) return m;
    }
}

std::int64_t aux_geometric(const FieldParams& params, std::uint64_t step) {
    for (std::int64_t m = 1;; ++m) {
        if (aux_uniform(params.seed, kAuxGeometricTag, step, std::uint64_t(m)) < params.p)
            return m;
    }
}

}  // namespace

DominationTrace coupled_domination_run(const FieldParams& params, const Vertex& u,
                                       const Vertex& v, std::int64_t n_steps, int l0,
                                       int max_radius) {
    JointState st = init_joint(params, {u, v});
    DominationTrace tr;
    tr.L.reserve(n_steps + 1);
    tr.M.reserve(n_steps + 1);
    tr.J.reserve(n_steps);
    tr.L.push_back(0);
    tr.M.push_back(0);
    MChainState M{};

    for (std::int64_t n = 0; n < n_steps; ++n) {
        const Vertex& a = st.positions[0];
        const Vertex& b = st.positions[1];
        std::int64_t J;
        if (a == b) {
            J = std::max(column_height(params, a), aux_geometric(params, n));
        } else if (a.level() == b.level()) {
            J = std::max(column_height(params, a), column_height(params, b));
        } else {
            const Vertex& lower = a.level() < b.level() ? a : b;
            J = std::max(column_height(params, lower), aux_geometric(params, n));
        }

        step_joint(st, params, max_radius);
        M = m_chain_step(M, J, l0);

        const std::int64_t L = st.history_height();
        tr.J.push_back(J);
        tr.L.push_back(L);
        tr.M.push_back(M.M);
        if (L > M.M) ++tr.violations;
        if (tr.tau < 0 && L == 0) tr.tau = st.n;
        if (tr.tau_M < 0 && M.M == 0) tr.tau_M = st.n;
    }
    return tr;
}

}  // namespace dsf
