#pragma once

#include <cstdint>
#include <vector>

#include "dsf/exploration.hpp"

namespace dsf {

/// Parameters of the dominating chain: openness probability and the drift
/// constant l0, which must satisfy 2(1-p)^(l0+1)/p < p^2.
struct DominationParams {
    double p = 0.5;
    int l0 = 1;
};

/// Smallest l0 >= 1 with 2(1-p)^(l0+1)/p < p^2.
int minimal_l0(double p);

/// Step law of the left-continuous comparison walk:
///   p^2 at k=-1, 1 - p^2 - 2(1-p)^(l0+1) at k=0, 2p(1-p)^(l0+k) for k>=1.
double z_walk_pmf(const DominationParams& params, std::int64_t k);

/// Mean step 2(1-p)^(l0+1)/p - p^2; negative whenever l0 = minimal_l0(p).
double z_walk_drift(const DominationParams& params);

struct MChainState {
    std::int64_t M = 0;
    std::int64_t n = 0;
};

/// One transition of the dominating chain driven by the geometric J:
///   J=1 -> max(M-1,0); 1<J<=M with M>=l0 -> M; J>M>=l0 -> J; else l0+J.
MChainState m_chain_step(MChainState state, std::int64_t J, int l0);

struct DominationTrace {
    std::vector<std::int64_t> L;  // history heights, L[0] = 0
    std::vector<std::int64_t> M;  // dominating chain, M[0] = 0
    std::vector<std::int64_t> J;  // driving geometrics, J[n] observed at step n
    std::int64_t violations = 0;  // steps with L > M
    std::int64_t tau = -1;        // first n >= 1 with empty history, -1 if unseen
    std::int64_t tau_M = -1;      // first n >= 1 with M = 0, -1 if unseen
};

/// Runs the two-walker joint process while evolving the dominating chain off
/// the observed column geometrics, and checks L_n <= M_n pathwise.
///
/// A mover's J is the height of the first open vertex straight above it; the
/// non-mover (or a coalesced pair) is padded with an auxiliary geometric from
/// a reserved stream of the keyed field.
DominationTrace coupled_domination_run(const FieldParams& params, const Vertex& u,
                                       const Vertex& v, std::int64_t n_steps, int l0,
                                       int max_radius = kDefaultMaxRadius);

}  // namespace dsf
