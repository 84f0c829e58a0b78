#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "dsf/successor.hpp"

namespace dsf {

inline constexpr std::int64_t kDefaultStepCap = 1'000'000;

/// Joint state of k walkers moving in tandem: the walkers at the minimum
/// level advance, everyone else waits. `history` holds the vertices whose
/// uniform value has been examined and whose level is strictly above the
/// current minimum level; its emptiness defines a regeneration.
struct JointState {
    std::vector<Vertex> positions;
    std::set<Vertex, LevelLexLess> history;
    std::int64_t n = 0;
    std::int32_t min_level = 0;
    std::int32_t start_level = 0;

    /// Height of the history set above the minimum level (0 iff empty).
    std::int64_t history_height() const {
        return history.empty() ? 0 : history.rbegin()->level() - min_level;
    }
    bool regenerated() const { return history.empty(); }
    bool coincident() const;
};

JointState init_joint(const FieldParams& params, const std::vector<Vertex>& starts);

struct StepInfo {
    // (old position, jump radius) for each vertex that moved this step
    std::vector<std::pair<Vertex, int>> moves;
    std::int64_t width_added = 0;  // sum of per-walker L1 displacements
};

/// Advances the joint process by one step, maintaining the history set.
StepInfo step_joint(JointState& state, const FieldParams& params,
                    int max_radius = kDefaultMaxRadius);

struct RegenerationRecord {
    std::int64_t j = 0;          // regeneration index, 1-based
    std::int64_t tau_steps = 0;  // joint steps taken up to this regeneration
    std::int64_t T_time = 0;     // level distance travelled
    std::int64_t width = 0;      // explored width since the previous regeneration
    std::vector<Vertex> positions;
};

struct RegenerationRun {
    std::vector<RegenerationRecord> records;
    bool budget_exhausted = false;
    std::int64_t steps = 0;
};

/// Runs the joint process until j_max regenerations have been observed.
/// Exhausting step_cap is reported in-band, with the records collected so far.
RegenerationRun run_until_regenerations(const FieldParams& params,
                                        const std::vector<Vertex>& starts,
                                        std::int64_t j_max,
                                        std::int64_t step_cap = kDefaultStepCap,
                                        int max_radius = kDefaultMaxRadius);

struct DifferenceSample {
    std::int64_t j = 0;
    std::vector<std::int32_t> z;  // (d-1)-vector, second walker minus first
};

struct DifferenceRun {
    std::vector<DifferenceSample> samples;  // includes j=0
    bool absorbed = false;
    bool budget_exhausted = false;
};

/// Difference chain sampled at regenerations; 0 is absorbing and stops the run.
DifferenceRun difference_chain(const FieldParams& params, const Vertex& u,
                               const Vertex& v, std::int64_t j_max,
                               std::int64_t step_cap = kDefaultStepCap);

}  // namespace dsf
