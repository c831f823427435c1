#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "bbw/cost.hpp"
#include "bbw/domain.hpp"

namespace bbw {

// Cost value meaning "no finite path". Cannot occur in connected BlocksWorld
// graphs but kept for defensive checks.
inline constexpr Cost kUnreachable = Budget::kInfinite;

// Fully labeled transition graph over all reachable states at n blocks.
// Immutable after construction; safe for concurrent reads.
struct StateGraph {
    struct Edge {
        Action action;
        int to;
    };

    int n_blocks = 0;
    std::vector<WorldState> states;
    std::unordered_map<std::uint64_t, int> index;  // canonical key -> state id
    std::vector<std::vector<Edge>> out;  // out[s]: (a, s') with apply(s, a) = s'
    std::vector<std::vector<Edge>> in;   // in[s']: (a, s) with apply(s, a) = s'

    int id_of(const WorldState& s) const { return index.at(s.key()); }
    std::size_t size() const { return states.size(); }
};

StateGraph enumerate_states(int n_blocks, std::size_t cap = 1u << 22);

struct GroundTruth {
    Cost c_opt = 0;
    std::vector<Action> optimal_plan;
    // Action count of the optimal plan under the all-ones schedule; defines
    // the difficulty class L.
    int uniform_optimal_length = 0;
};

// Minimum-cost plan via least-cost-first search, equivalent to exhaustive plan
// enumeration for positive costs. Ties between equal-cost plans are broken by
// lexicographically smaller action sequence under the canonical action order.
// The returned uniform_optimal_length is only meaningful when the schedule is
// all-ones (it is then the plan length); callers combine two ground truths.
GroundTruth optimal_plan(const WorldState& initial, const Goal& goal,
                         const CostSchedule& schedule, const StateGraph& graph);

// h(s): least cost from state id s to any goal-satisfying state.
// h(s) == 0 iff satisfies_goal(s).
std::vector<Cost> remaining_cost_map(const Goal& goal, const CostSchedule& schedule,
                                     const StateGraph& graph);

// dist(s): least plan cost from `initial` to state id s (forward direction).
// Used as the remaining-work estimate for backward search frontiers.
std::vector<Cost> cost_from(const WorldState& initial, const CostSchedule& schedule,
                            const StateGraph& graph);

std::unordered_map<std::uint64_t, Cost> by_key(const StateGraph& graph,
                                               const std::vector<Cost>& per_id);

// Shifted iff the action-type sequence of the cost-optimal plan differs from
// the uniform-cost one; strict compares full action identity instead.
bool plans_shifted(std::span<const Action> cost_plan, std::span<const Action> uniform_plan,
                   bool strict = false);

}  // namespace bbw
