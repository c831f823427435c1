// Test-side reference oracle: exhaustive plan enumeration, independent of the
// library's least-cost-first search. Only usable at small block counts.
#pragma once

#include <optional>
#include <set>
#include <vector>

#include "bbw/cost.hpp"
#include "bbw/domain.hpp"

namespace bbw::testref {

struct RefPlan {
    Cost cost = 0;
    std::vector<Action> actions;
};

namespace detail {

inline void enumerate(const WorldState& s, const Goal& goal, const CostSchedule& sched,
                      int max_len, Cost cost, std::vector<Action>& seq,
                      std::vector<std::uint64_t>& on_path, std::optional<RefPlan>& best) {
    if (satisfies_goal(s, goal)) {
        if (!best || cost < best->cost || (cost == best->cost && seq < best->actions))
            best = RefPlan{cost, seq};
        return;  // extending past a goal only adds cost
    }
    if (static_cast<int>(seq.size()) >= max_len) return;
    if (best && cost >= best->cost) return;
    for (const Action& a : applicable_actions(s)) {
        const WorldState next = apply(s, a);
        const std::uint64_t k = next.key();
        bool revisit = false;
        for (std::uint64_t p : on_path)
            if (p == k) revisit = true;
        if (revisit) continue;  // positive costs: optimal plans never loop
        seq.push_back(a);
        on_path.push_back(k);
        enumerate(next, goal, sched, max_len, cost + action_cost(sched, a), seq, on_path, best);
        on_path.pop_back();
        seq.pop_back();
    }
}

}  // namespace detail

// Minimum-cost plan of length <= max_len; ties broken by lexicographically
// smaller action sequence. Empty optional when no plan fits in max_len.
inline std::optional<RefPlan> exhaustive_optimal(const WorldState& initial, const Goal& goal,
                                                 const CostSchedule& sched, int max_len) {
    std::optional<RefPlan> best;
    std::vector<Action> seq;
    std::vector<std::uint64_t> on_path{initial.key()};
    detail::enumerate(initial, goal, sched, max_len, 0, seq, on_path, best);
    return best;
}

// Closed-form state counts. Hand-empty configurations of n distinct blocks
// are ordered set partitions into k nonempty stacks: sum over k of
// n!/k! * C(n-1, k-1). A holding state is a held block plus a hand-empty
// configuration of the remaining n-1.
inline long long hand_empty_count(int n) {
    if (n == 0) return 1;
    long long total = 0;
    for (int k = 1; k <= n; ++k) {
        long long term = 1;
        for (int i = k + 1; i <= n; ++i) term *= i;  // n!/k!
        long long binom = 1;
        for (int i = 1; i <= k - 1; ++i) binom = binom * (n - i) / i;  // C(n-1, k-1)
        total += term * binom;
    }
    return total;
}

inline long long total_state_count(int n) {
    return hand_empty_count(n) + n * hand_empty_count(n - 1);
}

}  // namespace bbw::testref
