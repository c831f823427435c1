#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <span>

#include "bbw/domain.hpp"

namespace bbw {

using Cost = std::int64_t;

// Per-action-type costs, order (pick_up, unstack, put_down, stack).
struct CostSchedule {
    Cost pick_up = 1;
    Cost unstack = 1;
    Cost put_down = 1;
    Cost stack = 1;

    bool operator==(const CostSchedule&) const = default;

    Cost max() const {
        return std::max({pick_up, unstack, put_down, stack});
    }
    std::array<Cost, 4> as_tuple() const {
        return {pick_up, unstack, put_down, stack};
    }
    static CostSchedule uniform() { return {1, 1, 1, 1}; }
    bool valid() const {
        return pick_up >= 1 && unstack >= 1 && put_down >= 1 && stack >= 1;
    }
};

enum class BudgetRegime { Tight, Loose, Unlimited };

struct Budget {
    static constexpr Cost kInfinite = std::numeric_limits<Cost>::max();

    Cost limit = kInfinite;

    static Budget infinite() { return Budget{kInfinite}; }
    static Budget finite(Cost c) { return Budget{c}; }

    bool unlimited() const { return limit == kInfinite; }
    bool allows(Cost c) const { return c <= limit; }
    bool operator==(const Budget&) const = default;
};

inline Cost action_cost(const CostSchedule& s, const Action& a) {
    switch (a.kind) {
        case ActionKind::PickUp: return s.pick_up;
        case ActionKind::Unstack: return s.unstack;
        case ActionKind::PutDown: return s.put_down;
        case ActionKind::Stack: return s.stack;
    }
    return 0;
}

inline Cost plan_cost(const CostSchedule& s, std::span<const Action> plan) {
    Cost total = 0;
    for (const Action& a : plan) total += action_cost(s, a);
    return total;
}

inline Budget resolve_budget(BudgetRegime regime, Cost c_opt, const CostSchedule& s) {
    switch (regime) {
        case BudgetRegime::Tight: return Budget::finite(c_opt);
        case BudgetRegime::Loose: return Budget::finite(c_opt + 2 * s.max());
        case BudgetRegime::Unlimited: return Budget::infinite();
    }
    return Budget::infinite();
}

}  // namespace bbw
