// Shared hand-traced instances used across test files.
//   T1: A, B, C on the table; goal on(B, C). Optimal: pick up B, stack B on C.
//   T2: A on B; B, C on the table; goal on(B, A). With put-down at 20 the
//       optimal plan parks A on C instead of the table.
#pragma once

#include "bbw/domain.hpp"
#include "bbw/oracle.hpp"

namespace bbw::fixtures {

inline constexpr int A = 0, B = 1, C = 2;

struct Instance {
    WorldState initial;
    Goal goal;
};

inline Instance t1() {
    return {WorldState::all_on_table(3), Goal::of({{B, C}})};
}

inline Instance t2() {
    return {WorldState::make({1, kTable, kTable}, std::nullopt), Goal::of({{B, A}})};
}

inline const StateGraph& graph3() {
    static const StateGraph g = enumerate_states(3);
    return g;
}

inline const StateGraph& graph4() {
    static const StateGraph g = enumerate_states(4);
    return g;
}

inline const StateGraph& graph5() {
    static const StateGraph g = enumerate_states(5);
    return g;
}

}  // namespace bbw::fixtures
