#include <doctest.h>

#include <random>

#include "bbw/bench.hpp"
#include "bbw/oracle.hpp"
#include "fixtures.hpp"
#include "oracle_ref.hpp"

using namespace bbw;
using namespace bbw::fixtures;

TEST_CASE("T1 ground truth") {
    const auto [initial, goal] = t1();
    const GroundTruth gt = optimal_plan(initial, goal, CostSchedule{1, 1, 20, 1}, graph3());
    CHECK(gt.c_opt == 2);
    REQUIRE(gt.optimal_plan.size() == 2);
    CHECK(gt.optimal_plan[0] == Action::pick_up(B));
    CHECK(gt.optimal_plan[1] == Action::stack(B, C));
    CHECK(optimal_plan(initial, goal, CostSchedule::uniform(), graph3())
              .uniform_optimal_length == 2);
}

TEST_CASE("T2 ground truth avoids the expensive put-down") {
    const auto [initial, goal] = t2();
    const GroundTruth gt = optimal_plan(initial, goal, CostSchedule{1, 1, 20, 1}, graph3());
    CHECK(gt.c_opt == 4);
    const std::vector<Action> expected{Action::unstack(A, B), Action::stack(A, C),
                                       Action::pick_up(B), Action::stack(B, A)};
    CHECK(gt.optimal_plan == expected);
    // the uniform schedule is indifferent; put-down wins the canonical tie-break
    const GroundTruth uni = optimal_plan(initial, goal, CostSchedule::uniform(), graph3());
    CHECK(uni.c_opt == 4);
    CHECK(uni.uniform_optimal_length == 4);
    CHECK(uni.optimal_plan[1] == Action::put_down(A));
}

TEST_CASE("least-cost search equals exhaustive enumeration at n=3") {
    std::mt19937_64 rng(21);
    const StateGraph& g = graph3();
    for (const CostSchedule& sched : candidate_schedules()) {
        for (int rep = 0; rep < 12; ++rep) {
            const WorldState& initial = g.states[rng() % g.size()];
            const int x = static_cast<int>(rng() % 3);
            const int y = rng() % 2 ? kTable : static_cast<int>(rng() % 3);
            if (x == y) continue;
            const Goal goal = Goal::of({{x, y}});
            const GroundTruth fast = optimal_plan(initial, goal, sched, g);
            const auto ref = testref::exhaustive_optimal(initial, goal, sched, 8);
            REQUIRE(ref.has_value());
            CHECK(fast.c_opt == ref->cost);
            CHECK(fast.optimal_plan == ref->actions);  // identical tie-breaking
        }
    }
}

TEST_CASE("remaining_cost_map is zero exactly at goal states and edge-consistent") {
    const StateGraph& g = graph4();
    const Goal goal = Goal::of({{0, 1}, {2, kTable}});
    for (const CostSchedule& sched :
         {CostSchedule::uniform(), CostSchedule{20, 1, 1, 1}, CostSchedule{1, 1, 20, 20}}) {
        const auto h = remaining_cost_map(goal, sched, g);
        for (std::size_t s = 0; s < g.size(); ++s) {
            CHECK((h[s] == 0) == satisfies_goal(g.states[s], goal));
            for (const auto& e : g.out[s])
                CHECK(h[s] <= action_cost(sched, e.action) + h[static_cast<std::size_t>(e.to)]);
        }
    }
}

TEST_CASE("g + h stays at c_opt along every optimal plan prefix") {
    std::mt19937_64 rng(31);
    const StateGraph& g = graph4();
    for (int rep = 0; rep < 30; ++rep) {
        const WorldState& initial = g.states[rng() % g.size()];
        const int x = static_cast<int>(rng() % 4);
        int y = static_cast<int>(rng() % 5) - 1;
        if (y == x) y = kTable;
        const Goal goal = Goal::of({{x, y}});
        if (satisfies_goal(initial, goal)) continue;
        const CostSchedule sched = candidate_schedules()[rng() % 10];
        const GroundTruth gt = optimal_plan(initial, goal, sched, g);
        const auto h = remaining_cost_map(goal, sched, g);
        WorldState s = initial;
        Cost acc = 0;
        CHECK(h[static_cast<std::size_t>(g.id_of(s))] == gt.c_opt);
        for (const Action& a : gt.optimal_plan) {
            acc += action_cost(sched, a);
            s = apply(s, a);
            CHECK(acc + h[static_cast<std::size_t>(g.id_of(s))] == gt.c_opt);
        }
    }
}

TEST_CASE("cost_from matches forward optimal plans to concrete states") {
    const StateGraph& g = graph3();
    const WorldState initial = WorldState::all_on_table(3);
    const CostSchedule sched{1, 20, 1, 1};
    const auto dist = cost_from(initial, sched, g);
    CHECK(dist[static_cast<std::size_t>(g.id_of(initial))] == 0);
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 20; ++rep) {
        const WorldState& target = g.states[rng() % g.size()];
        if (!target.hand_empty()) continue;
        std::vector<std::pair<int, int>> atoms;
        for (int b = 0; b < 3; ++b) atoms.emplace_back(b, *target.support_of(b));
        const GroundTruth gt = optimal_plan(initial, Goal::of(atoms), sched, g);
        CHECK(dist[static_cast<std::size_t>(g.id_of(target))] == gt.c_opt);
    }
}

TEST_CASE("by_key carries per-id values over to canonical keys") {
    const StateGraph& g = graph3();
    const auto h = remaining_cost_map(Goal::of({{0, 1}}), CostSchedule::uniform(), g);
    const auto keyed = by_key(g, h);
    REQUIRE(keyed.size() == g.size());
    for (std::size_t s = 0; s < g.size(); ++s)
        CHECK(keyed.at(g.states[s].key()) == h[s]);
}

TEST_CASE("plans_shifted compares action types by default, identity when strict") {
    const std::vector<Action> a{Action::pick_up(0), Action::stack(0, 1)};
    const std::vector<Action> same_types{Action::pick_up(2), Action::stack(2, 1)};
    const std::vector<Action> other{Action::unstack(0, 2), Action::stack(0, 1)};
    CHECK_FALSE(plans_shifted(a, a));
    CHECK_FALSE(plans_shifted(a, same_types));
    CHECK(plans_shifted(a, same_types, true));
    CHECK(plans_shifted(a, other));
    CHECK(plans_shifted(a, std::vector<Action>{Action::pick_up(0)}));  // length differs
}
