#include <doctest.h>

#include <random>
#include <set>

#include "bbw/domain.hpp"
#include "bbw/render.hpp"
#include "oracle_ref.hpp"

using namespace bbw;

TEST_CASE("all_on_table basics") {
    WorldState s = WorldState::all_on_table(3);
    CHECK(s.num_blocks() == 3);
    CHECK(s.hand_empty());
    for (int b = 0; b < 3; ++b) {
        CHECK(s.on(b, kTable));
        CHECK(s.is_clear(b));
    }
    const auto acts = applicable_actions(s);
    REQUIRE(acts.size() == 3);
    for (int b = 0; b < 3; ++b) CHECK(acts[static_cast<std::size_t>(b)] == Action::pick_up(b));
}

TEST_CASE("apply enforces preconditions") {
    WorldState s = WorldState::all_on_table(3);
    CHECK_THROWS_AS(apply(s, Action::put_down(0)), PreconditionViolated);
    CHECK_THROWS_AS(apply(s, Action::stack(0, 1)), PreconditionViolated);
    CHECK_THROWS_AS(apply(s, Action::unstack(0, 1)), PreconditionViolated);

    WorldState held = apply(s, Action::pick_up(0));
    CHECK(held.is_held(0));
    CHECK_THROWS_AS(apply(held, Action::pick_up(1)), PreconditionViolated);
    CHECK_THROWS_AS(apply(held, Action::stack(0, 0)), PreconditionViolated);

    WorldState stacked = apply(held, Action::stack(0, 1));
    CHECK(stacked.on(0, 1));
    CHECK_FALSE(stacked.is_clear(1));
    CHECK_THROWS_AS(apply(apply(stacked, Action::pick_up(2)), Action::stack(2, 1)),
                    PreconditionViolated);
    // unstack must name the actual support
    CHECK_THROWS_AS(apply(stacked, Action::unstack(0, 2)), PreconditionViolated);
}

TEST_CASE("applicable_actions agrees with apply, canonical order") {
    std::mt19937_64 rng(11);
    for (int n = 2; n <= 6; ++n) {
        WorldState s = WorldState::all_on_table(n);
        for (int step = 0; step < 200; ++step) {
            const auto acts = applicable_actions(s);
            REQUIRE_FALSE(acts.empty());
            CHECK(std::is_sorted(acts.begin(), acts.end()));
            // exactly the applicable subset of the full action space
            std::set<Action> listed(acts.begin(), acts.end());
            for (int b = 0; b < n; ++b) {
                for (const Action& a :
                     {Action::pick_up(b), Action::put_down(b)}) {
                    CHECK(is_applicable(s, a) == listed.contains(a));
                }
                for (int o = 0; o < n; ++o) {
                    if (o == b) continue;
                    for (const Action& a : {Action::unstack(b, o), Action::stack(b, o)})
                        CHECK(is_applicable(s, a) == listed.contains(a));
                }
            }
            s = apply(s, acts[rng() % acts.size()]);
        }
    }
}

TEST_CASE("inverse undoes every applicable action") {
    std::mt19937_64 rng(5);
    WorldState s = WorldState::all_on_table(5);
    for (int step = 0; step < 500; ++step) {
        const auto acts = applicable_actions(s);
        const Action a = acts[rng() % acts.size()];
        const WorldState next = apply(s, a);
        CHECK(apply(next, inverse(a)) == s);
        s = next;
    }
}

TEST_CASE("backward_expansions is the exact preimage at n=3") {
    const auto states = enumerate_reachable(3);
    for (const WorldState& s : states) {
        std::set<std::pair<std::uint64_t, Action>> expected;
        for (const WorldState& p : states)
            for (const Action& a : applicable_actions(p))
                if (apply(p, a) == s) expected.insert({p.key(), a});
        std::set<std::pair<std::uint64_t, Action>> got;
        for (const auto& [a, p] : backward_expansions(s)) {
            CHECK(apply(p, a) == s);
            got.insert({p.key(), a});
        }
        CHECK(got == expected);
    }
}

TEST_CASE("reachable state counts match the closed form") {
    CHECK(testref::hand_empty_count(6) == 4051);
    for (int n = 2; n <= 6; ++n) {
        const auto states = enumerate_reachable(n);
        CHECK(static_cast<long long>(states.size()) == testref::total_state_count(n));
        std::set<std::uint64_t> keys;
        for (const WorldState& s : states) keys.insert(s.key());
        CHECK(keys.size() == states.size());  // canonical keys collide never
    }
}

TEST_CASE("keys identify configurations, not construction order") {
    WorldState a = WorldState::all_on_table(3);
    a = apply(a, Action::pick_up(0));
    a = apply(a, Action::stack(0, 1));
    a = apply(a, Action::pick_up(2));
    a = apply(a, Action::put_down(2));
    WorldState b = WorldState::all_on_table(3);
    b = apply(b, Action::pick_up(2));
    b = apply(b, Action::put_down(2));
    b = apply(b, Action::pick_up(0));
    b = apply(b, Action::stack(0, 1));
    CHECK(a.key() == b.key());
    CHECK(a.key() != WorldState::all_on_table(3).key());
}

TEST_CASE("goal satisfaction requires an empty hand") {
    WorldState s = WorldState::all_on_table(2);
    const Goal g = Goal::of({{0, kTable}});
    CHECK(satisfies_goal(s, g));
    CHECK_FALSE(satisfies_goal(apply(s, Action::pick_up(1)), g));
}

TEST_CASE("Goal::of rejects contradictions") {
    CHECK_THROWS_AS(Goal::of({{0, 1}, {0, 2}}), std::invalid_argument);
    const Goal g = Goal::of({{2, kTable}, {0, 1}});
    CHECK(g.atoms().front().first == 0);  // sorted by subject block
}

TEST_CASE("rendering follows the prompt grammar") {
    WorldState s = WorldState::all_on_table(3);
    s = apply(s, Action::pick_up(1));
    s = apply(s, Action::stack(1, 2));
    CHECK(render_action(Action::pick_up(0)) == "pick up the red block");
    CHECK(render_action(Action::unstack(1, 2)) ==
          "unstack the blue block from on top of the orange block");
    CHECK(render_action(Action::put_down(1)) == "put down the blue block");
    CHECK(render_action(Action::stack(1, 2)) ==
          "stack the blue block on top of the orange block");
    CHECK(render_state(s) ==
          "the red block is clear, the blue block is clear, the hand is empty, "
          "the red block is on the table, the blue block is on top of the orange block, "
          "the orange block is on the table");
    CHECK(render_goal(Goal::of({{1, 2}, {0, kTable}})) ==
          "the red block is on the table and the blue block is on top of the orange block");
}
