#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "bbw/cost.hpp"
#include "bbw/domain.hpp"
#include "bbw/scorer.hpp"

namespace bbw {

enum class Status { Solved, BudgetViolation, SearchExhaustion };
enum class PlannerKind { TotBfs, TotDfs, Mcts, BiSearch };

struct SearchConfig {
    int expansion_limit = 500;
    int max_depth = 24;  // K, maximum actions per trajectory
    int branching = 5;   // m, proposals requested per expansion
    bool hard_pruning = false;
    double uct_beta = 1.0;
    int rollout_depth = 24;
    std::uint64_t seed = 0;
    // Bi-Search: expand every feasible action instead of the top-m proposals.
    bool expand_all = false;
    // MCTS: backpropagate the squashed child reward instead of the rollout outcome.
    bool backprop_reward_only = false;
    int backward_root_cap = 32;

    bool valid() const { return expansion_limit >= 1 && branching >= 1 && max_depth >= 1; }
};

struct PlannerInput {
    WorldState initial;
    Goal goal;
    CostSchedule schedule;
    Budget budget;
    // Optional pre-enumerated state list for the task's block count; Bi-Search
    // uses it to materialize backward roots (enumerated on demand when absent).
    std::shared_ptr<const std::vector<WorldState>> all_states;
};

struct TraceRecord {
    enum class Event { Expanded, Pruned, GoalFound };

    int index;  // expansion index at the time the record was written
    Direction direction;
    std::uint64_t state_key;
    std::optional<Action> action;  // incoming action (absent for roots)
    Cost g;
    double reward;
    int visits;
    double q;
    Event event;

    bool pruned() const { return event == Event::Pruned; }
};

struct RunOutcome {
    Status status = Status::SearchExhaustion;
    std::optional<std::vector<Action>> plan;
    std::optional<Cost> plan_cost;
    int expansions_used = 0;
    std::vector<TraceRecord> trace;
};

// Q(u) + beta * sqrt(ln(parent_visits) / (1 + visits))
double uct_score(double q, int parent_visits, int visits, double beta);

class IncompatibleMeet : public std::runtime_error {
public:
    IncompatibleMeet();
};

// Concatenates a forward root-to-leaf action path with a backward leaf-to-root
// suffix (whose actions are already forward-direction, in execution order).
// Throws IncompatibleMeet when the meeting states differ.
std::vector<Action> extract_plan(const WorldState& meet_forward,
                                 std::span<const Action> forward_actions,
                                 const WorldState& meet_backward,
                                 std::span<const Action> backward_suffix);

RunOutcome tot_bfs(const PlannerInput& task, Scorer& scorer, const SearchConfig& cfg);
RunOutcome tot_dfs(const PlannerInput& task, Scorer& scorer, const SearchConfig& cfg);
RunOutcome mcts(const PlannerInput& task, Scorer& scorer, const SearchConfig& cfg);
RunOutcome bi_search(const PlannerInput& task, Scorer& scorer, const SearchConfig& cfg);

RunOutcome run_planner(PlannerKind kind, const PlannerInput& task, Scorer& scorer,
                       const SearchConfig& cfg);

// Replays a plan through the domain; true iff every action applies and the
// final state satisfies the goal.
bool replay_plan(const WorldState& initial, const Goal& goal, std::span<const Action> plan);

}  // namespace bbw
