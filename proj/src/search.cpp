#include "bbw/search.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace bbw {

double uct_score(double q, int parent_visits, int visits, double beta) {
    return q + beta * std::sqrt(std::log(static_cast<double>(parent_visits)) /
                                (1.0 + static_cast<double>(visits)));
}

bool replay_plan(const WorldState& initial, const Goal& goal, std::span<const Action> plan) {
    WorldState s = initial;
    for (const Action& a : plan) {
        if (!is_applicable(s, a)) return false;
        s = apply(s, a);
    }
    return satisfies_goal(s, goal);
}

namespace {

double squash(double reward) { return 1.0 / (1.0 + std::exp(-reward)); }

struct Node {
    int parent = -1;
    std::optional<Action> action;  // incoming (forward-direction) action
    WorldState state;
    Cost g = 0;
    double reward = 0.0;
    int depth = 0;
    int visits = 0;
    double q = 0.0;
    int sims_started = 0;
    bool terminal = false;
    bool expanded = false;
    Direction dir = Direction::Forward;
    std::vector<int> children;
};

// Leaf-selection tie order: reward desc, then canonical incoming action, then id.
bool leaf_before(const Node& a, int ida, const Node& b, int idb) {
    if (a.reward != b.reward) return a.reward > b.reward;
    if (a.action != b.action) {
        if (!a.action) return true;
        if (!b.action) return false;
        return *a.action < *b.action;
    }
    return ida < idb;
}

// Shared arena, trace, and expansion accounting for one run.
class Run {
public:
    Run(const PlannerInput& task, Scorer& scorer, const SearchConfig& cfg)
        : task(task), scorer(scorer), cfg(cfg) {}

    const PlannerInput& task;
    Scorer& scorer;
    const SearchConfig& cfg;

    std::vector<Node> arena;
    std::vector<TraceRecord> trace;
    int expansions = 0;
    bool overbudget_goal_seen = false;
    std::optional<std::vector<Action>> solved_plan;
    Cost solved_cost = 0;

    bool limit_reached() const { return expansions >= cfg.expansion_limit; }

    int add_root(WorldState s, Direction dir, double reward = 0.0) {
        Node n;
        n.state = std::move(s);
        n.dir = dir;
        n.reward = reward;
        arena.push_back(std::move(n));
        return static_cast<int>(arena.size()) - 1;
    }

    // Root-to-node forward actions (for a Backward node: goal-root-to-node,
    // i.e. the plan suffix read leaf-to-root; see finish_backward_path).
    std::vector<Action> path_actions(int id) const {
        std::vector<Action> out;
        for (int cur = id; arena[cur].action; cur = arena[cur].parent)
            out.push_back(*arena[cur].action);
        std::reverse(out.begin(), out.end());
        return out;
    }

    // Plan suffix of a backward node: actions applied from the node's state to
    // reach the goal root, already in execution order.
    std::vector<Action> backward_suffix(int id) const {
        std::vector<Action> out;
        for (int cur = id; arena[cur].action; cur = arena[cur].parent)
            out.push_back(*arena[cur].action);
        return out;
    }

    void record(TraceRecord::Event ev, int exp_index, const Node& n) {
        trace.push_back({exp_index, n.dir, n.state.key(), n.action, n.g, n.reward, n.visits,
                         n.q, ev});
    }

    void solve(std::vector<Action> plan, Cost cost) {
        solved_plan = std::move(plan);
        solved_cost = cost;
    }

    // Expands one node: requests proposals, creates children (budget-pruned
    // when hard_pruning is on), detects goal children. Returns ids of all
    // created children; sets solved_plan when a budget-feasible goal appears.
    std::vector<int> expand(int id) {
        const std::vector<Action> prefix = path_actions(id);
        arena[id].expanded = true;
        const int exp_index = expansions++;
        record(TraceRecord::Event::Expanded, exp_index, arena[id]);

        NodeContext ctx;
        ctx.state = &arena[id].state;
        ctx.initial = &task.initial;
        ctx.goal = &task.goal;
        ctx.budget = task.budget;
        ctx.g = arena[id].g;
        ctx.schedule = task.schedule;
        ctx.direction = arena[id].dir;
        ctx.partial_plan = &prefix;
        const int m = cfg.expand_all ? std::numeric_limits<int>::max() : cfg.branching;
        const std::vector<Proposal> props = scorer.propose(ctx, m);

        const Node parent = arena[id];  // arena grows below
        std::vector<int> created;
        for (const Proposal& p : props) {
            Node child;
            child.parent = id;
            child.action = p.action;
            child.state = p.successor;
            child.g = parent.g + action_cost(task.schedule, p.action);
            child.reward = node_reward(p);
            child.depth = parent.depth + 1;
            child.dir = parent.dir;

            if (cfg.hard_pruning && !task.budget.allows(child.g)) {
                record(TraceRecord::Event::Pruned, exp_index, child);
                continue;
            }
            const bool is_goal =
                parent.dir == Direction::Forward && satisfies_goal(child.state, task.goal);
            if (is_goal) {
                if (task.budget.allows(child.g)) {
                    std::vector<Action> plan = prefix;
                    plan.push_back(p.action);
                    solve(std::move(plan), child.g);
                    return created;
                }
                overbudget_goal_seen = true;
                child.terminal = true;
                record(TraceRecord::Event::GoalFound, exp_index, child);
            } else if (child.depth >= cfg.max_depth) {
                child.terminal = true;
            }
            const int cid = static_cast<int>(arena.size());
            arena.push_back(std::move(child));
            arena[id].children.push_back(cid);
            created.push_back(cid);
        }
        return created;
    }

    RunOutcome finish() {
        RunOutcome out;
        out.expansions_used = expansions;
        out.trace = std::move(trace);
        if (solved_plan) {
            out.status = Status::Solved;
            out.plan = std::move(solved_plan);
            out.plan_cost = solved_cost;
        } else {
            out.status = overbudget_goal_seen ? Status::BudgetViolation
                                              : Status::SearchExhaustion;
        }
        return out;
    }
};

RunOutcome trivially_solved() {
    RunOutcome out;
    out.status = Status::Solved;
    out.plan = std::vector<Action>{};
    out.plan_cost = 0;
    out.expansions_used = 0;
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// ToT-BFS: exhaustive level-by-level expansion, reward-descending within a level.

RunOutcome tot_bfs(const PlannerInput& task, Scorer& scorer, const SearchConfig& cfg) {
    if (satisfies_goal(task.initial, task.goal)) return trivially_solved();
    Run run(task, scorer, cfg);
    std::vector<int> frontier{run.add_root(task.initial, Direction::Forward)};
    while (!frontier.empty() && !run.solved_plan && !run.limit_reached()) {
        std::sort(frontier.begin(), frontier.end(), [&run](int a, int b) {
            return leaf_before(run.arena[a], a, run.arena[b], b);
        });
        std::vector<int> next;
        for (int id : frontier) {
            if (run.limit_reached()) break;
            for (int cid : run.expand(id))
                if (!run.arena[cid].terminal) next.push_back(cid);
            if (run.solved_plan) break;
        }
        frontier = std::move(next);
    }
    return run.finish();
}

// ---------------------------------------------------------------------------
// ToT-DFS: deepest-first, children visited in reward-descending order.

RunOutcome tot_dfs(const PlannerInput& task, Scorer& scorer, const SearchConfig& cfg) {
    if (satisfies_goal(task.initial, task.goal)) return trivially_solved();
    Run run(task, scorer, cfg);
    std::vector<int> stack{run.add_root(task.initial, Direction::Forward)};
    while (!stack.empty() && !run.solved_plan && !run.limit_reached()) {
        const int id = stack.back();
        stack.pop_back();
        const std::vector<int> created = run.expand(id);
        // proposals arrive reward-descending; push reversed so the best is on top
        for (auto it = created.rbegin(); it != created.rend(); ++it)
            if (!run.arena[*it].terminal) stack.push_back(*it);
    }
    return run.finish();
}

// ---------------------------------------------------------------------------
// MCTS: UCT selection, expand-all-proposals, greedy rollout, running-average
// backpropagation. Rollout steps count toward the expansion limit so compute
// is comparable with the other planners.

namespace {

void backprop(Run& run, int from, double value) {
    run.arena[from].sims_started += 1;
    for (int cur = from; cur != -1; cur = run.arena[cur].parent) {
        Node& n = run.arena[cur];
        n.q = (n.q * n.visits + value) / (n.visits + 1);
        n.visits += 1;
    }
}

// Greedy top-1 rollout from a fresh child. Returns the backpropagated value;
// may set run.solved_plan.
double simulate(Run& run, int cid) {
    WorldState s = run.arena[cid].state;
    Cost g = run.arena[cid].g;
    int depth = run.arena[cid].depth;
    std::vector<Action> walked = run.path_actions(cid);
    const double fallback = squash(run.arena[cid].reward);

    int steps = 0;
    while (depth < run.cfg.max_depth && steps < run.cfg.rollout_depth) {
        if (run.limit_reached()) return fallback;
        ++run.expansions;  // each simulated step counts
        ++steps;
        NodeContext ctx;
        ctx.state = &s;
        ctx.initial = &run.task.initial;
        ctx.goal = &run.task.goal;
        ctx.budget = run.task.budget;
        ctx.g = g;
        ctx.schedule = run.task.schedule;
        ctx.direction = Direction::Forward;
        ctx.partial_plan = &walked;
        const Proposal p = run.scorer.propose(ctx, 1).front();
        g += action_cost(run.task.schedule, p.action);
        s = p.successor;
        ++depth;
        walked.push_back(p.action);
        if (satisfies_goal(s, run.task.goal)) {
            if (run.task.budget.allows(g)) {
                run.solve(std::move(walked), g);
                return 1.0;
            }
            run.overbudget_goal_seen = true;
            return fallback;
        }
    }
    return fallback;
}

}  // namespace

RunOutcome mcts(const PlannerInput& task, Scorer& scorer, const SearchConfig& cfg) {
    if (satisfies_goal(task.initial, task.goal)) return trivially_solved();
    Run run(task, scorer, cfg);
    run.add_root(task.initial, Direction::Forward);

    while (!run.limit_reached() && !run.solved_plan) {
        // selection: descend by UCT through expanded nodes (root expands first
        // unconditionally since it starts unexpanded)
        int cur = 0;
        bool dead_branch = false;
        while (run.arena[cur].expanded) {
            int best = -1;
            double best_score = 0.0;
            for (int c : run.arena[cur].children) {
                if (run.arena[c].terminal) continue;
                const double s = uct_score(run.arena[c].q,
                                           std::max(1, run.arena[cur].visits),
                                           run.arena[c].visits, cfg.uct_beta);
                if (best < 0 || s > best_score) {
                    best = c;
                    best_score = s;
                }
            }
            if (best < 0) {  // subtree exhausted
                run.arena[cur].terminal = true;
                dead_branch = true;
                break;
            }
            cur = best;
        }
        if (dead_branch) {
            if (run.arena[0].terminal) break;
            continue;
        }

        const std::vector<int> created = run.expand(cur);
        if (run.solved_plan) break;
        for (int cid : created) {
            double v;
            if (run.arena[cid].terminal) {
                // over-budget goal or depth cap; no rollout possible
                v = squash(run.arena[cid].reward);
            } else {
                v = simulate(run, cid);
                if (run.solved_plan) break;
                if (cfg.backprop_reward_only) v = squash(run.arena[cid].reward);
            }
            backprop(run, cid, v);
            if (run.limit_reached()) break;
        }
        if (created.empty() && !run.arena[cur].expanded) break;  // defensive
    }
    return run.finish();
}

// ---------------------------------------------------------------------------
// Bi-Search: alternating best-leaf expansion of a forward tree rooted at the
// initial state and a backward tree rooted at the goal states, success on a
// budget-compatible key overlap.

IncompatibleMeet::IncompatibleMeet() : std::runtime_error("meet states differ") {}

std::vector<Action> extract_plan(const WorldState& meet_forward,
                                 std::span<const Action> forward_actions,
                                 const WorldState& meet_backward,
                                 std::span<const Action> backward_suffix) {
    if (meet_forward.key() != meet_backward.key()) throw IncompatibleMeet();
    std::vector<Action> plan(forward_actions.begin(), forward_actions.end());
    plan.insert(plan.end(), backward_suffix.begin(), backward_suffix.end());
    return plan;
}

RunOutcome bi_search(const PlannerInput& task, Scorer& scorer, const SearchConfig& cfg) {
    if (satisfies_goal(task.initial, task.goal)) return trivially_solved();
    Run run(task, scorer, cfg);

    // backward roots: goal-satisfying states, reward-ranked, capped
    std::shared_ptr<const std::vector<WorldState>> states = task.all_states;
    if (!states)
        states = std::make_shared<const std::vector<WorldState>>(
            enumerate_reachable(task.initial.num_blocks()));
    NodeContext rank_ctx;
    rank_ctx.state = &task.initial;
    rank_ctx.initial = &task.initial;
    rank_ctx.goal = &task.goal;
    rank_ctx.budget = task.budget;
    rank_ctx.schedule = task.schedule;
    rank_ctx.direction = Direction::Backward;
    std::vector<std::pair<double, const WorldState*>> goal_states;
    for (const WorldState& s : *states)
        if (satisfies_goal(s, task.goal))
            goal_states.emplace_back(scorer.state_score(s, rank_ctx), &s);
    std::sort(goal_states.begin(), goal_states.end(),
              [](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first > b.first;
                  return a.second->key() < b.second->key();
              });
    if (static_cast<int>(goal_states.size()) > cfg.backward_root_cap)
        goal_states.resize(static_cast<std::size_t>(cfg.backward_root_cap));

    const int fwd_root = run.add_root(task.initial, Direction::Forward);
    (void)fwd_root;
    // min-g node per canonical key, per tree
    std::unordered_map<std::uint64_t, int> fwd_seen, bwd_seen;
    fwd_seen.emplace(task.initial.key(), 0);
    for (auto& [score, s] : goal_states) {
        const int id = run.add_root(*s, Direction::Backward, score);
        auto [it, fresh] = bwd_seen.emplace(s->key(), id);
        (void)it;
        (void)fresh;
    }

    auto meet_check = [&run](int new_id, const std::unordered_map<std::uint64_t, int>& other) {
        const Node& n = run.arena[new_id];
        auto it = other.find(n.state.key());
        if (it == other.end()) return;
        const Node& o = run.arena[it->second];
        const int f = n.dir == Direction::Forward ? new_id : it->second;
        const int b = n.dir == Direction::Forward ? it->second : new_id;
        const Cost total = run.arena[f].g + run.arena[b].g;
        if (run.task.budget.allows(total)) {
            run.solve(extract_plan(run.arena[f].state, run.path_actions(f),
                                   run.arena[b].state, run.backward_suffix(b)),
                      total);
        } else {
            // complete goal-reaching plan found, but over budget; keep searching
            run.overbudget_goal_seen = true;
            run.record(TraceRecord::Event::GoalFound, run.expansions - 1, o);
        }
        (void)o;
    };

    auto expand_turn = [&](Direction dir) -> bool {
        int pick = -1;
        for (int i = 0; i < static_cast<int>(run.arena.size()); ++i) {
            const Node& n = run.arena[i];
            if (n.dir != dir || n.expanded || n.terminal) continue;
            if (pick < 0 || leaf_before(n, i, run.arena[pick], pick)) pick = i;
        }
        if (pick < 0) return false;
        auto& own = dir == Direction::Forward ? fwd_seen : bwd_seen;
        auto& other = dir == Direction::Forward ? bwd_seen : fwd_seen;
        for (int cid : run.expand(pick)) {
            if (run.solved_plan) break;
            auto [it, fresh] = own.emplace(run.arena[cid].state.key(), cid);
            if (!fresh && run.arena[cid].g < run.arena[it->second].g) it->second = cid;
            meet_check(cid, other);
            if (run.solved_plan) break;
        }
        return true;
    };

    while (!run.limit_reached() && !run.solved_plan) {
        const bool f = expand_turn(Direction::Forward);
        if (run.solved_plan || run.limit_reached()) break;
        const bool b = expand_turn(Direction::Backward);
        if (!f && !b) break;  // both frontiers exhausted
    }
    return run.finish();
}

RunOutcome run_planner(PlannerKind kind, const PlannerInput& task, Scorer& scorer,
                       const SearchConfig& cfg) {
    switch (kind) {
        case PlannerKind::TotBfs: return tot_bfs(task, scorer, cfg);
        case PlannerKind::TotDfs: return tot_dfs(task, scorer, cfg);
        case PlannerKind::Mcts: return mcts(task, scorer, cfg);
        case PlannerKind::BiSearch: return bi_search(task, scorer, cfg);
    }
    throw std::logic_error("unknown planner");
}

}  // namespace bbw
