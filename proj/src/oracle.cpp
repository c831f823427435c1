#include "bbw/oracle.hpp"

#include <algorithm>
#include <queue>

namespace bbw {

StateGraph enumerate_states(int n_blocks, std::size_t cap) {
    StateGraph g;
    g.n_blocks = n_blocks;
    g.states = enumerate_reachable(n_blocks, cap);
    g.index.reserve(g.states.size());
    for (std::size_t i = 0; i < g.states.size(); ++i)
        g.index.emplace(g.states[i].key(), static_cast<int>(i));
    g.out.resize(g.states.size());
    g.in.resize(g.states.size());
    for (std::size_t i = 0; i < g.states.size(); ++i) {
        for (const Action& a : applicable_actions(g.states[i])) {
            const int to = g.index.at(apply(g.states[i], a).key());
            g.out[i].push_back({a, to});
            g.in[to].push_back({a, static_cast<int>(i)});
        }
    }
    return g;
}

namespace {

struct Label {
    Cost cost;
    std::vector<Action> path;
    int state;

    // min-heap on (cost, path) lexicographic
    bool operator>(const Label& o) const {
        if (cost != o.cost) return cost > o.cost;
        return path > o.path;
    }
};

bool better(Cost c1, const std::vector<Action>& p1, Cost c2, const std::vector<Action>& p2) {
    if (c1 != c2) return c1 < c2;
    return p1 < p2;
}

}  // namespace

GroundTruth optimal_plan(const WorldState& initial, const Goal& goal,
                         const CostSchedule& schedule, const StateGraph& graph) {
    const int start = graph.id_of(initial);
    std::vector<Cost> dist(graph.size(), kUnreachable);
    std::vector<std::vector<Action>> path(graph.size());
    std::vector<char> settled(graph.size(), 0);
    std::priority_queue<Label, std::vector<Label>, std::greater<>> pq;

    dist[start] = 0;
    pq.push({0, {}, start});
    while (!pq.empty()) {
        Label top = pq.top();
        pq.pop();
        if (settled[top.state]) continue;
        if (top.cost != dist[top.state] || top.path != path[top.state]) continue;
        settled[top.state] = 1;
        if (satisfies_goal(graph.states[top.state], goal)) {
            GroundTruth gt;
            gt.c_opt = top.cost;
            gt.optimal_plan = std::move(top.path);
            gt.uniform_optimal_length = static_cast<int>(gt.optimal_plan.size());
            return gt;
        }
        for (const StateGraph::Edge& e : graph.out[top.state]) {
            if (settled[e.to]) continue;
            const Cost nc = top.cost + action_cost(schedule, e.action);
            std::vector<Action> np = top.path;
            np.push_back(e.action);
            if (dist[e.to] == kUnreachable || better(nc, np, dist[e.to], path[e.to])) {
                dist[e.to] = nc;
                path[e.to] = np;
                pq.push({nc, std::move(np), e.to});
            }
        }
    }
    throw std::runtime_error("goal unreachable");  // cannot occur: graph is connected
}

std::vector<Cost> remaining_cost_map(const Goal& goal, const CostSchedule& schedule,
                                     const StateGraph& graph) {
    std::vector<Cost> h(graph.size(), kUnreachable);
    using Entry = std::pair<Cost, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
    for (std::size_t i = 0; i < graph.size(); ++i) {
        if (satisfies_goal(graph.states[i], goal)) {
            h[i] = 0;
            pq.push({0, static_cast<int>(i)});
        }
    }
    while (!pq.empty()) {
        auto [d, s] = pq.top();
        pq.pop();
        if (d != h[s]) continue;
        // reversed edge set: predecessors of s reach the goal through s
        for (const StateGraph::Edge& e : graph.in[s]) {
            const Cost nd = d + action_cost(schedule, e.action);
            if (nd < h[e.to]) {
                h[e.to] = nd;
                pq.push({nd, e.to});
            }
        }
    }
    return h;
}

std::vector<Cost> cost_from(const WorldState& initial, const CostSchedule& schedule,
                            const StateGraph& graph) {
    std::vector<Cost> dist(graph.size(), kUnreachable);
    using Entry = std::pair<Cost, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
    dist[graph.id_of(initial)] = 0;
    pq.push({0, graph.id_of(initial)});
    while (!pq.empty()) {
        auto [d, s] = pq.top();
        pq.pop();
        if (d != dist[s]) continue;
        for (const StateGraph::Edge& e : graph.out[s]) {
            const Cost nd = d + action_cost(schedule, e.action);
            if (nd < dist[e.to]) {
                dist[e.to] = nd;
                pq.push({nd, e.to});
            }
        }
    }
    return dist;
}

std::unordered_map<std::uint64_t, Cost> by_key(const StateGraph& graph,
                                               const std::vector<Cost>& per_id) {
    std::unordered_map<std::uint64_t, Cost> m;
    m.reserve(per_id.size());
    for (std::size_t i = 0; i < per_id.size(); ++i)
        m.emplace(graph.states[i].key(), per_id[i]);
    return m;
}

bool plans_shifted(std::span<const Action> cost_plan, std::span<const Action> uniform_plan,
                   bool strict) {
    if (cost_plan.size() != uniform_plan.size()) return true;
    for (std::size_t i = 0; i < cost_plan.size(); ++i) {
        if (strict ? (cost_plan[i] != uniform_plan[i])
                   : (cost_plan[i].kind != uniform_plan[i].kind))
            return true;
    }
    return false;
}

}  // namespace bbw
