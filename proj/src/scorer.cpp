#include "bbw/scorer.hpp"

#include <algorithm>
#include <cmath>

namespace bbw {

namespace {

std::vector<Proposal> candidates_of(const NodeContext& ctx) {
    std::vector<Proposal> out;
    if (ctx.direction == Direction::Forward) {
        for (const Action& a : applicable_actions(*ctx.state))
            out.push_back({a, apply(*ctx.state, a), 0.0, 0.0});
    } else {
        for (auto& [a, pred] : backward_expansions(*ctx.state))
            out.push_back({a, pred, 0.0, 0.0});
    }
    return out;
}

// log(1 / (1 + exp(-x))), stable for large |x|
double log_sigmoid(double x) {
    if (x >= 0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double unit_uniform(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::uint64_t action_bits(const Action& a) {
    return (static_cast<std::uint64_t>(a.kind) << 8) |
           (static_cast<std::uint64_t>(static_cast<std::uint8_t>(a.block)) << 16) |
           (static_cast<std::uint64_t>(static_cast<std::uint8_t>(a.other)) << 24);
}

// Box-Muller from two hash-derived uniforms; keeps the noisy scorer
// deterministic per (context, action, seed) without any shared RNG state.
double hashed_gaussian(std::uint64_t key) {
    const double u1 = std::max(unit_uniform(splitmix64(key)), 1e-12);
    const double u2 = unit_uniform(splitmix64(key ^ 0xabcdef1234567890ULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

std::vector<Proposal> Scorer::propose(const NodeContext& ctx, int m) {
    std::vector<Proposal> cands = candidates_of(ctx);
    if (cands.empty()) throw EmptyActionSet();
    score(ctx, cands);
    std::stable_sort(cands.begin(), cands.end(), [](const Proposal& a, const Proposal& b) {
        if (node_reward(a) != node_reward(b)) return node_reward(a) > node_reward(b);
        return a.action < b.action;
    });
    if (static_cast<int>(cands.size()) > m) cands.resize(static_cast<std::size_t>(m));
    return cands;
}

// ---------------------------------------------------------------------------
// HeuristicScorer

HeuristicScorer::HeuristicScorer(const StateGraph& graph, const WorldState& initial,
                                 const Goal& goal, const CostSchedule& schedule,
                                 ScorerParams params)
    : graph_(graph),
      h_goal_(remaining_cost_map(goal, schedule, graph)),
      h_init_(cost_from(initial, schedule, graph)),
      params_(params) {}

Cost HeuristicScorer::remaining(const WorldState& s, Direction dir) const {
    const int id = graph_.id_of(s);
    return dir == Direction::Forward ? h_goal_[id] : h_init_[id];
}

double HeuristicScorer::state_score(const WorldState& s, const NodeContext& ctx) const {
    return -static_cast<double>(remaining(s, ctx.direction));
}

void HeuristicScorer::score(const NodeContext& ctx, std::vector<Proposal>& cands) {
    // action evaluation: log-softmax over -h(successor)/tau
    std::vector<double> logits(cands.size());
    double max_logit = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cands.size(); ++i) {
        logits[i] = -static_cast<double>(remaining(cands[i].successor, ctx.direction)) /
                    params_.tau;
        max_logit = std::max(max_logit, logits[i]);
    }
    double z = 0.0;
    for (double l : logits) z += std::exp(l - max_logit);
    const double log_z = max_logit + std::log(z);

    for (std::size_t i = 0; i < cands.size(); ++i) {
        Proposal& p = cands[i];
        p.action_confidence = logits[i] - log_z;
        if (ctx.budget.unlimited()) {
            p.self_confidence = 0.0;
        } else {
            const Cost slack = ctx.budget.limit - ctx.g - action_cost(ctx.schedule, p.action) -
                               remaining(p.successor, ctx.direction);
            p.self_confidence = log_sigmoid(params_.kappa * static_cast<double>(slack));
        }
        if (params_.noise > 0.0) {
            const std::uint64_t base =
                splitmix64(params_.seed ^ ctx.state->key()) ^ action_bits(p.action);
            p.action_confidence =
                std::min(0.0, p.action_confidence + params_.noise * hashed_gaussian(base));
            p.self_confidence = std::min(
                0.0, p.self_confidence + params_.noise * hashed_gaussian(base ^ 0x5151ULL));
        }
    }
}

// ---------------------------------------------------------------------------
// OracleScorer

OracleScorer::OracleScorer(const StateGraph& graph, const WorldState& initial, const Goal& goal,
                           const CostSchedule& schedule)
    : graph_(graph),
      h_goal_(remaining_cost_map(goal, schedule, graph)),
      h_init_(cost_from(initial, schedule, graph)),
      schedule_(schedule) {}

double OracleScorer::state_score(const WorldState& s, const NodeContext& ctx) const {
    const int id = graph_.id_of(s);
    return -static_cast<double>(ctx.direction == Direction::Forward ? h_goal_[id] : h_init_[id]);
}

void OracleScorer::score(const NodeContext& ctx, std::vector<Proposal>& cands) {
    const auto& h = ctx.direction == Direction::Forward ? h_goal_ : h_init_;
    const Cost h_here = h[graph_.id_of(*ctx.state)];
    for (Proposal& p : cands) {
        const Cost c = action_cost(ctx.schedule, p.action);
        const Cost h_succ = h[graph_.id_of(p.successor)];
        // 0 exactly when the action lies on a cost-optimal continuation
        p.action_confidence = -static_cast<double>(c + h_succ - h_here);
        const bool feasible =
            ctx.budget.unlimited() || ctx.g + c + h_succ <= ctx.budget.limit;
        p.self_confidence = feasible ? 0.0 : -1000.0;
    }
}

// ---------------------------------------------------------------------------
// RandomScorer

void RandomScorer::score(const NodeContext& ctx, std::vector<Proposal>& cands) {
    for (Proposal& p : cands) {
        const std::uint64_t base = splitmix64(seed_ ^ ctx.state->key()) ^ action_bits(p.action);
        p.action_confidence = -5.0 * unit_uniform(splitmix64(base));
        p.self_confidence = -5.0 * unit_uniform(splitmix64(base ^ 0x77ULL));
    }
}

}  // namespace bbw
