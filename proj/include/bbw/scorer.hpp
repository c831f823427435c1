#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbw/cost.hpp"
#include "bbw/domain.hpp"
#include "bbw/oracle.hpp"

namespace bbw {

enum class Direction { Forward, Backward };

// Everything a scorer sees when asked to rank continuations of one node.
// For Backward contexts the "parent state" is a backward-tree node and the
// candidate actions are the forward actions returned by backward_expansions.
struct NodeContext {
    const WorldState* state = nullptr;    // node being expanded
    const WorldState* initial = nullptr;  // task initial state (for payloads)
    const Goal* goal = nullptr;
    Budget budget;
    Cost g = 0;  // accumulated cost of the partial plan
    CostSchedule schedule;
    Direction direction = Direction::Forward;
    const std::vector<Action>* partial_plan = nullptr;
};

struct Proposal {
    Action action;
    WorldState successor;  // predecessor state for Backward contexts
    double action_confidence = 0.0;  // log-probability, <= 0
    double self_confidence = 0.0;    // log-probability, <= 0
};

inline double node_reward(const Proposal& p) {
    return p.action_confidence + p.self_confidence;
}

class EmptyActionSet : public std::runtime_error {
public:
    EmptyActionSet() : std::runtime_error("no applicable action") {}
};

class RemoteUnavailable : public std::runtime_error {
public:
    explicit RemoteUnavailable(const std::string& what) : std::runtime_error(what) {}
};

// The pluggable policy replacing the LLM: proposes candidate actions and the
// two confidence signals whose sum is the node reward.
class Scorer {
public:
    virtual ~Scorer() = default;

    // At most m proposals, ranked by node_reward descending (ties by canonical
    // action order). Deterministic given the context and the scorer's seed.
    std::vector<Proposal> propose(const NodeContext& ctx, int m);

    // Priority of a candidate root state (used to rank backward roots).
    virtual double state_score(const WorldState&, const NodeContext&) const { return 0.0; }

protected:
    // Fills confidences for every candidate; candidates arrive in canonical order.
    virtual void score(const NodeContext& ctx, std::vector<Proposal>& candidates) = 0;
};

struct ScorerParams {
    double tau = 1.0;    // softmax temperature of the action-evaluation signal
    double kappa = 1.0;  // slope of the feasibility self-evaluation
    double noise = 0.0;  // stddev of seeded Gaussian noise on both signals
    std::uint64_t seed = 0;
};

// Deterministic stand-in for a well-calibrated LLM: action evaluation is a
// log-softmax over -h(successor)/tau, self evaluation a logistic feasibility
// judgment log sigmoid(kappa * (B - g - c(a) - h(successor))). With noise > 0
// both signals get seeded Gaussian perturbations (clamped to <= 0), modeling
// a miscalibrated scorer.
class HeuristicScorer : public Scorer {
public:
    HeuristicScorer(const StateGraph& graph, const WorldState& initial, const Goal& goal,
                    const CostSchedule& schedule, ScorerParams params = {});

    double state_score(const WorldState& s, const NodeContext& ctx) const override;

protected:
    void score(const NodeContext& ctx, std::vector<Proposal>& candidates) override;

private:
    Cost remaining(const WorldState& s, Direction dir) const;

    const StateGraph& graph_;
    std::vector<Cost> h_goal_;  // remaining cost to goal (Forward frontiers)
    std::vector<Cost> h_init_;  // plan cost from initial (Backward frontiers)
    ScorerParams params_;
};

// Perfect scorer: top proposal always lies on a cost-optimal continuation,
// infeasible continuations get a strongly negative self signal.
class OracleScorer : public Scorer {
public:
    OracleScorer(const StateGraph& graph, const WorldState& initial, const Goal& goal,
                 const CostSchedule& schedule);

    double state_score(const WorldState& s, const NodeContext& ctx) const override;

protected:
    void score(const NodeContext& ctx, std::vector<Proposal>& candidates) override;

private:
    const StateGraph& graph_;
    std::vector<Cost> h_goal_;
    std::vector<Cost> h_init_;
    CostSchedule schedule_;
};

// Seed-keyed hash confidences; stateless, so two calls on the same context
// return the identical ranking.
class RandomScorer : public Scorer {
public:
    explicit RandomScorer(std::uint64_t seed) : seed_(seed) {}

protected:
    void score(const NodeContext& ctx, std::vector<Proposal>& candidates) override;

private:
    std::uint64_t seed_;
};

// Scores candidates over HTTP: one POST per candidate against
// <endpoint>/score with a JSON payload rendered in natural language. Transport
// failures surface as RemoteUnavailable and are never silently replaced by a
// local scorer.
std::unique_ptr<Scorer> make_remote_scorer(const std::string& endpoint);

}  // namespace bbw
