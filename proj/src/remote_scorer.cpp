#include <json.hpp>

// httplib pulls in OpenSSL-free plain HTTP only.
#include <httplib.h>

#include "bbw/render.hpp"
#include "bbw/scorer.hpp"

namespace bbw {

namespace {

using nlohmann::json;

// Wire protocol (kept stable; field names documented in the README):
//   POST <endpoint>/score
//   request  {initial_state, current_state, goal, previous_actions,
//             used_minutes, time_limit_minutes (null when unlimited),
//             candidate_action, direction}
//   response {action_log_prob, self_log_prob}
// State, goal, and action fields use the prompt-style textual rendering.
class RemoteScorer : public Scorer {
public:
    explicit RemoteScorer(const std::string& endpoint) : client_(endpoint) {
        client_.set_connection_timeout(5);
        client_.set_read_timeout(30);
    }

protected:
    void score(const NodeContext& ctx, std::vector<Proposal>& cands) override {
        json base;
        base["initial_state"] = ctx.initial ? render_state(*ctx.initial) : "";
        base["current_state"] = render_state(*ctx.state);
        base["goal"] = render_goal(*ctx.goal);
        base["previous_actions"] = json::array();
        if (ctx.partial_plan)
            for (const Action& a : *ctx.partial_plan)
                base["previous_actions"].push_back(render_action(a));
        base["used_minutes"] = ctx.g;
        if (ctx.budget.unlimited())
            base["time_limit_minutes"] = nullptr;
        else
            base["time_limit_minutes"] = ctx.budget.limit;
        base["direction"] = ctx.direction == Direction::Forward ? "forward" : "backward";

        for (Proposal& p : cands) {
            json req = base;
            req["candidate_action"] = render_action(p.action);
            auto res = client_.Post("/score", req.dump(), "application/json");
            if (!res)
                throw RemoteUnavailable("scorer endpoint unreachable: " +
                                        httplib::to_string(res.error()));
            if (res->status != 200)
                throw RemoteUnavailable("scorer endpoint returned HTTP " +
                                        std::to_string(res->status));
            json body = json::parse(res->body, nullptr, false);
            if (body.is_discarded() || !body.contains("action_log_prob") ||
                !body.contains("self_log_prob"))
                throw RemoteUnavailable("malformed scorer response");
            p.action_confidence = body["action_log_prob"].get<double>();
            p.self_confidence = body["self_log_prob"].get<double>();
        }
    }

private:
    httplib::Client client_;
};

}  // namespace

std::unique_ptr<Scorer> make_remote_scorer(const std::string& endpoint) {
    return std::make_unique<RemoteScorer>(endpoint);
}

}  // namespace bbw
