#include "bbw/domain.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "bbw/render.hpp"

namespace bbw {

PreconditionViolated::PreconditionViolated(Action a, const std::string& reason)
    : std::runtime_error(render_action(a) + ": " + reason), action(a) {}

WorldState WorldState::all_on_table(int n_blocks) {
    WorldState s;
    s.support_.assign(static_cast<std::size_t>(n_blocks), kTable);
    return s;
}

WorldState WorldState::make(std::vector<int> support, std::optional<int> held) {
    const int n = static_cast<int>(support.size());
    WorldState s;
    s.support_.resize(support.size());
    for (int b = 0; b < n; ++b) {
        const int sup = support[b];
        if (held && *held == b) {
            if (sup != kTable) throw std::invalid_argument("held block with a support entry");
            s.support_[b] = kHeldMark;
            continue;
        }
        if (sup != kTable && (sup < 0 || sup >= n || sup == b))
            throw std::invalid_argument("bad support entry");
        s.support_[b] = static_cast<std::int8_t>(sup);
    }
    if (held) {
        if (*held < 0 || *held >= n) throw std::invalid_argument("bad held block");
        s.held_ = static_cast<std::int8_t>(*held);
    }
    // acyclicity + held block supports nothing
    for (int b = 0; b < n; ++b) {
        int cur = b, steps = 0;
        while (cur != kTable && cur != kHeldMark) {
            if (s.support_[cur] == kHeldMark && cur != b)
                throw std::invalid_argument("block resting on the held block");
            cur = s.support_[cur];
            if (++steps > n) throw std::invalid_argument("cyclic support relation");
        }
    }
    return s;
}

std::optional<int> WorldState::support_of(int b) const {
    if (support_[b] == kHeldMark) return std::nullopt;
    return static_cast<int>(support_[b]);
}

std::optional<int> WorldState::held() const {
    if (held_ == kNone) return std::nullopt;
    return static_cast<int>(held_);
}

bool WorldState::on(int b, int target) const {
    return support_[b] != kHeldMark && support_[b] == target;
}

bool WorldState::is_clear(int b) const {
    if (held_ == b) return false;
    for (std::int8_t sup : support_)
        if (sup == b) return false;
    return true;
}

std::uint64_t WorldState::key() const {
    // 4 bits per block (support shifted into 0..9), block count in the top bits.
    std::uint64_t k = static_cast<std::uint64_t>(num_blocks()) << 36;
    for (int b = 0; b < num_blocks(); ++b)
        k |= static_cast<std::uint64_t>(support_[b] + 2) << (4 * b);
    return k;
}

Goal Goal::of(std::vector<std::pair<int, int>> atoms) {
    std::sort(atoms.begin(), atoms.end());
    for (std::size_t i = 0; i + 1 < atoms.size(); ++i)
        if (atoms[i].first == atoms[i + 1].first)
            throw std::invalid_argument("block appears twice as first goal argument");
    for (auto [x, y] : atoms)
        if (x < 0 || (y != kTable && y < 0) || x == y)
            throw std::invalid_argument("bad goal atom");
    Goal g;
    g.atoms_ = std::move(atoms);
    return g;
}

int Goal::max_block() const {
    int m = -1;
    for (auto [x, y] : atoms_) m = std::max({m, x, y});
    return m;
}

bool is_applicable(const WorldState& s, const Action& a) {
    const int n = s.num_blocks();
    const int b = a.block;
    if (b < 0 || b >= n) return false;
    switch (a.kind) {
        case ActionKind::PickUp:
            return s.hand_empty() && s.on(b, kTable) && s.is_clear(b);
        case ActionKind::Unstack:
            return a.other >= 0 && a.other < n && a.other != b &&
                   s.hand_empty() && s.on(b, a.other) && s.is_clear(b);
        case ActionKind::PutDown:
            return s.is_held(b);
        case ActionKind::Stack:
            return a.other >= 0 && a.other < n && a.other != b &&
                   s.is_held(b) && s.is_clear(a.other);
    }
    return false;
}

std::vector<Action> applicable_actions(const WorldState& s) {
    const int n = s.num_blocks();
    std::vector<Action> out;
    if (s.hand_empty()) {
        for (int b = 0; b < n; ++b)
            if (s.on(b, kTable) && s.is_clear(b)) out.push_back(Action::pick_up(b));
        for (int b = 0; b < n; ++b) {
            auto sup = s.support_of(b);
            if (sup && *sup != kTable && s.is_clear(b)) out.push_back(Action::unstack(b, *sup));
        }
    } else {
        const int h = *s.held();
        out.push_back(Action::put_down(h));
        for (int b = 0; b < n; ++b)
            if (b != h && s.is_clear(b)) out.push_back(Action::stack(h, b));
    }
    return out;  // already in canonical (kind, block ids) order
}

WorldState apply(const WorldState& s, const Action& a) {
    if (!is_applicable(s, a)) throw PreconditionViolated(a, "precondition violated");
    WorldState next = s;
    switch (a.kind) {
        case ActionKind::PickUp:
        case ActionKind::Unstack:
            next.support_[a.block] = WorldState::kHeldMark;
            next.held_ = a.block;
            break;
        case ActionKind::PutDown:
            next.support_[a.block] = static_cast<std::int8_t>(kTable);
            next.held_ = WorldState::kNone;
            break;
        case ActionKind::Stack:
            next.support_[a.block] = a.other;
            next.held_ = WorldState::kNone;
            break;
    }
    return next;
}

Action inverse(const Action& a) {
    switch (a.kind) {
        case ActionKind::PickUp: return Action::put_down(a.block);
        case ActionKind::PutDown: return Action::pick_up(a.block);
        case ActionKind::Unstack: return Action::stack(a.block, a.other);
        case ActionKind::Stack: return Action::unstack(a.block, a.other);
    }
    return a;
}

std::vector<std::pair<Action, WorldState>> backward_expansions(const WorldState& state) {
    std::vector<std::pair<Action, WorldState>> out;
    for (const Action& r : applicable_actions(state))
        out.emplace_back(inverse(r), apply(state, r));
    return out;
}

bool satisfies_goal(const WorldState& state, const Goal& goal) {
    if (!state.hand_empty()) return false;
    for (auto [x, y] : goal.atoms())
        if (x >= state.num_blocks() || !state.on(x, y)) return false;
    return true;
}

std::vector<WorldState> enumerate_reachable(int n_blocks, std::size_t cap) {
    std::vector<WorldState> states;
    std::unordered_set<std::uint64_t> seen;
    std::deque<std::size_t> frontier;
    states.push_back(WorldState::all_on_table(n_blocks));
    seen.insert(states.back().key());
    frontier.push_back(0);
    while (!frontier.empty()) {
        const WorldState cur = states[frontier.front()];
        frontier.pop_front();
        for (const Action& a : applicable_actions(cur)) {
            WorldState next = apply(cur, a);
            if (seen.insert(next.key()).second) {
                if (states.size() >= cap) throw std::length_error("state cap exceeded");
                states.push_back(std::move(next));
                frontier.push_back(states.size() - 1);
            }
        }
    }
    return states;
}

}  // namespace bbw
