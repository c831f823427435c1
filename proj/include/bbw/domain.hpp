#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bbw {

// Distinguished support value: a block resting directly on the table.
inline constexpr int kTable = -1;

constexpr int kMaxBlocks = 8;

enum class ActionKind : std::uint8_t { PickUp = 0, Unstack = 1, PutDown = 2, Stack = 3 };

// One of pick-up(b), unstack(b, from), put-down(b), stack(b, onto).
// `other` is kTable for the single-block actions. Default comparison gives the
// canonical order: kind (PickUp < Unstack < PutDown < Stack), then block ids.
struct Action {
    ActionKind kind;
    std::int8_t block;
    std::int8_t other;

    static Action pick_up(int b) { return {ActionKind::PickUp, static_cast<std::int8_t>(b), kTable}; }
    static Action unstack(int b, int from) { return {ActionKind::Unstack, static_cast<std::int8_t>(b), static_cast<std::int8_t>(from)}; }
    static Action put_down(int b) { return {ActionKind::PutDown, static_cast<std::int8_t>(b), kTable}; }
    static Action stack(int b, int onto) { return {ActionKind::Stack, static_cast<std::int8_t>(b), static_cast<std::int8_t>(onto)}; }

    auto operator<=>(const Action&) const = default;
};

class PreconditionViolated : public std::runtime_error {
public:
    PreconditionViolated(Action a, const std::string& reason);
    Action action;
};

// Full BlocksWorld configuration: per-block support (a block, the table, or
// "held") plus the hand contents. Immutable from the caller's perspective;
// apply() returns a fresh state.
class WorldState {
public:
    WorldState() = default;
    static WorldState all_on_table(int n_blocks);
    // support[b] = supporting block id or kTable; held = block in hand or none.
    static WorldState make(std::vector<int> support, std::optional<int> held);

    int num_blocks() const { return static_cast<int>(support_.size()); }
    // kTable, a block id, or nothing when b is held.
    std::optional<int> support_of(int b) const;
    std::optional<int> held() const;
    bool hand_empty() const { return held_ == kNone; }
    bool is_held(int b) const { return held_ == b; }
    bool on(int b, int target) const;  // target may be kTable
    bool is_clear(int b) const;

    // Equal keys iff identical support map and held block; stable across runs.
    std::uint64_t key() const;

    bool operator==(const WorldState& o) const = default;

private:
    static constexpr std::int8_t kNone = -1;
    static constexpr std::int8_t kHeldMark = -2;

    std::vector<std::int8_t> support_;  // kHeldMark entry for the held block
    std::int8_t held_ = kNone;

    friend WorldState apply(const WorldState&, const Action&);
};

// Conjunction of on(x, y) atoms, y a block or kTable. Partial goals allowed.
class Goal {
public:
    Goal() = default;
    // Validates: no block appears twice as first argument (hence no contradiction).
    static Goal of(std::vector<std::pair<int, int>> atoms);

    const std::vector<std::pair<int, int>>& atoms() const { return atoms_; }
    bool empty() const { return atoms_.empty(); }
    int max_block() const;

    bool operator==(const Goal&) const = default;

private:
    std::vector<std::pair<int, int>> atoms_;  // sorted by first argument
};

// Exactly the actions whose preconditions hold, in canonical order.
std::vector<Action> applicable_actions(const WorldState& state);

bool is_applicable(const WorldState& state, const Action& a);

// Unique successor state; throws PreconditionViolated for inapplicable actions.
WorldState apply(const WorldState& state, const Action& a);

// PickUp(b) <-> PutDown(b); Unstack(b,x) <-> Stack(b,x).
Action inverse(const Action& a);

// All (a, s') with apply(s', a) == state. The returned action is the
// forward-direction action that would appear in a final plan.
std::vector<std::pair<Action, WorldState>> backward_expansions(const WorldState& state);

// True iff every goal atom holds and the hand is empty.
bool satisfies_goal(const WorldState& state, const Goal& goal);

// All states reachable at n blocks (BFS over apply; the space is connected).
// Throws std::length_error if the count exceeds cap.
std::vector<WorldState> enumerate_reachable(int n_blocks, std::size_t cap = 1u << 22);

}  // namespace bbw
