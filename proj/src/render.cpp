#include "bbw/render.hpp"

#include <array>

namespace bbw {

const std::string& block_label(int id) {
    static const std::array<std::string, kMaxBlocks> labels = {
        "red", "blue", "orange", "yellow", "green", "purple", "white", "black"};
    return labels.at(static_cast<std::size_t>(id));
}

static std::string the(int id) { return "the " + block_label(id) + " block"; }

std::string render_action(const Action& a) {
    switch (a.kind) {
        case ActionKind::PickUp: return "pick up " + the(a.block);
        case ActionKind::Unstack:
            return "unstack " + the(a.block) + " from on top of " + the(a.other);
        case ActionKind::PutDown: return "put down " + the(a.block);
        case ActionKind::Stack:
            return "stack " + the(a.block) + " on top of " + the(a.other);
    }
    return "";
}

static std::string on_fact(int b, int target) {
    if (target == kTable) return the(b) + " is on the table";
    return the(b) + " is on top of " + the(target);
}

std::string render_state(const WorldState& s) {
    std::string out;
    auto add = [&out](const std::string& fact) {
        if (!out.empty()) out += ", ";
        out += fact;
    };
    for (int b = 0; b < s.num_blocks(); ++b)
        if (s.is_clear(b)) add(the(b) + " is clear");
    if (s.hand_empty())
        add("the hand is empty");
    else
        add("the hand is holding " + the(*s.held()));
    for (int b = 0; b < s.num_blocks(); ++b)
        if (auto sup = s.support_of(b)) add(on_fact(b, *sup));
    return out;
}

std::string render_goal(const Goal& g) {
    std::string out;
    for (auto [x, y] : g.atoms()) {
        if (!out.empty()) out += " and ";
        out += on_fact(x, y);
    }
    return out;
}

}  // namespace bbw
