#pragma once

#include <span>
#include <string>

#include "bbw/domain.hpp"

namespace bbw {

// Display label for a block id (fixed color palette, ids 0..7).
const std::string& block_label(int id);

// "pick up the red block" / "unstack the red block from on top of the blue block" / ...
std::string render_action(const Action& a);

// Prompt-style state sentence: clear facts, hand, then on facts.
// "the red block is clear, the hand is empty, the red block is on the table, ..."
std::string render_state(const WorldState& s);

// "the blue block is on top of the orange block and the red block is on the table"
std::string render_goal(const Goal& g);

}  // namespace bbw
