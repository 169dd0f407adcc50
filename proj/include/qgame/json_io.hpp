#pragma once

#include <string>

#include <json.hpp>

#include "qgame/states.hpp"

namespace qgame {

using ordered_json = nlohmann::ordered_json;

// Game schema: {"branches": [{"payoff": "m/n", "weight": "m/n", "phase": "m/n"}, ...]}
// Rationals are decimal-free fraction strings; phase may be omitted on input
// (defaults to 0) but is always written.
ordered_json state_to_json(const ExactState& s);
ExactState state_from_json(const ordered_json& j);

// Numeric schema uses "weight_lo"/"weight_hi" instead of "weight".
ordered_json numeric_to_json(const NumericState& s);
NumericState numeric_from_json(const ordered_json& j);

ExactState load_state(const std::string& path);
NumericState load_numeric(const std::string& path);

} // namespace qgame
