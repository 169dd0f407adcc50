#pragma once

#include <optional>
#include <string>

#include "qgame/trace.hpp"

namespace qgame {

struct Verdict {
    bool accepted = false;
    std::optional<int> failing_step;
    std::string reason;
};

// Accepts a trace iff every step is a valid instance of its rule schema.
// Each step is checked locally (state transformations re-derived, claims
// recomputed from premises); afterwards every R_EQN unknown is resolved and
// all states are re-validated at their instantiated payoffs, which enforces
// the side conditions of the fixpoint arguments. Never computes a game's
// value from scratch. Structural problems throw Error(MalformedTrace);
// rejection returns the first failing step in premise order.
Verdict verify(const ProofTrace& trace);

} // namespace qgame
