#pragma once

#include "qgame/states.hpp"
#include "qgame/trace.hpp"

namespace qgame {

// Computes the value of a game from the decision-theoretic rules alone,
// never from the weighted sum. The derivation pipeline: strip phases
// (R_PHASE), single branch -> R_EIG, equal weights -> equal-set induction,
// otherwise ancilla expansion (R_EXPAND) to an equal-amplitude game first.
// The returned trace's conclusion claims the value for the queried state and
// is accepted by trace_checker::verify.
std::pair<Rational, ProofTrace> derive_value(const ExactState& state);

// Value of the equal-amplitude game over the given distinct payoffs.
// Power-of-two sizes split into a binary substitution tree with pair leaves;
// other sizes either split out the mean (when it is one of the payoffs) or
// run the fixpoint descent against the padded next-power-of-two set.
std::pair<Rational, ProofTrace> derive_equal_set(const std::vector<Rational>& payoffs);

// Exact enclosure of the value of a game whose weights are only known inside
// rational enclosures. The trace ends with two R_DOM steps whose premises
// derive the dominated and dominating rounded games exactly.
std::pair<Interval, ProofTrace> derive_interval(const NumericState& state, const Rational& eps);

} // namespace qgame
