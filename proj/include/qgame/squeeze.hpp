#pragma once

#include "qgame/states.hpp"

namespace qgame {

// Stochastic-dominance rounding onto the 1/N grid. Rounding acts on
// cumulative weights from the top payoff down: per-branch rounding cannot
// guarantee dominance, cumulative ceiling/floor can.

// Smallest-value grid state whose top-cumulative weights dominate every
// state consistent with the enclosures: T'_j = min(1, ceil(T_j*N)/N) with
// T_j = min(1, sum of weight_hi from the top).
ExactState round_dominating(const NumericState& state, const Rational& grid);

// Mirror image: floors of the lower-bound top cumulatives, total forced to 1.
ExactState round_dominated(const NumericState& state, const Rational& grid);

struct SqueezeResult {
    Interval interval;
    ExactState dominated;
    ExactState dominating;
};

// Brackets the game's value within width <= eps between two rational-weight
// games. Requires total enclosure slack <= eps / (2 * payoff range).
SqueezeResult squeeze(const NumericState& state, const Rational& eps);

Rational enclosure_slack(const NumericState& state);
Rational payoff_range(const NumericState& state);

// The grid N = ceil(2 * k * range / eps); throws EnclosureTooWide when the
// slack precondition fails. Only meaningful for multi-branch positive-slack
// states; callers handle the exact and single-branch cases directly.
Rational squeeze_grid(const NumericState& state, const Rational& eps);

} // namespace qgame
