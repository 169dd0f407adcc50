#pragma once

#include <optional>

#include "qgame/states.hpp"
#include "qgame/trace.hpp"

namespace qgame {

// Builds per-block offsets {c*(2j-s-1)/2 : j=1..s}: a symmetric arithmetic
// set, so each block sums to zero by construction. The spacing c walks the
// deterministic sequence 1, 1/2, 1/3, ... per block until the combined
// payoffs are all distinct.
AncillaPlan plan_blocks(const std::vector<Rational>& base_payoffs,
                        const std::vector<long>& block_sizes);

// Structural validity of a plan: positive sizes, matching shapes, zero block
// sums, distinct combined payoffs. Offsets may repeat across blocks; only the
// combined payoffs carry meaning. Returns a reason when invalid.
std::optional<std::string> plan_error(const AncillaPlan& plan);

// Converts a zero-phase rational-weight game into the equal-amplitude game
// over N = lcm(weight denominators) branches, payoffs x_a + y per block.
// Preserves the Born value exactly (block sums are zero). The returned
// R_EXPAND step has its premise and claim left for the caller to fill.
std::pair<ExactState, RuleStep> expand_to_equal(const ExactState& state);

inline constexpr long kMaxExpansion = 1000000;

} // namespace qgame
