#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qgame/json_io.hpp"
#include "qgame/states.hpp"

namespace qgame {

// Exact rational enclosure of a (possibly irrational) quantity. Point
// intervals mean the value is known exactly.
struct RatInterval {
    Rational lo, hi;

    RatInterval() = default;
    RatInterval(Rational v) : lo(v), hi(std::move(v)) {}
    RatInterval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {}

    bool is_point() const { return lo == hi; }
    Rational width() const { return hi - lo; }
    bool disjoint_from(const RatInterval& o) const { return hi < o.lo || o.hi < lo; }

    RatInterval operator+(const RatInterval& o) const { return {lo + o.lo, hi + o.hi}; }
    RatInterval operator-() const { return {-hi, -lo}; }
    RatInterval scale(const Rational& k) const {
        return k.sign() >= 0 ? RatInterval{lo * k, hi * k} : RatInterval{hi * k, lo * k};
    }
};

// The candidate family V_beta(s) = sum_a (p_a^beta / sum_b p_b^beta) * x_a.
// beta = 1 is the expectation-value functional; every member satisfies the
// eigenstate rule, shift, zero-sum and phase invariance, so only
// substitution separates beta = 1 from the rest. Integer beta evaluates
// exactly; fractional beta uses outward-rounded integer-root enclosures, so
// a reported discrepancy is never a rounding artifact.
class ValueFunctional {
  public:
    ValueFunctional(std::string tag, Rational beta);

    const std::string& tag() const { return tag_; }
    const Rational& beta() const { return beta_; }

    RatInterval value(const ExactState& s) const;
    // The exact value when it is analytically available: integer beta,
    // single branch, or equal weights (where V_beta = mean for every beta).
    std::optional<Rational> exact_value(const ExactState& s) const;

  private:
    std::string tag_;
    Rational beta_;
};

struct ViolationReport {
    enum class Axiom { ZeroSum, Shift, Substitution, Phase };
    Axiom axiom;
    size_t game_index;
    std::optional<size_t> partner_index;
    std::string transformation;
    ordered_json witness;
    RatInterval lhs, rhs;
};

const char* axiom_name(ViolationReport::Axiom a);

// Deterministic seeded games: payoffs are small integers, weights share a
// common denominator <= 60 (sometimes all equal), phases are small fractions
// or zero. Same seed, count and max_branches give identical games on every
// platform (splitmix64, no std::random).
std::vector<ExactState> generate_suite(uint64_t seed, size_t count, size_t max_branches);

// Checks zero-sum, shift (k = 1, -2, 1/3), substitution (equal-value
// mixtures and by-value compositions over nearby suite pairs) and phase
// invariance for every game; reports each discrepancy that exceeds the
// evaluation error bounds, in canonical (game index, axiom, partner) order.
std::vector<ViolationReport> audit(const ValueFunctional& functional,
                                   const std::vector<ExactState>& suite);

ordered_json violation_to_json(const ViolationReport& v);
ordered_json violations_to_json(const std::vector<ViolationReport>& vs);

} // namespace qgame
