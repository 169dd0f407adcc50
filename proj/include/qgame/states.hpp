#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "qgame/errors.hpp"
#include "qgame/rational.hpp"

namespace qgame {

// One measurement outcome: the payoff (eigenvalue, in utility units), its
// squared amplitude, and its phase as a fraction of a full turn.
struct Branch {
    Rational payoff;
    Rational weight;
    Rational phase;
};

// A finite measurement game: distinct payoffs sorted ascending, weights
// summing to exactly 1, phases in [0, 1). Zero-weight branches are dropped at
// construction, so the support set is exactly the branch set.
class ExactState {
  public:
    explicit ExactState(std::vector<Branch> branches);

    const std::vector<Branch>& branches() const { return branches_; }
    size_t size() const { return branches_.size(); }

    bool operator==(const ExactState& o) const;

  private:
    std::vector<Branch> branches_;
};

// A game whose weights are only known inside rational enclosures
// [weight_lo, weight_hi]; payoffs distinct and sorted ascending.
struct NumericBranch {
    Rational payoff;
    Rational weight_lo;
    Rational weight_hi;
};

class NumericState {
  public:
    explicit NumericState(std::vector<NumericBranch> branches);

    const std::vector<NumericBranch>& branches() const { return branches_; }
    size_t size() const { return branches_.size(); }

    bool operator==(const NumericState& o) const;

  private:
    std::vector<NumericBranch> branches_;
};

struct Interval {
    Rational lo;
    Rational hi;

    Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw std::domain_error("Interval: lo > hi");
    }
    Rational width() const { return hi - lo; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

ExactState make_state(const std::vector<std::tuple<Rational, Rational, Rational>>& branches);
ExactState make_state(const std::vector<std::pair<Rational, Rational>>& branches);

// Sum of weight * payoff over all branches (the conventional expectation
// value). Reference oracle only: the derivation engine never calls this.
Rational born_value(const ExactState& s);

// Weight of the branch with the given payoff, 0 if absent.
Rational born_probability(const ExactState& s, const Rational& payoff);

std::set<Rational> support(const ExactState& s);

ExactState shift_payoffs(const ExactState& s, const Rational& k);

ExactState negate_payoffs(const ExactState& s);

// Adds the mapped phases (mod one turn); every keyed payoff must exist.
ExactState apply_phases(const ExactState& s, const std::map<Rational, Rational>& phases);

// Replaces each mapped branch by the sub-game's branches with weights scaled
// by the parent weight. All phases must be zero and each substituted payoff
// must exist; duplicate flattened payoffs raise PayoffCollision.
ExactState compose(const ExactState& s, const std::map<Rational, ExactState>& subgames);

} // namespace qgame
