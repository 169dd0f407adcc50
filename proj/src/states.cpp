#include "qgame/states.hpp"

#include <algorithm>

namespace qgame {

ExactState::ExactState(std::vector<Branch> branches) {
    for (auto& b : branches) {
        if (b.weight.is_zero()) continue;
        if (b.weight.sign() < 0 || b.weight > Rational(1))
            throw Error(Errc::NotNormalized, "weight " + b.weight.str() + " outside (0, 1]");
        b.phase = b.phase.mod_one();
        branches_.push_back(std::move(b));
    }
    if (branches_.empty()) throw Error(Errc::EmptyState, "state has no branches");
    std::sort(branches_.begin(), branches_.end(),
              [](const Branch& a, const Branch& b) { return a.payoff < b.payoff; });
    Rational total;
    for (size_t i = 0; i < branches_.size(); ++i) {
        if (i > 0 && branches_[i].payoff == branches_[i - 1].payoff)
            throw Error(Errc::DuplicatePayoff, "payoff " + branches_[i].payoff.str());
        total += branches_[i].weight;
    }
    if (total != Rational(1))
        throw Error(Errc::NotNormalized, "weights sum to " + total.str());
}

bool ExactState::operator==(const ExactState& o) const {
    if (branches_.size() != o.branches_.size()) return false;
    for (size_t i = 0; i < branches_.size(); ++i) {
        const Branch &a = branches_[i], &b = o.branches_[i];
        if (a.payoff != b.payoff || a.weight != b.weight || a.phase != b.phase) return false;
    }
    return true;
}

NumericState::NumericState(std::vector<NumericBranch> branches) : branches_(std::move(branches)) {
    if (branches_.empty()) throw Error(Errc::EmptyState, "state has no branches");
    std::sort(branches_.begin(), branches_.end(),
              [](const NumericBranch& a, const NumericBranch& b) { return a.payoff < b.payoff; });
    Rational lo_sum, hi_sum;
    for (size_t i = 0; i < branches_.size(); ++i) {
        const NumericBranch& b = branches_[i];
        if (i > 0 && b.payoff == branches_[i - 1].payoff)
            throw Error(Errc::DuplicatePayoff, "payoff " + b.payoff.str());
        if (b.weight_lo.sign() < 0 || b.weight_lo > b.weight_hi || b.weight_hi > Rational(1))
            throw Error(Errc::NotNormalized,
                        "bad enclosure [" + b.weight_lo.str() + ", " + b.weight_hi.str() + "]");
        lo_sum += b.weight_lo;
        hi_sum += b.weight_hi;
    }
    if (lo_sum > Rational(1) || hi_sum < Rational(1))
        throw Error(Errc::NotNormalized, "no consistent weight vector sums to 1");
}

bool NumericState::operator==(const NumericState& o) const {
    if (branches_.size() != o.branches_.size()) return false;
    for (size_t i = 0; i < branches_.size(); ++i) {
        const NumericBranch &a = branches_[i], &b = o.branches_[i];
        if (a.payoff != b.payoff || a.weight_lo != b.weight_lo || a.weight_hi != b.weight_hi)
            return false;
    }
    return true;
}

ExactState make_state(const std::vector<std::tuple<Rational, Rational, Rational>>& branches) {
    std::vector<Branch> bs;
    bs.reserve(branches.size());
    for (const auto& [p, w, ph] : branches) bs.push_back({p, w, ph});
    return ExactState(std::move(bs));
}

ExactState make_state(const std::vector<std::pair<Rational, Rational>>& branches) {
    std::vector<Branch> bs;
    bs.reserve(branches.size());
    for (const auto& [p, w] : branches) bs.push_back({p, w, Rational(0)});
    return ExactState(std::move(bs));
}

Rational born_value(const ExactState& s) {
    Rational v;
    for (const Branch& b : s.branches()) v += b.weight * b.payoff;
    return v;
}

Rational born_probability(const ExactState& s, const Rational& payoff) {
    for (const Branch& b : s.branches())
        if (b.payoff == payoff) return b.weight;
    return Rational(0);
}

std::set<Rational> support(const ExactState& s) {
    std::set<Rational> out;
    for (const Branch& b : s.branches()) out.insert(b.payoff);
    return out;
}

ExactState shift_payoffs(const ExactState& s, const Rational& k) {
    std::vector<Branch> bs = s.branches();
    for (Branch& b : bs) b.payoff += k;
    return ExactState(std::move(bs));
}

ExactState negate_payoffs(const ExactState& s) {
    std::vector<Branch> bs = s.branches();
    for (Branch& b : bs) b.payoff = -b.payoff;
    return ExactState(std::move(bs));
}

ExactState apply_phases(const ExactState& s, const std::map<Rational, Rational>& phases) {
    std::vector<Branch> bs = s.branches();
    for (const auto& [payoff, turn] : phases) {
        bool found = false;
        for (Branch& b : bs) {
            if (b.payoff == payoff) {
                b.phase = (b.phase + turn).mod_one();
                found = true;
                break;
            }
        }
        if (!found) throw Error(Errc::UnknownPayoff, "payoff " + payoff.str() + " not in state");
    }
    return ExactState(std::move(bs));
}

ExactState compose(const ExactState& s, const std::map<Rational, ExactState>& subgames) {
    for (const Branch& b : s.branches())
        if (!b.phase.is_zero())
            throw Error(Errc::NotNormalized, "compose requires zero phases");
    for (const auto& [payoff, sub] : subgames) {
        if (born_probability(s, payoff).is_zero())
            throw Error(Errc::UnknownPayoff, "payoff " + payoff.str() + " not in state");
        for (const Branch& b : sub.branches())
            if (!b.phase.is_zero())
                throw Error(Errc::NotNormalized, "compose requires zero phases");
    }
    std::vector<Branch> out;
    for (const Branch& b : s.branches()) {
        auto it = subgames.find(b.payoff);
        if (it == subgames.end()) {
            out.push_back(b);
            continue;
        }
        for (const Branch& sb : it->second.branches())
            out.push_back({sb.payoff, sb.weight * b.weight, Rational(0)});
    }
    std::sort(out.begin(), out.end(),
              [](const Branch& a, const Branch& b) { return a.payoff < b.payoff; });
    for (size_t i = 1; i < out.size(); ++i)
        if (out[i].payoff == out[i - 1].payoff)
            throw Error(Errc::PayoffCollision, "payoff " + out[i].payoff.str() + " duplicated");
    return ExactState(std::move(out));
}

} // namespace qgame
