#include "qgame/ancilla.hpp"

#include <algorithm>
#include <set>

namespace qgame {

namespace {

std::vector<Rational> block_offsets(long size, long t) {
    // {(2j - s - 1) / (2t) : j = 1..s}; symmetric around 0.
    std::vector<Rational> out;
    out.reserve(size);
    for (long j = 1; j <= size; ++j)
        out.push_back(Rational(2 * j - size - 1) / Rational(2 * t));
    return out;
}

} // namespace

AncillaPlan plan_blocks(const std::vector<Rational>& base_payoffs,
                        const std::vector<long>& block_sizes) {
    if (base_payoffs.size() != block_sizes.size())
        throw std::domain_error("plan_blocks: size mismatch");
    std::set<Rational> seen;
    for (const Rational& x : base_payoffs)
        if (!seen.insert(x).second)
            throw Error(Errc::DuplicatePayoff, "payoff " + x.str());

    for (long s : block_sizes)
        if (s <= 0) throw std::domain_error("plan_blocks: nonpositive block size");

    AncillaPlan plan;
    plan.base_payoffs = base_payoffs;
    plan.block_sizes = block_sizes;
    // All blocks share the escalation index: every cross-block collision is a
    // linear condition on the spacing, so only finitely many t fail.
    for (long t = 1;; ++t) {
        std::vector<std::vector<Rational>> offsets;
        std::set<Rational> used;
        bool ok = true;
        for (size_t a = 0; a < base_payoffs.size() && ok; ++a) {
            std::vector<Rational> ys = block_offsets(block_sizes[a], t);
            for (const Rational& y : ys)
                if (!used.insert(base_payoffs[a] + y).second) {
                    ok = false;
                    break;
                }
            offsets.push_back(std::move(ys));
        }
        if (ok) {
            plan.offsets = std::move(offsets);
            return plan;
        }
    }
}

std::optional<std::string> plan_error(const AncillaPlan& plan) {
    if (plan.base_payoffs.size() != plan.block_sizes.size() ||
        plan.offsets.size() != plan.block_sizes.size())
        return "plan shape mismatch";
    std::set<Rational> base;
    for (const Rational& x : plan.base_payoffs)
        if (!base.insert(x).second) return "duplicate base payoff";
    std::set<Rational> combined;
    for (size_t a = 0; a < plan.offsets.size(); ++a) {
        if (plan.block_sizes[a] <= 0) return "nonpositive block size";
        if (static_cast<long>(plan.offsets[a].size()) != plan.block_sizes[a])
            return "offset count does not match block size";
        Rational sum;
        for (const Rational& y : plan.offsets[a]) {
            sum += y;
            if (!combined.insert(plan.base_payoffs[a] + y).second)
                return "combined payoffs not distinct";
        }
        if (!sum.is_zero()) return "block sum nonzero";
    }
    return std::nullopt;
}

std::pair<ExactState, RuleStep> expand_to_equal(const ExactState& state) {
    std::vector<Rational> payoffs;
    Rational n(1);
    for (const Branch& b : state.branches()) {
        if (!b.phase.is_zero())
            throw Error(Errc::NotNormalized, "expand_to_equal requires zero phases");
        payoffs.push_back(b.payoff);
        n = Rational::int_lcm(n, b.weight.denominator());
        if (n > Rational(kMaxExpansion))
            throw Error(Errc::ExpansionTooLarge,
                        "common denominator exceeds " + std::to_string(kMaxExpansion));
    }

    std::vector<long> sizes;
    for (const Branch& b : state.branches()) {
        Rational m = b.weight * n;
        sizes.push_back(std::stol(m.str()));
    }
    AncillaPlan plan = plan_blocks(payoffs, sizes);

    std::vector<Branch> expanded;
    Rational w = Rational(1) / n;
    for (const Rational& p : plan.combined_payoffs()) expanded.push_back({p, w, Rational(0)});
    ExactState equal(std::move(expanded));

    RuleStep step;
    step.rule = Rule::Expand;
    step.subject = SymState::from_exact(state);
    step.params.plan = plan;
    return {std::move(equal), std::move(step)};
}

} // namespace qgame
