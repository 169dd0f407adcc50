#include "qgame/checker.hpp"

#include <algorithm>
#include <set>

#include "qgame/ancilla.hpp"

namespace qgame {

namespace {

struct Rejection {
    int step;
    std::string reason;
};

#define CHECK(cond, msg)                      \
    do {                                      \
        if (!(cond)) throw Rejection{s.id, msg}; \
    } while (0)

void structural(const ProofTrace& t) {
    if (t.steps.empty()) throw Error(Errc::MalformedTrace, "empty trace");
    for (size_t i = 0; i < t.steps.size(); ++i) {
        const RuleStep& s = t.steps[i];
        if (s.id != static_cast<int>(i))
            throw Error(Errc::MalformedTrace, "step ids must be sequential");
        for (int p : s.premises)
            if (p < 0 || p >= s.id)
                throw Error(Errc::MalformedTrace,
                            "premise " + std::to_string(p) + " does not precede step " +
                                std::to_string(s.id));
    }
    if (t.conclusion < 0 || t.conclusion >= static_cast<int>(t.steps.size()))
        throw Error(Errc::MalformedTrace, "conclusion id out of range");
}

const Affine& premise_value(const RuleStep& s, const RuleStep& prem) {
    if (prem.claim.kind != Claim::Kind::Value)
        throw Rejection{s.id, "premise " + std::to_string(prem.id) + " does not claim a value"};
    return prem.claim.value;
}

void check_eig(const RuleStep& s) {
    CHECK(s.premises.empty(), "R_EIG takes no premises");
    CHECK(s.subject.branches.size() == 1, "R_EIG subject must have one branch");
    CHECK(s.claim.value == s.subject.branches[0].payoff, "claim is not the eigenvalue");
}

void check_const(const RuleStep& s) {
    CHECK(s.premises.empty(), "R_CONST takes no premises");
    CHECK(!s.subject.branches.empty(), "empty subject");
    for (const SymBranch& b : s.subject.branches)
        CHECK(b.payoff == s.subject.branches[0].payoff, "payoffs are not all equal");
    CHECK(s.claim.value == s.subject.branches[0].payoff, "claim is not the common payoff");
}

void check_shift(const RuleStep& s, const ProofTrace& t) {
    CHECK(s.premises.size() == 1, "R_SHIFT takes one premise");
    CHECK(s.params.shift_k.has_value(), "missing shift constant");
    const RuleStep& prem = t.steps[s.premises[0]];
    const Affine& v = premise_value(s, prem);
    CHECK(s.subject == sym_shift(prem.subject, *s.params.shift_k),
          "subject is not the shifted premise state");
    CHECK(s.claim.value == v + *s.params.shift_k, "claim is not premise value + k");
}

void check_zero(const RuleStep& s, const ProofTrace& t) {
    CHECK(s.premises.size() == 1, "R_ZERO takes one premise");
    const RuleStep& prem = t.steps[s.premises[0]];
    const Affine& v = premise_value(s, prem);
    CHECK(s.subject == sym_negate(prem.subject), "subject is not the negated premise state");
    CHECK(s.claim.value == -v, "claim is not the negated premise value");
}

void check_phase(const RuleStep& s, const ProofTrace& t) {
    CHECK(s.premises.size() == 1, "R_PHASE takes one premise");
    const RuleStep& prem = t.steps[s.premises[0]];
    const Affine& v = premise_value(s, prem);
    CHECK(s.subject.branches.size() == prem.subject.branches.size(),
          "subject differs beyond phases");
    for (size_t i = 0; i < s.subject.branches.size(); ++i) {
        const SymBranch &a = s.subject.branches[i], &b = prem.subject.branches[i];
        CHECK(a.payoff == b.payoff && a.weight == b.weight, "subject differs beyond phases");
        CHECK(a.phase.sign() >= 0 && a.phase < Rational(1), "phase outside [0, 1)");
    }
    CHECK(s.claim.value == v, "claim must equal the premise value");
}

void check_subst(const RuleStep& s, const ProofTrace& t) {
    CHECK(s.params.subst.has_value(), "missing substitution params");
    const SubstParams& sp = *s.params.subst;
    CHECK(!sp.map.empty(), "empty substitution map");
    CHECK(sp.outer.zero_phases(), "outer state must have zero phases");
    for (size_t i = 0; i < sp.map.size(); ++i)
        for (size_t j = i + 1; j < sp.map.size(); ++j)
            CHECK(!(sp.map[i].payoff == sp.map[j].payoff), "duplicate substituted payoff");

    size_t base = sp.mode == SubstParams::Mode::ByValue ? 1 : 0;
    CHECK(s.premises.size() == base + sp.map.size(), "premise count does not match map");
    for (size_t i = 0; i < sp.map.size(); ++i)
        CHECK(sp.map[i].premise == s.premises[base + i], "map premises must mirror premise list");

    std::vector<std::pair<Affine, SymState>> subs;
    for (const SubstEntry& e : sp.map) {
        const RuleStep& prem = t.steps[e.premise];
        const Affine& v = premise_value(s, prem);
        CHECK(prem.subject.zero_phases(), "sub-game must have zero phases");
        bool in_outer = false;
        for (const SymBranch& b : sp.outer.branches)
            if (b.payoff == e.payoff) in_outer = true;
        CHECK(in_outer, "substituted payoff not in outer state");
        if (sp.mode == SubstParams::Mode::ByValue)
            CHECK(v == e.payoff, "sub-game value must equal the payoff it replaces");
        subs.emplace_back(e.payoff, prem.subject);
    }

    Affine claimed;
    if (sp.mode == SubstParams::Mode::ByValue) {
        const RuleStep& outer_prem = t.steps[s.premises[0]];
        CHECK(outer_prem.subject == sp.outer, "outer premise subject mismatch");
        claimed = premise_value(s, outer_prem);
    } else {
        CHECK(sp.map.size() == sp.outer.branches.size(), "equal-parts must substitute every branch");
        claimed = premise_value(s, t.steps[s.premises[0]]);
        for (int p : s.premises)
            CHECK(premise_value(s, t.steps[p]) == claimed, "part values are not all equal");
    }

    try {
        CHECK(s.subject == sym_compose(sp.outer, subs), "subject is not the composed state");
    } catch (const Error& e) {
        if (e.code() == Errc::PayoffCollision) throw Rejection{s.id, "supports not disjoint"};
        throw;
    }
    CHECK(s.claim.value == claimed, "claim mismatch");
}

// Tracks assume/solve bookkeeping across the pass.
struct EqnState {
    std::set<int> assumes;
    std::map<int, Affine> solutions; // assume id -> solution at solve time
};

void check_eqn(const RuleStep& s, const ProofTrace& t, EqnState& eqn) {
    CHECK(s.params.eqn.has_value(), "missing equation params");
    const EqnParams& ep = *s.params.eqn;
    if (ep.kind == EqnParams::Kind::Assume) {
        CHECK(s.premises.empty(), "assume takes no premises");
        CHECK(s.claim.value == Affine::unknown(s.id), "assume must claim its own unknown");
        eqn.assumes.insert(s.id);
        return;
    }
    CHECK(s.premises.size() == 2, "solve takes two premises");
    CHECK(eqn.assumes.count(ep.unknown), "unknown does not name an assume step");
    CHECK(!eqn.solutions.count(ep.unknown), "hypothesis solved twice");
    const RuleStep& assume = t.steps[ep.unknown];
    const RuleStep& p0 = t.steps[s.premises[0]];
    const RuleStep& p1 = t.steps[s.premises[1]];
    CHECK(p0.subject == p1.subject, "premise subjects are not the same game");
    CHECK(ep.b.coeff(ep.unknown).is_zero() && ep.d.coeff(ep.unknown).is_zero(),
          "affine remainders must not contain the unknown");
    Affine u = Affine::unknown(ep.unknown);
    CHECK(premise_value(s, p0) == u.scale(ep.a) + ep.b, "premise does not match a*u + b");
    CHECK(premise_value(s, p1) == u.scale(ep.c) + ep.d, "premise does not match c*u + d");
    CHECK(ep.a != ep.c, "equation is degenerate");
    Affine solution = (ep.d - ep.b).scale(Rational(1) / (ep.a - ep.c));
    CHECK(s.claim.value == solution, "equation solution mismatch");
    CHECK(s.subject == assume.subject, "solve subject must be the hypothesised game");
    eqn.solutions.emplace(ep.unknown, solution);
}

void check_expand(const RuleStep& s, const ProofTrace& t) {
    CHECK(s.premises.size() == 1, "R_EXPAND takes one premise");
    CHECK(s.params.plan.has_value(), "missing ancilla plan");
    const AncillaPlan& plan = *s.params.plan;
    CHECK(s.subject.concrete(), "expansion base must be concrete");
    CHECK(s.subject.zero_phases(), "expansion base must have zero phases");
    if (auto why = plan_error(plan)) throw Rejection{s.id, *why};

    CHECK(plan.base_payoffs.size() == s.subject.branches.size(),
          "plan blocks do not match subject branches");
    Rational n(plan.total());
    for (size_t a = 0; a < plan.base_payoffs.size(); ++a) {
        const SymBranch& b = s.subject.branches[a];
        CHECK(b.payoff == Affine(plan.base_payoffs[a]), "plan base payoff mismatch");
        CHECK(b.weight == Rational(plan.block_sizes[a]) / n,
              "block size does not match branch weight");
    }

    std::vector<Affine> combined;
    for (const Rational& p : plan.combined_payoffs()) combined.emplace_back(p);
    const RuleStep& prem = t.steps[s.premises[0]];
    const Affine& v = premise_value(s, prem);
    CHECK(prem.subject == sym_equal_weights(combined),
          "premise subject is not the expanded equal-amplitude state");
    CHECK(s.claim.value == v, "claim mismatch");
}

void check_dom(const RuleStep& s, const ProofTrace& t) {
    CHECK(s.premises.size() == 1, "R_DOM takes one premise");
    CHECK(s.params.dom.has_value(), "missing dominance params");
    CHECK(s.numeric_subject.has_value(), "R_DOM needs the enclosure state");
    bool lower = s.params.dom->direction == DomParams::Direction::Lower;
    CHECK(s.claim.kind == (lower ? Claim::Kind::LowerBound : Claim::Kind::UpperBound),
          "claim bound direction mismatch");
    CHECK(s.claim.value.is_concrete(), "bound claims must be concrete");

    const RuleStep& prem = t.steps[s.premises[0]];
    CHECK(prem.subject == s.subject, "premise must derive the rounded state");
    CHECK(s.claim.value == premise_value(s, prem), "claim mismatch");

    ExactState rounded = ExactState({{Rational(0), Rational(1), Rational(0)}});
    try {
        rounded = s.subject.to_exact();
    } catch (const std::exception&) {
        throw Rejection{s.id, "rounded state is not a concrete game"};
    }
    const NumericState& numeric = *s.numeric_subject;

    std::set<Rational> enclosure_payoffs;
    for (const NumericBranch& b : numeric.branches()) enclosure_payoffs.insert(b.payoff);
    for (const Branch& b : rounded.branches())
        CHECK(enclosure_payoffs.count(b.payoff), "rounded payoffs outside enclosure support");

    // Top-cumulative dominance against the enclosure bounds, checked at
    // every enclosure payoff.
    size_t k = numeric.size();
    Rational bound_sum;
    for (size_t j = k; j-- > 0;) {
        const NumericBranch& nb = numeric.branches()[j];
        Rational rounded_cum;
        for (const Branch& b : rounded.branches())
            if (b.payoff >= nb.payoff) rounded_cum += b.weight;
        if (lower) {
            bound_sum += nb.weight_lo;
            if (j > 0) CHECK(rounded_cum <= bound_sum, "dominance violated");
        } else {
            bound_sum += nb.weight_hi;
            Rational cap = bound_sum < Rational(1) ? bound_sum : Rational(1);
            CHECK(rounded_cum >= cap, "dominance violated");
        }
    }
}

} // namespace

Verdict verify(const ProofTrace& t) {
    structural(t);
    EqnState eqn;
    try {
        for (const RuleStep& s : t.steps) {
            if (s.rule != Rule::Dom) {
                CHECK(s.claim.kind == Claim::Kind::Value, "claim type mismatch");
                CHECK(!s.numeric_subject.has_value(), "unexpected enclosure subject");
            }
            switch (s.rule) {
                case Rule::Eig: check_eig(s); break;
                case Rule::Const: check_const(s); break;
                case Rule::Shift: check_shift(s, t); break;
                case Rule::Zero: check_zero(s, t); break;
                case Rule::Phase: check_phase(s, t); break;
                case Rule::Subst: check_subst(s, t); break;
                case Rule::Eqn: check_eqn(s, t, eqn); break;
                case Rule::Expand: check_expand(s, t); break;
                case Rule::Dom: check_dom(s, t); break;
            }
        }

        // Every hypothesis must be discharged exactly once.
        for (int a : eqn.assumes)
            if (!eqn.solutions.count(a)) throw Rejection{a, "unsolved hypothesis"};

        // Resolve the unknowns to concrete values (solutions may reference
        // enclosing unknowns; iterate to a fixpoint).
        std::map<int, Rational> env;
        std::map<int, Affine> pending = eqn.solutions;
        bool progress = true;
        while (!pending.empty() && progress) {
            progress = false;
            for (auto it = pending.begin(); it != pending.end();) {
                Affine reduced = it->second.substitute(env);
                if (reduced.is_concrete()) {
                    env[it->first] = reduced.constant();
                    it = pending.erase(it);
                    progress = true;
                } else {
                    it->second = std::move(reduced);
                    ++it;
                }
            }
        }
        if (!pending.empty())
            throw Rejection{pending.begin()->first, "unknowns cannot be resolved"};

        // Every state must instantiate to a valid game: distinct payoffs
        // (the "u not in S" side conditions), weights summing to 1.
        auto validate = [&env](const SymState& st, int step_id) {
            std::vector<Rational> values;
            Rational total;
            for (const SymBranch& b : st.branches) {
                Rational v;
                try {
                    v = b.payoff.eval(env);
                } catch (const std::exception&) {
                    throw Rejection{step_id, "payoff references an unknown with no hypothesis"};
                }
                values.push_back(std::move(v));
                if (b.weight.sign() <= 0 || b.weight > Rational(1))
                    throw Rejection{step_id, "weight outside (0, 1]"};
                if (b.phase.sign() < 0 || b.phase >= Rational(1))
                    throw Rejection{step_id, "phase outside [0, 1)"};
                total += b.weight;
            }
            if (total != Rational(1)) throw Rejection{step_id, "weights do not sum to 1"};
            std::sort(values.begin(), values.end());
            for (size_t i = 1; i < values.size(); ++i)
                if (values[i] == values[i - 1])
                    throw Rejection{step_id, "instantiated payoffs collide"};
        };
        for (const RuleStep& s : t.steps) {
            validate(s.subject, s.id);
            if (s.params.subst) validate(s.params.subst->outer, s.id);
        }

        if (!t.steps[t.conclusion].claim.value.is_concrete())
            throw Rejection{t.conclusion, "conclusion claim is not concrete"};
    } catch (const Rejection& r) {
        return Verdict{false, r.step, r.reason};
    }
    return Verdict{true, std::nullopt, ""};
}

} // namespace qgame
