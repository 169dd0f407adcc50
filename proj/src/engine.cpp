#include "qgame/engine.hpp"

#include <algorithm>
#include <set>

#include "qgame/ancilla.hpp"
#include "qgame/squeeze.hpp"

namespace qgame {

namespace {

bool is_power_of_two(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Builds steps bottom-up. Symbolic payoffs carry the open unknowns of the
// fixpoint arguments; `env` tracks their eventual concrete values so the
// builder can order payoffs numerically while emitting formal steps.
class TraceBuilder {
  public:
    std::vector<RuleStep> steps;

    int next_id() const { return static_cast<int>(steps.size()); }

    int add(RuleStep s) {
        s.id = next_id();
        steps.push_back(std::move(s));
        return steps.back().id;
    }

    const Affine& value_of(int id) const { return steps[id].claim.value; }
    const SymState& subject_of(int id) const { return steps[id].subject; }

    Rational eval(const Affine& a) const { return a.eval(env_); }

    int eig(const Affine& payoff) {
        RuleStep s;
        s.rule = Rule::Eig;
        s.subject.branches.push_back({payoff, Rational(1), Rational(0)});
        s.claim = {Claim::Kind::Value, payoff};
        return add(std::move(s));
    }

    // The pair argument: assume the value, shift by -(p+q), negate, observe
    // that the two transformed games are the same multiset, solve.
    int pair_value(const Affine& p, const Affine& q) {
        SymState pair_state = sym_equal_weights({p, q});
        Affine mean = (p + q).scale(Rational(1, 2));

        int assume_id = next_id();
        {
            RuleStep s;
            s.rule = Rule::Eqn;
            s.subject = pair_state;
            s.claim = {Claim::Kind::Value, Affine::unknown(assume_id)};
            s.params.eqn = EqnParams{EqnParams::Kind::Assume, -1, {}, {}, {}, {}};
            add(std::move(s));
        }
        env_[assume_id] = eval(mean);
        Affine u = Affine::unknown(assume_id);

        Affine k = -(p + q);
        int shift_id;
        {
            RuleStep s;
            s.rule = Rule::Shift;
            s.premises = {assume_id};
            s.subject = sym_shift(pair_state, k);
            s.claim = {Claim::Kind::Value, u + k};
            s.params.shift_k = k;
            shift_id = add(std::move(s));
        }
        int zero_id;
        {
            RuleStep s;
            s.rule = Rule::Zero;
            s.premises = {assume_id};
            s.subject = sym_negate(pair_state);
            s.claim = {Claim::Kind::Value, -u};
            zero_id = add(std::move(s));
        }
        RuleStep s;
        s.rule = Rule::Eqn;
        s.premises = {shift_id, zero_id};
        s.subject = pair_state;
        s.claim = {Claim::Kind::Value, mean};
        s.params.eqn = EqnParams{EqnParams::Kind::Solve, assume_id, Rational(1), Rational(-1), k,
                                 Affine(Rational(0))};
        return add(std::move(s));
    }

    // Equal-amplitude game over distinct payoffs, sorted ascending by their
    // instantiated values. Returns the step claiming the mean.
    int equal_set(std::vector<Affine> payoffs) {
        sort_by_value(payoffs);
        size_t n = payoffs.size();
        if (n == 1) return eig(payoffs[0]);
        if (n == 2) return pair_value(payoffs[0], payoffs[1]);
        if (is_power_of_two(n)) return power_tree(payoffs);

        // Non-power sizes only arise with concrete payoffs: the padded sets
        // are powers of two and their halves stay powers of two.
        Affine mean = sum(payoffs).scale(Rational(1) / Rational(static_cast<long>(n)));
        Rational mean_value = eval(mean);
        bool mean_in_set = false;
        for (const Affine& p : payoffs)
            if (eval(p) == mean_value) mean_in_set = true;
        return mean_in_set ? split(payoffs, mean) : descend(payoffs, mean);
    }

  private:
    std::map<int, Rational> env_;

    void sort_by_value(std::vector<Affine>& payoffs) const {
        std::sort(payoffs.begin(), payoffs.end(), [this](const Affine& a, const Affine& b) {
            Rational va = eval(a), vb = eval(b);
            if (va != vb) return va < vb;
            return a < b;
        });
    }

    static Affine sum(const std::vector<Affine>& payoffs) {
        Affine s;
        for (const Affine& p : payoffs) s = s + p;
        return s;
    }

    // n = 2^m: derive both halves, the pair of their means, then substitute
    // the halves back for the means.
    int power_tree(const std::vector<Affine>& payoffs) {
        size_t half = payoffs.size() / 2;
        std::vector<Affine> lo(payoffs.begin(), payoffs.begin() + half);
        std::vector<Affine> hi(payoffs.begin() + half, payoffs.end());
        int lo_id = equal_set(lo);
        int hi_id = equal_set(hi);
        Affine m1 = value_of(lo_id), m2 = value_of(hi_id);
        int pair_id = pair_value(m1, m2);

        RuleStep s;
        s.rule = Rule::Subst;
        SubstParams sp;
        sp.mode = SubstParams::Mode::ByValue;
        sp.outer = sym_equal_weights({m1, m2});
        sp.map = {{m1, lo_id}, {m2, hi_id}};
        s.premises = {pair_id, lo_id, hi_id};
        s.subject = sym_compose(sp.outer, {{m1, subject_of(lo_id)}, {m2, subject_of(hi_id)}});
        s.claim = {Claim::Kind::Value, value_of(pair_id)};
        s.params.subst = std::move(sp);
        return add(std::move(s));
    }

    // mean(S) is a member: peel it off, derive the rest (same mean), and
    // recombine the two equal-valued parts.
    int split(const std::vector<Affine>& payoffs, const Affine& mean) {
        Rational mean_value = eval(mean);
        std::vector<Affine> rest;
        bool removed = false;
        for (const Affine& p : payoffs) {
            if (!removed && eval(p) == mean_value) {
                removed = true;
                continue;
            }
            rest.push_back(p);
        }
        long n = static_cast<long>(payoffs.size());
        int rest_id = equal_set(rest);
        int eig_id = eig(mean);

        RuleStep s;
        s.rule = Rule::Subst;
        SubstParams sp;
        sp.mode = SubstParams::Mode::EqualParts;
        sp.outer.branches = {{Affine(0L), Rational(n - 1) / Rational(n), Rational(0)},
                             {Affine(1L), Rational(1) / Rational(n), Rational(0)}};
        sp.outer.canonicalize();
        sp.map = {{Affine(0L), rest_id}, {Affine(1L), eig_id}};
        s.premises = {rest_id, eig_id};
        s.subject = sym_compose(sp.outer,
                                {{Affine(0L), subject_of(rest_id)}, {Affine(1L), subject_of(eig_id)}});
        s.claim = {Claim::Kind::Value, mean};
        s.params.subst = std::move(sp);
        return add(std::move(s));
    }

    // mean(S) is not a member: assume u = V[equal(S)], pad S with u-valued
    // games up to the next power of two, and equate the equal-parts composite
    // value u with the padded tree's mean.
    int descend(const std::vector<Affine>& payoffs, const Affine& mean) {
        long n = static_cast<long>(payoffs.size());
        long full = 1;
        while (full < n + 1) full *= 2;
        long deficit = full - n;

        SymState set_state = sym_equal_weights(payoffs);
        int assume_id = next_id();
        {
            RuleStep s;
            s.rule = Rule::Eqn;
            s.subject = set_state;
            s.claim = {Claim::Kind::Value, Affine::unknown(assume_id)};
            s.params.eqn = EqnParams{EqnParams::Kind::Assume, -1, {}, {}, {}, {}};
            add(std::move(s));
        }
        env_[assume_id] = eval(mean);
        Affine u = Affine::unknown(assume_id);

        // Padding offsets land strictly outside the payoff span, so all
        // instantiated payoffs stay distinct.
        Rational lo = eval(payoffs.front()), hi = eval(payoffs.back());
        Rational mean_value = eval(mean);
        if (mean_value < lo) lo = mean_value;
        if (mean_value > hi) hi = mean_value;
        Rational spread = Rational(1) + hi - lo;

        Rational part_weight = Rational(1) / Rational(full);
        std::vector<Affine> padded = payoffs;
        std::vector<std::pair<int, Rational>> parts; // premise id, mixture weight
        parts.emplace_back(assume_id, Rational(n) / Rational(full));
        long pairs = deficit / 2;
        if (deficit % 2 == 1) {
            parts.emplace_back(eig(u), part_weight);
            padded.push_back(u);
        }
        for (long j = 1; j <= pairs; ++j) {
            Affine delta(Rational(j) * spread);
            int pid = pair_value(u - delta, u + delta);
            parts.emplace_back(pid, Rational(2) / Rational(full));
            padded.push_back(u - delta);
            padded.push_back(u + delta);
        }

        int subst_id;
        {
            RuleStep s;
            s.rule = Rule::Subst;
            SubstParams sp;
            sp.mode = SubstParams::Mode::EqualParts;
            std::vector<std::pair<Affine, SymState>> subs;
            for (size_t i = 0; i < parts.size(); ++i) {
                Affine placeholder(static_cast<long>(i));
                sp.outer.branches.push_back({placeholder, parts[i].second, Rational(0)});
                sp.map.push_back({placeholder, parts[i].first});
                subs.emplace_back(placeholder, subject_of(parts[i].first));
                s.premises.push_back(parts[i].first);
            }
            sp.outer.canonicalize();
            s.subject = sym_compose(sp.outer, subs);
            s.claim = {Claim::Kind::Value, u};
            s.params.subst = std::move(sp);
            subst_id = add(std::move(s));
        }

        int tree_id = equal_set(padded);

        // u = (deficit*u + sum(S)) / full  =>  u = mean(S)
        Affine tree_mean = value_of(tree_id);
        Rational c = tree_mean.coeff(assume_id);
        Affine d = tree_mean.drop(assume_id);
        RuleStep s;
        s.rule = Rule::Eqn;
        s.premises = {subst_id, tree_id};
        s.subject = set_state;
        s.claim = {Claim::Kind::Value, mean};
        s.params.eqn =
            EqnParams{EqnParams::Kind::Solve, assume_id, Rational(1), c, Affine(Rational(0)), d};
        return add(std::move(s));
    }
};

// Derives a zero-phase state; returns the concluding step id.
int derive_core(TraceBuilder& tb, const ExactState& state) {
    const auto& branches = state.branches();
    if (branches.size() == 1) return tb.eig(Affine(branches[0].payoff));

    Rational equal_weight = Rational(1) / Rational(static_cast<long>(branches.size()));
    bool all_equal = true;
    for (const Branch& b : branches)
        if (b.weight != equal_weight) all_equal = false;

    std::vector<Affine> payoffs;
    if (all_equal) {
        for (const Branch& b : branches) payoffs.emplace_back(b.payoff);
        return tb.equal_set(std::move(payoffs));
    }

    auto [expanded, step] = expand_to_equal(state);
    for (const Branch& b : expanded.branches()) payoffs.emplace_back(b.payoff);
    int tree_id = tb.equal_set(std::move(payoffs));
    step.premises = {tree_id};
    step.claim = {Claim::Kind::Value, tb.value_of(tree_id)};
    return tb.add(std::move(step));
}

ExactState strip_phases(const ExactState& state) {
    std::vector<Branch> bs = state.branches();
    for (Branch& b : bs) b.phase = Rational(0);
    return ExactState(std::move(bs));
}

} // namespace

std::pair<Rational, ProofTrace> derive_value(const ExactState& state) {
    TraceBuilder tb;
    bool has_phases = false;
    for (const Branch& b : state.branches())
        if (!b.phase.is_zero()) has_phases = true;

    int concl = derive_core(tb, has_phases ? strip_phases(state) : state);
    if (has_phases) {
        RuleStep s;
        s.rule = Rule::Phase;
        s.premises = {concl};
        s.subject = SymState::from_exact(state);
        s.claim = {Claim::Kind::Value, tb.value_of(concl)};
        concl = tb.add(std::move(s));
    }
    Rational value = tb.value_of(concl).constant();
    return {std::move(value), ProofTrace{std::move(tb.steps), concl}};
}

std::pair<Rational, ProofTrace> derive_equal_set(const std::vector<Rational>& payoffs) {
    if (payoffs.empty()) throw Error(Errc::EmptyState, "no payoffs");
    std::set<Rational> seen;
    std::vector<Affine> affs;
    for (const Rational& p : payoffs) {
        if (!seen.insert(p).second) throw Error(Errc::DuplicatePayoff, "payoff " + p.str());
        affs.emplace_back(p);
    }
    TraceBuilder tb;
    int concl = tb.equal_set(std::move(affs));
    Rational value = tb.value_of(concl).constant();
    return {std::move(value), ProofTrace{std::move(tb.steps), concl}};
}

std::pair<Interval, ProofTrace> derive_interval(const NumericState& state, const Rational& eps) {
    if (eps.sign() <= 0) throw std::domain_error("eps must be positive");

    ExactState dominated = ExactState({{Rational(0), Rational(1), Rational(0)}});
    ExactState dominating = dominated;
    Rational grid(1);
    if (state.size() == 1) {
        dominated = dominating =
            ExactState({{state.branches()[0].payoff, Rational(1), Rational(0)}});
    } else if (enclosure_slack(state).is_zero()) {
        std::vector<Branch> bs;
        for (const NumericBranch& b : state.branches())
            bs.push_back({b.payoff, b.weight_lo, Rational(0)});
        dominated = dominating = ExactState(std::move(bs));
    } else {
        grid = squeeze_grid(state, eps); // throws EnclosureTooWide
        dominated = round_dominated(state, grid);
        dominating = round_dominating(state, grid);
    }

    TraceBuilder tb;
    bool same = dominated == dominating;
    int lo_concl = derive_core(tb, dominated);
    int hi_concl = same ? lo_concl : derive_core(tb, dominating);
    Rational lo_value = tb.value_of(lo_concl).constant();
    Rational hi_value = tb.value_of(hi_concl).constant();

    auto dom_step = [&](DomParams::Direction dir, int premise, const ExactState& rounded) {
        RuleStep s;
        s.rule = Rule::Dom;
        s.premises = {premise};
        s.subject = SymState::from_exact(rounded);
        s.numeric_subject = state;
        s.claim = {dir == DomParams::Direction::Lower ? Claim::Kind::LowerBound
                                                      : Claim::Kind::UpperBound,
                   tb.value_of(premise)};
        s.params.dom = DomParams{dir, grid};
        return tb.add(std::move(s));
    };
    dom_step(DomParams::Direction::Lower, lo_concl, dominated);
    int concl = dom_step(DomParams::Direction::Upper, hi_concl, dominating);

    return {Interval(std::move(lo_value), std::move(hi_value)),
            ProofTrace{std::move(tb.steps), concl}};
}

} // namespace qgame
