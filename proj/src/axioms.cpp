#include "qgame/axioms.hpp"

#include <algorithm>

#include <gmp.h>

namespace qgame {

namespace {

// Outward enclosure of x^(1/d) for rational x > 0, accurate to ~10^-30.
RatInterval root_interval(const Rational& x, unsigned long d) {
    if (d == 1) return RatInterval(x);
    Rational scale(1);
    for (int i = 0; i < 30; ++i) scale *= Rational(10);
    Rational scale_d(1);
    for (unsigned long i = 0; i < d; ++i) scale_d *= scale;
    Rational a = (x * scale_d).floor();
    Rational lo = Rational::int_root_floor(a, d) / scale;
    Rational r = Rational::int_root_floor(a + Rational(1), d);
    Rational rd(1);
    for (unsigned long i = 0; i < d; ++i) rd *= r;
    Rational hi = (rd == a + Rational(1) ? r : r + Rational(1)) / scale;
    return {lo, hi};
}

Rational pow_exact(const Rational& p, long n) {
    bool neg = n < 0;
    unsigned long e = neg ? -n : n;
    Rational r(1), base = p;
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return neg ? Rational(1) / r : r;
}

// p^beta as an enclosure; exact when beta is an integer.
RatInterval pow_interval(const Rational& p, const Rational& beta) {
    long num = std::stol(beta.numerator().str());
    if (beta.is_integer()) return RatInterval(pow_exact(p, num));
    unsigned long den = std::stoul(beta.denominator().str());
    return root_interval(pow_exact(p, num), den);
}

uint64_t splitmix64(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

ExactState strip_phases(const ExactState& s) {
    std::vector<Branch> bs = s.branches();
    for (Branch& b : bs) b.phase = Rational(0);
    return ExactState(std::move(bs));
}

// How many nearby suite games each game is paired with for the
// substitution checks; keeps the audit near-linear in the suite size.
constexpr size_t kPartnerWindow = 20;

} // namespace

ValueFunctional::ValueFunctional(std::string tag, Rational beta)
    : tag_(std::move(tag)), beta_(std::move(beta)) {}

std::optional<Rational> ValueFunctional::exact_value(const ExactState& s) const {
    if (s.size() == 1) return s.branches()[0].payoff;
    if (beta_.is_integer()) {
        Rational num, den;
        for (const Branch& b : s.branches()) {
            Rational q = pow_exact(b.weight, std::stol(beta_.numerator().str()));
            num += q * b.payoff;
            den += q;
        }
        return num / den;
    }
    // Equal weights: the normalized beta-weights are 1/n for every beta.
    const Rational& w0 = s.branches()[0].weight;
    for (const Branch& b : s.branches())
        if (b.weight != w0) return std::nullopt;
    Rational mean;
    for (const Branch& b : s.branches()) mean += b.payoff;
    return mean / Rational(static_cast<long>(s.size()));
}

RatInterval ValueFunctional::value(const ExactState& s) const {
    if (auto v = exact_value(s)) return RatInterval(*v);
    RatInterval num, den;
    for (const Branch& b : s.branches()) {
        RatInterval q = pow_interval(b.weight, beta_);
        num = num + q.scale(b.payoff);
        den = den + q;
    }
    // den.lo > 0: weights are positive and the enclosures are outward.
    Rational corners[4] = {num.lo / den.lo, num.lo / den.hi, num.hi / den.lo, num.hi / den.hi};
    Rational lo = corners[0], hi = corners[0];
    for (const Rational& c : corners) {
        if (c < lo) lo = c;
        if (c > hi) hi = c;
    }
    return {std::move(lo), std::move(hi)};
}

const char* axiom_name(ViolationReport::Axiom a) {
    switch (a) {
        case ViolationReport::Axiom::ZeroSum: return "ZERO_SUM";
        case ViolationReport::Axiom::Shift: return "SHIFT";
        case ViolationReport::Axiom::Substitution: return "SUBSTITUTION";
        case ViolationReport::Axiom::Phase: return "PHASE";
    }
    return "?";
}

std::vector<ExactState> generate_suite(uint64_t seed, size_t count, size_t max_branches) {
    if (count < 1 || max_branches < 2) throw std::domain_error("generate_suite: bad arguments");
    uint64_t state = seed;
    std::vector<ExactState> suite;
    suite.reserve(count);
    while (suite.size() < count) {
        size_t k = 2 + splitmix64(state) % (max_branches - 1);

        std::vector<Rational> payoffs;
        while (payoffs.size() < k) {
            long p = static_cast<long>(splitmix64(state) % 41) - 20;
            Rational rp(p);
            if (std::find(payoffs.begin(), payoffs.end(), rp) == payoffs.end())
                payoffs.push_back(std::move(rp));
        }

        std::vector<Rational> weights;
        if (splitmix64(state) % 4 == 0) {
            for (size_t i = 0; i < k; ++i) weights.emplace_back(Rational(1) / Rational((long)k));
        } else {
            long d = static_cast<long>(k) + static_cast<long>(splitmix64(state) % (61 - k));
            std::vector<long> cuts;
            while (cuts.size() + 1 < k) {
                long c = 1 + static_cast<long>(splitmix64(state) % (d - 1));
                if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
            }
            std::sort(cuts.begin(), cuts.end());
            long prev = 0;
            for (long c : cuts) {
                weights.emplace_back(Rational(c - prev) / Rational(d));
                prev = c;
            }
            weights.emplace_back(Rational(d - prev) / Rational(d));
        }

        bool phased = splitmix64(state) % 2 == 0;
        std::vector<Branch> bs;
        for (size_t i = 0; i < k; ++i) {
            Rational phase(0);
            if (phased) phase = Rational(static_cast<long>(splitmix64(state) % 12), 12);
            bs.push_back({payoffs[i], weights[i], phase});
        }
        suite.push_back(ExactState(std::move(bs)));
    }
    return suite;
}

namespace {

ordered_json interval_json(const RatInterval& iv) {
    ordered_json j;
    j["lo"] = iv.lo.str();
    j["hi"] = iv.hi.str();
    return j;
}

} // namespace

ordered_json violation_to_json(const ViolationReport& v) {
    ordered_json j;
    j["axiom"] = axiom_name(v.axiom);
    j["game_index"] = v.game_index;
    if (v.partner_index) j["partner_index"] = *v.partner_index;
    j["transformation"] = v.transformation;
    j["witness"] = v.witness;
    j["lhs"] = interval_json(v.lhs);
    j["rhs"] = interval_json(v.rhs);
    return j;
}

ordered_json violations_to_json(const std::vector<ViolationReport>& vs) {
    ordered_json arr = ordered_json::array();
    for (const ViolationReport& v : vs) arr.push_back(violation_to_json(v));
    return arr;
}

std::vector<ViolationReport> audit(const ValueFunctional& functional,
                                   const std::vector<ExactState>& suite) {
    std::vector<ViolationReport> out;

    std::vector<RatInterval> values;
    std::vector<std::optional<Rational>> exact;
    values.reserve(suite.size());
    for (const ExactState& s : suite) {
        values.push_back(functional.value(s));
        exact.push_back(functional.exact_value(s));
    }

    auto report = [&](ViolationReport::Axiom axiom, size_t i, std::optional<size_t> j,
                      std::string transformation, ordered_json witness, RatInterval lhs,
                      RatInterval rhs) {
        out.push_back({axiom, i, j, std::move(transformation), std::move(witness), std::move(lhs),
                       std::move(rhs)});
    };

    const Rational shifts[3] = {Rational(1), Rational(-2), Rational(1, 3)};
    for (size_t i = 0; i < suite.size(); ++i) {
        const ExactState& s = suite[i];

        // Zero-sum rule: V(banker game) = -V.
        {
            RatInterval lhs = functional.value(negate_payoffs(s));
            RatInterval rhs = -values[i];
            if (lhs.disjoint_from(rhs)) {
                ordered_json w;
                w["game"] = state_to_json(s);
                report(ViolationReport::Axiom::ZeroSum, i, std::nullopt, "V(negate(s)) != -V(s)",
                       std::move(w), lhs, rhs);
            }
        }

        // Shift rule: V(s + k) = V(s) + k.
        for (const Rational& k : shifts) {
            RatInterval lhs = functional.value(shift_payoffs(s, k));
            RatInterval rhs = values[i] + RatInterval(k);
            if (lhs.disjoint_from(rhs)) {
                ordered_json w;
                w["game"] = state_to_json(s);
                w["k"] = k.str();
                report(ViolationReport::Axiom::Shift, i, std::nullopt,
                       "V(shift(s, " + k.str() + ")) != V(s) + " + k.str(), std::move(w), lhs,
                       rhs);
            }
        }

        // Substitution over nearby pairs: equal-value mixtures and by-value
        // compositions.
        for (size_t j = i + 1; j < suite.size() && j <= i + kPartnerWindow; ++j) {
            const ExactState& partner = suite[j];

            if (exact[i] && exact[j] && *exact[i] == *exact[j]) {
                try {
                    std::vector<Branch> bs;
                    for (const Branch& b : s.branches())
                        bs.push_back({b.payoff, b.weight / Rational(2), Rational(0)});
                    for (const Branch& b : partner.branches())
                        bs.push_back({b.payoff, b.weight / Rational(2), Rational(0)});
                    ExactState mixture((std::vector<Branch>(bs)));
                    RatInterval lhs = functional.value(mixture);
                    RatInterval rhs(*exact[i]);
                    if (lhs.disjoint_from(rhs)) {
                        ordered_json w;
                        w["game"] = state_to_json(s);
                        w["partner"] = state_to_json(partner);
                        w["composite"] = state_to_json(mixture);
                        report(ViolationReport::Axiom::Substitution, i, j,
                               "equal-value mixture does not keep the common value", std::move(w),
                               lhs, rhs);
                    }
                } catch (const Error&) {
                    // overlapping supports: not a valid composition, skip
                }
            }

            if (exact[j] && !born_probability(s, *exact[j]).is_zero()) {
                try {
                    ExactState composite =
                        compose(strip_phases(s), {{*exact[j], strip_phases(partner)}});
                    RatInterval lhs = functional.value(composite);
                    RatInterval rhs = values[i];
                    if (lhs.disjoint_from(rhs)) {
                        ordered_json w;
                        w["game"] = state_to_json(s);
                        w["partner"] = state_to_json(partner);
                        w["composite"] = state_to_json(composite);
                        w["replaced_payoff"] = exact[j]->str();
                        report(ViolationReport::Axiom::Substitution, i, j,
                               "substituting an equal-value sub-game for payoff " +
                                   exact[j]->str() + " changes the value",
                               std::move(w), lhs, rhs);
                    }
                } catch (const Error&) {
                    // collision between supports: skip
                }
            }
        }

        // Phase invariance: a fixed nontrivial phase map.
        {
            std::map<Rational, Rational> phases;
            long idx = 1;
            for (const Branch& b : s.branches()) phases[b.payoff] = Rational(idx++, 12);
            RatInterval lhs = functional.value(apply_phases(s, phases));
            const RatInterval& rhs = values[i];
            if (lhs.disjoint_from(rhs)) {
                ordered_json w;
                w["game"] = state_to_json(s);
                report(ViolationReport::Axiom::Phase, i, std::nullopt,
                       "phase map changed the value", std::move(w), lhs, rhs);
            }
        }
    }

    // Canonical order: game index, then axiom, then partner.
    std::stable_sort(out.begin(), out.end(), [](const ViolationReport& a, const ViolationReport& b) {
        if (a.game_index != b.game_index) return a.game_index < b.game_index;
        if (a.axiom != b.axiom) return static_cast<int>(a.axiom) < static_cast<int>(b.axiom);
        return a.partner_index.value_or(0) < b.partner_index.value_or(0);
    });
    return out;
}

} // namespace qgame
