#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qgame/json_io.hpp"
#include "qgame/states.hpp"

#include "support/gen.hpp"

using namespace qgame;

namespace {

ExactState eigenstate(long payoff) { return make_state({{Rational(payoff), Rational(1)}}); }

ExactState equal_pair(long a, long b) {
    return make_state({{Rational(a), Rational(1, 2)}, {Rational(b), Rational(1, 2)}});
}

} // namespace

TEST_CASE("make_state validates and sorts") {
    ExactState s = make_state({{Rational(1), Rational(1, 2)}, {Rational(0), Rational(1, 2)}});
    CHECK(s.branches()[0].payoff == Rational(0));
    CHECK(s.branches()[1].payoff == Rational(1));

    CHECK_NOTHROW(eigenstate(5));
    CHECK_NOTHROW(equal_pair(0, 1));

    CHECK_THROWS_WITH_AS(make_state({{Rational(0), Rational(1, 2)}, {Rational(1), Rational(1, 3)}}),
                         doctest::Contains("NotNormalized"), Error);
    CHECK_THROWS_WITH_AS(make_state({{Rational(3), Rational(1, 2)}, {Rational(3), Rational(1, 2)}}),
                         doctest::Contains("DuplicatePayoff"), Error);
    CHECK_THROWS_WITH_AS(make_state(std::vector<std::pair<Rational, Rational>>{}),
                         doctest::Contains("EmptyState"), Error);
    // negative weights can still sum to 1; they must be rejected
    CHECK_THROWS_AS(make_state({{Rational(0), Rational(3, 2)}, {Rational(1), Rational(-1, 2)}}),
                    Error);
}

TEST_CASE("zero-weight branches are dropped so support is the branch set") {
    ExactState s = make_state(
        {{Rational(0), Rational(1, 2)}, {Rational(1), Rational(0)}, {Rational(2), Rational(1, 2)}});
    CHECK(s.size() == 2);
    CHECK(support(s) == std::set<Rational>{Rational(0), Rational(2)});
}

TEST_CASE("phases normalize into [0, 1)") {
    ExactState s = make_state({{Rational(0), Rational(1), Rational(5, 4)}});
    CHECK(s.branches()[0].phase == Rational(1, 4));
}

TEST_CASE("born_value on the pinned games") {
    CHECK(born_value(eigenstate(5)) == Rational(5));
    CHECK(born_value(equal_pair(0, 1)) == Rational(1, 2));
    CHECK(born_value(make_state({{Rational(0), Rational(1, 3)}, {Rational(3), Rational(2, 3)}})) ==
          Rational(2));
}

TEST_CASE("born_probability") {
    ExactState pair = equal_pair(0, 1);
    CHECK(born_probability(pair, Rational(0)) == Rational(1, 2));
    CHECK(born_probability(eigenstate(5), Rational(5)) == Rational(1));
    CHECK(born_probability(pair, Rational(7)) == Rational(0));
}

TEST_CASE("support") {
    CHECK(support(eigenstate(5)) == std::set<Rational>{Rational(5)});
    CHECK(support(equal_pair(0, 1)) == std::set<Rational>{Rational(0), Rational(1)});
    ExactState s = make_state(
        {{Rational(0), Rational(1, 6)}, {Rational(3), Rational(1, 3)}, {Rational(7), Rational(1, 2)}});
    CHECK(support(s) == std::set<Rational>{Rational(0), Rational(3), Rational(7)});
}

TEST_CASE("shift_payoffs relabels payoffs only") {
    CHECK(shift_payoffs(equal_pair(0, 1), Rational(3)) == equal_pair(3, 4));
    CHECK(shift_payoffs(eigenstate(5), Rational(-5)) == eigenstate(0));
    // k = -x1-x2 turns the pair into its own negation
    ExactState shifted = shift_payoffs(equal_pair(2, 5), Rational(-7));
    CHECK(shifted == equal_pair(-5, -2));
    CHECK(shifted == negate_payoffs(equal_pair(2, 5)));
}

TEST_CASE("negate_payoffs") {
    CHECK(negate_payoffs(eigenstate(5)) == eigenstate(-5));
    CHECK(negate_payoffs(equal_pair(0, 1)) == equal_pair(-1, 0));
}

TEST_CASE("apply_phases leaves payoffs and weights alone") {
    ExactState pair = equal_pair(0, 1);
    CHECK(apply_phases(pair, {}) == pair);
    ExactState phased = apply_phases(pair, {{Rational(1), Rational(1, 6)}});
    CHECK(phased.branches()[1].phase == Rational(1, 6));
    CHECK(phased.branches()[0].phase == Rational(0));
    CHECK(born_value(phased) == born_value(pair));
    CHECK_THROWS_WITH_AS(apply_phases(pair, {{Rational(9), Rational(1, 6)}}),
                         doctest::Contains("UnknownPayoff"), Error);
}

TEST_CASE("compose flattens sub-games") {
    ExactState g = equal_pair(10, 20);
    CHECK(compose(eigenstate(7), {{Rational(7), g}}) == g);

    ExactState four = compose(equal_pair(0, 1), {{Rational(0), equal_pair(10, 20)},
                                                 {Rational(1), equal_pair(30, 40)}});
    CHECK(four.size() == 4);
    for (const Branch& b : four.branches()) CHECK(b.weight == Rational(1, 4));

    CHECK_THROWS_WITH_AS(compose(equal_pair(0, 1), {{Rational(0), equal_pair(1, 2)}}),
                         doctest::Contains("PayoffCollision"), Error);
}

TEST_CASE("algebraic invariants on seeded games") {
    testgen::Gen gen(7);
    for (int it = 0; it < 200; ++it) {
        ExactState s = gen.state(4);
        Rational v = born_value(s);
        Rational k = gen.small_rational();

        CHECK(born_value(shift_payoffs(s, k)) == v + k);
        CHECK(born_value(negate_payoffs(s)) == -v);
        CHECK(negate_payoffs(negate_payoffs(s)) == s);

        std::map<Rational, Rational> phases;
        for (const Branch& b : s.branches()) phases[b.payoff] = gen.phase();
        CHECK(born_value(apply_phases(s, phases)) == v);

        Rational total;
        for (const Rational& x : support(s)) total += born_probability(s, x);
        CHECK(total == Rational(1));
    }
}

TEST_CASE("compose matches the weighted-sum identity on seeded games") {
    testgen::Gen gen(11);
    int done = 0;
    while (done < 50) {
        ExactState outer = gen.state(3, /*phased=*/false);
        ExactState inner = gen.state(3, /*phased=*/false);
        const Rational& target = outer.branches()[0].payoff;
        try {
            ExactState c = compose(outer, {{target, inner}});
            Rational expected;
            for (const Branch& b : outer.branches())
                expected += b.weight * (b.payoff == target ? born_value(inner) : b.payoff);
            CHECK(born_value(c) == expected);
            ++done;
        } catch (const Error&) {
            // support collision: try another pair
        }
    }
}

TEST_CASE("game JSON round trip is bit-exact") {
    ExactState s = make_state({{Rational(0), Rational(1, 2), Rational(0)},
                               {Rational(1), Rational(1, 3), Rational(1, 6)},
                               {Rational(2), Rational(1, 6), Rational(0)}});
    ordered_json j = state_to_json(s);
    CHECK(state_from_json(j) == s);
    CHECK(j.dump() == state_to_json(state_from_json(j)).dump());
    CHECK(j["branches"][0]["weight"] == "1/2");

    NumericState n({{Rational(0), Rational(1, 4), Rational(1, 3)},
                    {Rational(1), Rational(2, 3), Rational(3, 4)}});
    CHECK(numeric_from_json(numeric_to_json(n)) == n);
}

TEST_CASE("game JSON rejects malformed input") {
    CHECK_THROWS_AS(state_from_json(ordered_json::parse("{}")), Error);
    CHECK_THROWS_AS(state_from_json(ordered_json::parse(R"({"branches": [{"payoff": "1"}]})")),
                    Error);
    CHECK_THROWS_AS(
        state_from_json(ordered_json::parse(R"({"branches": [{"payoff": "1.5", "weight": "1"}]})")),
        Error);
    // missing phase defaults to zero
    ExactState s =
        state_from_json(ordered_json::parse(R"({"branches": [{"payoff": "3", "weight": "1"}]})"));
    CHECK(s.branches()[0].phase == Rational(0));
}
