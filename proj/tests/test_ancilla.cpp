#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "qgame/ancilla.hpp"

#include "support/gen.hpp"

using namespace qgame;

namespace {

void check_plan(const AncillaPlan& plan) {
    auto why = plan_error(plan);
    CAPTURE(why ? *why : "");
    CHECK_FALSE(why.has_value());
}

} // namespace

TEST_CASE("unit blocks need no offsets") {
    AncillaPlan p = plan_blocks({Rational(3), Rational(7)}, {1, 1});
    CHECK(p.offsets[0] == std::vector<Rational>{Rational(0)});
    CHECK(p.offsets[1] == std::vector<Rational>{Rational(0)});
    check_plan(p);
}

TEST_CASE("pinned two-block plan: payoffs (0, 10), sizes (2, 1)") {
    AncillaPlan p = plan_blocks({Rational(0), Rational(10)}, {2, 1});
    CHECK(std::set<Rational>(p.offsets[0].begin(), p.offsets[0].end()) ==
          std::set<Rational>{Rational(-1, 2), Rational(1, 2)});
    CHECK(p.offsets[1] == std::vector<Rational>{Rational(0)});
    check_plan(p);
}

TEST_CASE("colliding initial spacing escalates deterministically") {
    // blocks around 0 and 1, both of size 2: spacing 1 collides at 1/2
    AncillaPlan p = plan_blocks({Rational(0), Rational(1)}, {2, 2});
    check_plan(p);
    std::vector<Rational> all = p.combined_payoffs();
    std::set<Rational> combined(all.begin(), all.end());
    CHECK(combined.size() == 4);
    // the escalated spacing halves the offsets
    CHECK(combined == std::set<Rational>{Rational(-1, 4), Rational(1, 4), Rational(3, 4),
                                         Rational(5, 4)});
    // same inputs give the same plan
    AncillaPlan again = plan_blocks({Rational(0), Rational(1)}, {2, 2});
    CHECK(again.combined_payoffs() == p.combined_payoffs());
}

TEST_CASE("all two-block plans up to 50 satisfy the zero-sum and distinctness invariants") {
    for (long n = 2; n <= 50; ++n) {
        for (long m = 1; m < n; ++m) {
            AncillaPlan p = plan_blocks({Rational(0), Rational(1)}, {m, n - m});
            auto why = plan_error(p);
            CAPTURE(m);
            CAPTURE(n);
            REQUIRE_FALSE(why.has_value());
        }
    }
}

TEST_CASE("random multi-block plans are valid") {
    testgen::Gen gen(404);
    for (int i = 0; i < 300; ++i) {
        size_t blocks = static_cast<size_t>(gen.range(1, 5));
        std::vector<Rational> payoffs = gen.payoffs(blocks, -8, 8);
        std::vector<long> sizes;
        for (size_t b = 0; b < blocks; ++b) sizes.push_back(gen.range(1, 12));
        AncillaPlan p = plan_blocks(payoffs, sizes);
        auto why = plan_error(p);
        CAPTURE(why ? *why : "");
        REQUIRE_FALSE(why.has_value());
    }
}

TEST_CASE("plan_error catches broken plans") {
    AncillaPlan p = plan_blocks({Rational(0), Rational(1)}, {2, 3});
    SUBCASE("offset perturbation breaks the block sum") {
        p.offsets[1][0] += Rational(1, 7);
        CHECK(plan_error(p) == "block sum nonzero");
    }
    SUBCASE("shape mismatch") {
        p.offsets.pop_back();
        CHECK(plan_error(p).has_value());
    }
    SUBCASE("duplicate combined payoffs") {
        // make both blocks' first offsets land on the same combined payoff,
        // keeping sums zero
        AncillaPlan q;
        q.base_payoffs = {Rational(0), Rational(1)};
        q.block_sizes = {2, 2};
        q.offsets = {{Rational(1, 2), Rational(-1, 2)}, {Rational(-1, 2), Rational(1, 2)}};
        CHECK(plan_error(q) == "combined payoffs not distinct");
    }
}

TEST_CASE("expand_to_equal pinned examples") {
    SUBCASE("{(0,1/3),(3,2/3)} becomes three equal branches with mean 2") {
        ExactState s = make_state({{Rational(0), Rational(1, 3)}, {Rational(3), Rational(2, 3)}});
        auto [expanded, step] = expand_to_equal(s);
        CHECK(expanded.size() == 3);
        for (const Branch& b : expanded.branches()) CHECK(b.weight == Rational(1, 3));
        CHECK(born_value(expanded) == Rational(2));
        Rational mean;
        for (const Branch& b : expanded.branches()) mean += b.payoff;
        CHECK(mean / Rational(3) == Rational(2));
        CHECK(step.rule == Rule::Expand);
        check_plan(*step.params.plan);
    }
    SUBCASE("already equal-amplitude states expand to themselves") {
        ExactState pair = make_state({{Rational(0), Rational(1, 2)}, {Rational(1), Rational(1, 2)}});
        auto [expanded, step] = expand_to_equal(pair);
        CHECK(expanded == pair);
        CHECK(step.params.plan->offsets[0] == std::vector<Rational>{Rational(0)});
    }
    SUBCASE("three-branch expansion preserves the value") {
        ExactState s = make_state({{Rational(0), Rational(1, 2)},
                                   {Rational(1), Rational(1, 4)},
                                   {Rational(2), Rational(1, 4)}});
        auto [expanded, step] = expand_to_equal(s);
        CHECK(expanded.size() == 4);
        CHECK(born_value(expanded) == born_value(s));
        CHECK(born_value(expanded) == Rational(3, 4));
    }
}

TEST_CASE("expansion preserves born_value on seeded games") {
    testgen::Gen gen(808);
    for (int i = 0; i < 200; ++i) {
        ExactState s = gen.state(5, /*phased=*/false);
        auto [expanded, step] = expand_to_equal(s);
        CHECK(born_value(expanded) == born_value(s));
        check_plan(*step.params.plan);
        // per-block weight totals match the original weights
        const AncillaPlan& plan = *step.params.plan;
        Rational n(plan.total());
        for (size_t a = 0; a < plan.base_payoffs.size(); ++a)
            CHECK(Rational(plan.block_sizes[a]) / n == s.branches()[a].weight);
    }
}

TEST_CASE("expansion size cap") {
    ExactState s = make_state({{Rational(0), Rational(1, 1009)},
                               {Rational(1), Rational(1, 1013)},
                               {Rational(2), Rational(1) - Rational(1, 1009) - Rational(1, 1013)}});
    CHECK_THROWS_WITH_AS(expand_to_equal(s), doctest::Contains("ExpansionTooLarge"), Error);
}

TEST_CASE("expansion requires zero phases") {
    ExactState s = make_state({{Rational(0), Rational(1, 2), Rational(1, 4)},
                               {Rational(1), Rational(1, 2), Rational(0)}});
    CHECK_THROWS_AS(expand_to_equal(s), Error);
}
