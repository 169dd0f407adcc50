#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qgame/checker.hpp"
#include "qgame/engine.hpp"

#include "support/gen.hpp"
#include "support/mutate.hpp"

using namespace qgame;

namespace {

ProofTrace pair_trace() {
    return derive_value(make_state({{Rational(0), Rational(1, 2)}, {Rational(1), Rational(1, 2)}}))
        .second;
}

Verdict verify_json_roundtrip(const ProofTrace& t) {
    return verify(trace_from_json(trace_to_json(t)));
}

} // namespace

TEST_CASE("engine traces are accepted") {
    testgen::Gen gen(99);
    for (int i = 0; i < 40; ++i) {
        auto [v, t] = derive_value(gen.state(4));
        Verdict verdict = verify(t);
        CAPTURE(verdict.reason);
        CHECK(verdict.accepted);
        CHECK_FALSE(verdict.failing_step.has_value());
        CHECK(verify_json_roundtrip(t).accepted);
    }
}

TEST_CASE("altered equation claim is rejected with a pinpointed diagnostic") {
    ProofTrace t = pair_trace();
    // conclusion claims 1/2; claim 3/5 instead
    RuleStep& concl = t.steps[t.conclusion];
    REQUIRE(concl.rule == Rule::Eqn);
    concl.claim.value = Affine(Rational(3, 5));
    Verdict v = verify(t);
    CHECK_FALSE(v.accepted);
    CHECK(*v.failing_step == t.conclusion);
    CHECK(v.reason == "equation solution mismatch");
}

TEST_CASE("overlapping substitution supports are rejected") {
    // hand-build: R_EIG twice on the same payoff set, then an equal-parts
    // R_SUBST whose parts share support {5}
    ProofTrace t;
    RuleStep e1;
    e1.rule = Rule::Eig;
    e1.subject.branches.push_back({Affine(Rational(5)), Rational(1), Rational(0)});
    e1.claim = {Claim::Kind::Value, Affine(Rational(5))};
    e1.id = 0;
    RuleStep e2 = e1;
    e2.id = 1;
    t.steps = {e1, e2};

    RuleStep s;
    s.id = 2;
    s.rule = Rule::Subst;
    SubstParams sp;
    sp.mode = SubstParams::Mode::EqualParts;
    sp.outer.branches = {{Affine(Rational(0)), Rational(1, 2), Rational(0)},
                         {Affine(Rational(1)), Rational(1, 2), Rational(0)}};
    sp.outer.canonicalize();
    sp.map = {{Affine(Rational(0)), 0}, {Affine(Rational(1)), 1}};
    s.premises = {0, 1};
    s.subject.branches.push_back({Affine(Rational(5)), Rational(1), Rational(0)});
    s.claim = {Claim::Kind::Value, Affine(Rational(5))};
    s.params.subst = sp;
    t.steps.push_back(s);
    t.conclusion = 2;

    Verdict v = verify(t);
    CHECK_FALSE(v.accepted);
    CHECK(*v.failing_step == 2);
    CHECK(v.reason == "supports not disjoint");
}

TEST_CASE("R_CONST accepts single-branch constant games only") {
    ProofTrace t;
    RuleStep s;
    s.id = 0;
    s.rule = Rule::Const;
    s.subject.branches.push_back({Affine(Rational(4)), Rational(1), Rational(0)});
    s.claim = {Claim::Kind::Value, Affine(Rational(4))};
    t.steps = {s};
    t.conclusion = 0;
    CHECK(verify(t).accepted);

    t.steps[0].claim.value = Affine(Rational(5));
    CHECK_FALSE(verify(t).accepted);
}

TEST_CASE("unsolved hypotheses are rejected") {
    ProofTrace t;
    RuleStep s;
    s.id = 0;
    s.rule = Rule::Eqn;
    s.subject.branches.push_back({Affine(Rational(4)), Rational(1), Rational(0)});
    s.claim = {Claim::Kind::Value, Affine::unknown(0)};
    s.params.eqn = EqnParams{EqnParams::Kind::Assume, -1, {}, {}, {}, {}};
    t.steps = {s};
    t.conclusion = 0;
    Verdict v = verify(t);
    CHECK_FALSE(v.accepted);
    CHECK(v.reason == "unsolved hypothesis");
}

TEST_CASE("structural problems are malformed, not rejections") {
    ProofTrace t = pair_trace();

    SUBCASE("empty trace") {
        ProofTrace empty;
        CHECK_THROWS_WITH_AS(verify(empty), doctest::Contains("MalformedTrace"), Error);
    }
    SUBCASE("conclusion out of range") {
        t.conclusion = 99;
        CHECK_THROWS_WITH_AS(verify(t), doctest::Contains("MalformedTrace"), Error);
    }
    SUBCASE("forward premise reference") {
        t.steps[1].premises = {3};
        CHECK_THROWS_WITH_AS(verify(t), doctest::Contains("MalformedTrace"), Error);
    }
    SUBCASE("truncated JSON") {
        std::string txt = trace_to_json(t).dump();
        txt.resize(txt.size() / 2);
        CHECK_THROWS_WITH_AS(trace_from_json(ordered_json::parse(txt, nullptr, false)),
                             doctest::Contains("MalformedTrace"), Error);
    }
}

TEST_CASE("mutation harness: every semantics-altering mutation is rejected at its step") {
    testgen::Gen gen(1234);
    mutate::Mutator mut(777);
    int tested = 0;
    while (tested < 120) {
        ExactState s = gen.state(4);
        auto [v, t] = derive_value(s);
        REQUIRE(verify(t).accepted);
        auto m = mut.next_mutation(t);
        if (!m) continue;
        Verdict verdict = verify(m->trace);
        CAPTURE(m->description);
        CHECK_FALSE(verdict.accepted);
        CHECK(*verdict.failing_step == m->step);
        ++tested;
    }
}

TEST_CASE("byte-level fuzzing never crashes and never accepts a different value") {
    testgen::Gen gen(31);
    auto [v, t] = derive_value(gen.state(3));
    std::string original = trace_to_json(t).dump();
    Rational value = t.steps[t.conclusion].claim.value.constant();

    testgen::Gen fuzz(32);
    const char glyphs[] = "0123456789/-{}[]\",:upper";
    for (int i = 0; i < 300; ++i) {
        std::string text = original;
        size_t pos = fuzz.next() % text.size();
        text[pos] = glyphs[fuzz.next() % (sizeof glyphs - 1)];
        try {
            ProofTrace parsed = trace_from_json(ordered_json::parse(text, nullptr, false));
            Verdict verdict = verify(parsed);
            if (verdict.accepted) {
                // semantics survived the edit: the concluded value must agree
                const Claim& claim = parsed.steps[parsed.conclusion].claim;
                CHECK(claim.value == Affine(value));
            }
        } catch (const Error& e) {
            CHECK(e.code() == Errc::MalformedTrace);
        }
    }
}

TEST_CASE("verdict pinpoints the first failing step in premise order") {
    ProofTrace t = pair_trace();
    // find the R_SHIFT step and corrupt it; later steps depend on it but the
    // first failure must be reported
    int shift_id = -1;
    for (const RuleStep& s : t.steps)
        if (s.rule == Rule::Shift) shift_id = s.id;
    REQUIRE(shift_id >= 0);
    t.steps[shift_id].claim.value = t.steps[shift_id].claim.value + Affine(Rational(1));
    Verdict v = verify(t);
    CHECK_FALSE(v.accepted);
    CHECK(*v.failing_step == shift_id);
}
