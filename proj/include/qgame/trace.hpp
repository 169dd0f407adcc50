#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qgame/json_io.hpp"
#include "qgame/states.hpp"

namespace qgame {

// Affine form c0 + sum(coeff_i * u_i) where each u_i names the value of the
// game hypothesised by an R_EQN assume step (keyed by that step's id). The
// fixpoint arguments need exactly this much symbolic structure: payoffs,
// shift constants and claims are all affine in the open unknowns, and every
// unknown is eliminated again by the matching R_EQN solve step.
class Affine {
  public:
    Affine() = default;
    Affine(Rational c) : constant_(std::move(c)) {}
    Affine(long c) : constant_(Rational(c)) {}
    static Affine unknown(int id);

    const Rational& constant() const { return constant_; }
    const std::map<int, Rational>& terms() const { return terms_; }

    bool is_concrete() const { return terms_.empty(); }
    Rational coeff(int id) const;
    // The affine form with the given unknown's term removed.
    Affine drop(int id) const;

    Affine operator+(const Affine& o) const;
    Affine operator-(const Affine& o) const;
    Affine operator-() const;
    Affine scale(const Rational& k) const;

    bool operator==(const Affine& o) const { return constant_ == o.constant_ && terms_ == o.terms_; }
    bool operator<(const Affine& o) const; // canonical order, not numeric

    // Value under a full assignment of the unknowns; throws if any is missing.
    Rational eval(const std::map<int, Rational>& env) const;
    // Substitutes known unknowns, keeping unresolved ones symbolic.
    Affine substitute(const std::map<int, Rational>& env) const;

    std::string str() const;

  private:
    Rational constant_;
    std::map<int, Rational> terms_;
};

// Trace-level state: like ExactState but payoffs may be affine in open
// unknowns. Branches are kept in canonical (form-ordered, not numeric) order;
// payoff distinctness is formal here and re-checked at instantiation.
struct SymBranch {
    Affine payoff;
    Rational weight;
    Rational phase;
};

struct SymState {
    std::vector<SymBranch> branches;

    static SymState from_exact(const ExactState& s);
    // Requires a concrete state; throws otherwise.
    ExactState to_exact() const;

    bool concrete() const;
    bool zero_phases() const;
    void canonicalize();

    bool operator==(const SymState& o) const;
};

SymState sym_equal_weights(const std::vector<Affine>& payoffs);
SymState sym_shift(const SymState& s, const Affine& k);
SymState sym_negate(const SymState& s);
// Disjoint-support flattening; formal duplicate payoffs raise PayoffCollision.
SymState sym_compose(const SymState& outer, const std::vector<std::pair<Affine, SymState>>& subs);

enum class Rule { Eig, Const, Shift, Zero, Subst, Phase, Eqn, Expand, Dom };

const char* rule_name(Rule r);
Rule rule_from_name(const std::string& s);

struct Claim {
    enum class Kind { Value, LowerBound, UpperBound };
    Kind kind = Kind::Value;
    Affine value;

    bool operator==(const Claim& o) const { return kind == o.kind && value == o.value; }
};

// Auxiliary-system offsets: one block per base payoff, offsets summing to
// zero within each block, combined payoffs all distinct.
struct AncillaPlan {
    std::vector<Rational> base_payoffs;
    std::vector<long> block_sizes;
    std::vector<std::vector<Rational>> offsets;

    long total() const;
    // The flattened payoffs base[a] + offsets[a][j], in plan order.
    std::vector<Rational> combined_payoffs() const;
};

struct SubstEntry {
    Affine payoff; // payoff of the outer state being substituted
    int premise;   // step whose subject replaces it
};

struct SubstParams {
    enum class Mode { ByValue, EqualParts };
    Mode mode = Mode::ByValue;
    SymState outer;
    std::vector<SubstEntry> map;
};

struct EqnParams {
    enum class Kind { Assume, Solve };
    Kind kind = Kind::Assume;
    // An assume step names u = value(subject). That every game has a value
    // is taken as an axiom here (a rational player's preferences induce one);
    // the solve step then discharges u from two premise claims of the forms
    // a*u + b and c*u + d over the same game.
    int unknown = -1;
    Rational a, c;
    Affine b, d;
};

struct DomParams {
    enum class Direction { Lower, Upper };
    Direction direction = Direction::Lower;
    Rational grid; // the 1/N rounding grid used
};

struct StepParams {
    std::optional<Affine> shift_k;
    std::optional<SubstParams> subst;
    std::optional<EqnParams> eqn;
    std::optional<AncillaPlan> plan;
    std::optional<DomParams> dom;
};

struct RuleStep {
    int id = 0;
    Rule rule = Rule::Eig;
    std::vector<int> premises;
    SymState subject;
    // R_DOM only: the enclosure-weighted original; `subject` is the rounded state.
    std::optional<NumericState> numeric_subject;
    Claim claim;
    StepParams params;
};

struct ProofTrace {
    std::vector<RuleStep> steps;
    int conclusion = -1;
};

ordered_json trace_to_json(const ProofTrace& t);
// Structural validation only (shapes, references); semantic checking is the
// trace_checker's job. Throws Error(MalformedTrace).
ProofTrace trace_from_json(const ordered_json& j);

ProofTrace load_trace(const std::string& path);
void save_trace(const ProofTrace& t, const std::string& path);

} // namespace qgame
