#include "qgame/trace.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace qgame {

Affine Affine::unknown(int id) {
    Affine a;
    a.terms_[id] = Rational(1);
    return a;
}

Rational Affine::coeff(int id) const {
    auto it = terms_.find(id);
    return it == terms_.end() ? Rational(0) : it->second;
}

Affine Affine::drop(int id) const {
    Affine a = *this;
    a.terms_.erase(id);
    return a;
}

Affine Affine::operator+(const Affine& o) const {
    Affine a = *this;
    a.constant_ += o.constant_;
    for (const auto& [id, c] : o.terms_) {
        Rational sum = a.coeff(id) + c;
        if (sum.is_zero())
            a.terms_.erase(id);
        else
            a.terms_[id] = sum;
    }
    return a;
}

Affine Affine::operator-(const Affine& o) const { return *this + (-o); }

Affine Affine::operator-() const {
    Affine a;
    a.constant_ = -constant_;
    for (const auto& [id, c] : terms_) a.terms_[id] = -c;
    return a;
}

Affine Affine::scale(const Rational& k) const {
    Affine a;
    if (k.is_zero()) return a;
    a.constant_ = constant_ * k;
    for (const auto& [id, c] : terms_) a.terms_[id] = c * k;
    return a;
}

bool Affine::operator<(const Affine& o) const {
    if (constant_ != o.constant_) return constant_ < o.constant_;
    return std::lexicographical_compare(
        terms_.begin(), terms_.end(), o.terms_.begin(), o.terms_.end(),
        [](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first < y.first;
            return x.second < y.second;
        });
}

Rational Affine::eval(const std::map<int, Rational>& env) const {
    Rational v = constant_;
    for (const auto& [id, c] : terms_) {
        auto it = env.find(id);
        if (it == env.end()) throw std::domain_error("unresolved unknown u" + std::to_string(id));
        v += c * it->second;
    }
    return v;
}

Affine Affine::substitute(const std::map<int, Rational>& env) const {
    Affine a(constant_);
    for (const auto& [id, c] : terms_) {
        auto it = env.find(id);
        if (it == env.end())
            a.terms_[id] = c;
        else
            a.constant_ += c * it->second;
    }
    return a;
}

std::string Affine::str() const {
    std::ostringstream os;
    os << constant_.str();
    for (const auto& [id, c] : terms_) os << " + " << c.str() << "*u" << id;
    return os.str();
}

SymState SymState::from_exact(const ExactState& s) {
    SymState out;
    for (const Branch& b : s.branches()) out.branches.push_back({Affine(b.payoff), b.weight, b.phase});
    out.canonicalize();
    return out;
}

ExactState SymState::to_exact() const {
    std::vector<Branch> bs;
    for (const SymBranch& b : branches) {
        if (!b.payoff.is_concrete())
            throw std::domain_error("state has symbolic payoffs");
        bs.push_back({b.payoff.constant(), b.weight, b.phase});
    }
    return ExactState(std::move(bs));
}

bool SymState::concrete() const {
    for (const SymBranch& b : branches)
        if (!b.payoff.is_concrete()) return false;
    return true;
}

bool SymState::zero_phases() const {
    for (const SymBranch& b : branches)
        if (!b.phase.is_zero()) return false;
    return true;
}

void SymState::canonicalize() {
    std::sort(branches.begin(), branches.end(), [](const SymBranch& a, const SymBranch& b) {
        if (a.payoff == b.payoff) return a.weight < b.weight;
        return a.payoff < b.payoff;
    });
}

bool SymState::operator==(const SymState& o) const {
    if (branches.size() != o.branches.size()) return false;
    for (size_t i = 0; i < branches.size(); ++i) {
        const SymBranch &a = branches[i], &b = o.branches[i];
        if (!(a.payoff == b.payoff) || a.weight != b.weight || a.phase != b.phase) return false;
    }
    return true;
}

SymState sym_equal_weights(const std::vector<Affine>& payoffs) {
    SymState s;
    Rational w = Rational(1) / Rational(static_cast<long>(payoffs.size()));
    for (const Affine& p : payoffs) s.branches.push_back({p, w, Rational(0)});
    s.canonicalize();
    return s;
}

SymState sym_shift(const SymState& s, const Affine& k) {
    SymState out = s;
    for (SymBranch& b : out.branches) b.payoff = b.payoff + k;
    out.canonicalize();
    return out;
}

SymState sym_negate(const SymState& s) {
    SymState out = s;
    for (SymBranch& b : out.branches) b.payoff = -b.payoff;
    out.canonicalize();
    return out;
}

SymState sym_compose(const SymState& outer, const std::vector<std::pair<Affine, SymState>>& subs) {
    SymState out;
    for (const SymBranch& b : outer.branches) {
        const SymState* sub = nullptr;
        for (const auto& [payoff, state] : subs)
            if (payoff == b.payoff) {
                sub = &state;
                break;
            }
        if (sub == nullptr) {
            out.branches.push_back(b);
            continue;
        }
        for (const SymBranch& sb : sub->branches)
            out.branches.push_back({sb.payoff, sb.weight * b.weight, Rational(0)});
    }
    out.canonicalize();
    for (size_t i = 1; i < out.branches.size(); ++i)
        if (out.branches[i].payoff == out.branches[i - 1].payoff)
            throw Error(Errc::PayoffCollision, "payoff " + out.branches[i].payoff.str() + " duplicated");
    return out;
}

const char* rule_name(Rule r) {
    switch (r) {
        case Rule::Eig: return "R_EIG";
        case Rule::Const: return "R_CONST";
        case Rule::Shift: return "R_SHIFT";
        case Rule::Zero: return "R_ZERO";
        case Rule::Subst: return "R_SUBST";
        case Rule::Phase: return "R_PHASE";
        case Rule::Eqn: return "R_EQN";
        case Rule::Expand: return "R_EXPAND";
        case Rule::Dom: return "R_DOM";
    }
    return "?";
}

Rule rule_from_name(const std::string& s) {
    for (Rule r : {Rule::Eig, Rule::Const, Rule::Shift, Rule::Zero, Rule::Subst, Rule::Phase,
                   Rule::Eqn, Rule::Expand, Rule::Dom})
        if (s == rule_name(r)) return r;
    throw Error(Errc::MalformedTrace, "unknown rule '" + s + "'");
}

long AncillaPlan::total() const {
    long n = 0;
    for (long s : block_sizes) n += s;
    return n;
}

std::vector<Rational> AncillaPlan::combined_payoffs() const {
    std::vector<Rational> out;
    for (size_t a = 0; a < base_payoffs.size(); ++a)
        for (const Rational& y : offsets[a]) out.push_back(base_payoffs[a] + y);
    return out;
}

namespace {

ordered_json affine_to_json(const Affine& a) {
    if (a.is_concrete()) return a.constant().str();
    ordered_json j;
    j["const"] = a.constant().str();
    ordered_json terms;
    for (const auto& [id, c] : a.terms()) terms[std::to_string(id)] = c.str();
    j["unknowns"] = std::move(terms);
    return j;
}

Affine affine_from_json(const ordered_json& j) {
    if (j.is_string()) return Affine(Rational::from_string(j.get<std::string>()));
    if (!j.is_object() || !j.contains("const") || !j.contains("unknowns"))
        throw Error(Errc::MalformedTrace, "bad affine value");
    Affine a(Rational::from_string(j.at("const").get<std::string>()));
    for (const auto& [key, val] : j.at("unknowns").items()) {
        int id = 0;
        try {
            id = std::stoi(key);
        } catch (...) {
            throw Error(Errc::MalformedTrace, "bad unknown id '" + key + "'");
        }
        if (!val.is_string()) throw Error(Errc::MalformedTrace, "bad unknown coefficient");
        a = a + Affine::unknown(id).scale(Rational::from_string(val.get<std::string>()));
    }
    return a;
}

ordered_json sym_state_to_json(const SymState& s) {
    ordered_json out;
    out["branches"] = ordered_json::array();
    for (const SymBranch& b : s.branches) {
        ordered_json jb;
        jb["payoff"] = affine_to_json(b.payoff);
        jb["weight"] = b.weight.str();
        jb["phase"] = b.phase.str();
        out["branches"].push_back(std::move(jb));
    }
    return out;
}

SymState sym_state_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("branches") || !j.at("branches").is_array())
        throw Error(Errc::MalformedTrace, "bad state");
    SymState s;
    for (const auto& jb : j.at("branches")) {
        if (!jb.is_object() || !jb.contains("payoff") || !jb.contains("weight"))
            throw Error(Errc::MalformedTrace, "bad branch");
        Rational phase(0);
        if (jb.contains("phase")) phase = Rational::from_string(jb.at("phase").get<std::string>());
        s.branches.push_back({affine_from_json(jb.at("payoff")),
                              Rational::from_string(jb.at("weight").get<std::string>()), phase});
    }
    s.canonicalize();
    return s;
}

ordered_json plan_to_json(const AncillaPlan& p) {
    ordered_json j;
    j["base_payoffs"] = ordered_json::array();
    for (const Rational& x : p.base_payoffs) j["base_payoffs"].push_back(x.str());
    j["block_sizes"] = p.block_sizes;
    j["offsets"] = ordered_json::array();
    for (const auto& block : p.offsets) {
        ordered_json jb = ordered_json::array();
        for (const Rational& y : block) jb.push_back(y.str());
        j["offsets"].push_back(std::move(jb));
    }
    return j;
}

AncillaPlan plan_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("base_payoffs") || !j.contains("block_sizes") ||
        !j.contains("offsets"))
        throw Error(Errc::MalformedTrace, "bad ancilla plan");
    AncillaPlan p;
    for (const auto& x : j.at("base_payoffs"))
        p.base_payoffs.push_back(Rational::from_string(x.get<std::string>()));
    for (const auto& s : j.at("block_sizes")) {
        if (!s.is_number_integer()) throw Error(Errc::MalformedTrace, "bad block size");
        p.block_sizes.push_back(s.get<long>());
    }
    for (const auto& block : j.at("offsets")) {
        std::vector<Rational> ys;
        for (const auto& y : block) ys.push_back(Rational::from_string(y.get<std::string>()));
        p.offsets.push_back(std::move(ys));
    }
    return p;
}

ordered_json claim_to_json(const Claim& c) {
    ordered_json j;
    if (c.kind == Claim::Kind::Value) {
        j["value"] = affine_to_json(c.value);
    } else {
        j["bound"] = c.kind == Claim::Kind::LowerBound ? "lower" : "upper";
        j["value"] = affine_to_json(c.value);
    }
    return j;
}

Claim claim_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("value")) throw Error(Errc::MalformedTrace, "bad claim");
    Claim c;
    c.value = affine_from_json(j.at("value"));
    if (j.contains("bound")) {
        std::string b = j.at("bound").get<std::string>();
        if (b == "lower")
            c.kind = Claim::Kind::LowerBound;
        else if (b == "upper")
            c.kind = Claim::Kind::UpperBound;
        else
            throw Error(Errc::MalformedTrace, "bad bound '" + b + "'");
    }
    return c;
}

ordered_json params_to_json(const StepParams& p) {
    ordered_json j = ordered_json::object();
    if (p.shift_k) j["k"] = affine_to_json(*p.shift_k);
    if (p.subst) {
        j["mode"] = p.subst->mode == SubstParams::Mode::ByValue ? "by_value" : "equal_parts";
        j["outer"] = sym_state_to_json(p.subst->outer);
        ordered_json m = ordered_json::array();
        for (const SubstEntry& e : p.subst->map) {
            ordered_json je;
            je["payoff"] = affine_to_json(e.payoff);
            je["premise"] = e.premise;
            m.push_back(std::move(je));
        }
        j["map"] = std::move(m);
    }
    if (p.eqn) {
        if (p.eqn->kind == EqnParams::Kind::Assume) {
            j["kind"] = "assume";
        } else {
            j["kind"] = "solve";
            j["unknown"] = p.eqn->unknown;
            j["a"] = p.eqn->a.str();
            j["b"] = affine_to_json(p.eqn->b);
            j["c"] = p.eqn->c.str();
            j["d"] = affine_to_json(p.eqn->d);
        }
    }
    if (p.plan) j["plan"] = plan_to_json(*p.plan);
    if (p.dom) {
        j["direction"] = p.dom->direction == DomParams::Direction::Lower ? "lower" : "upper";
        j["grid"] = p.dom->grid.str();
    }
    return j;
}

StepParams params_from_json(const ordered_json& j) {
    StepParams p;
    if (!j.is_object()) throw Error(Errc::MalformedTrace, "bad params");
    if (j.contains("k")) p.shift_k = affine_from_json(j.at("k"));
    if (j.contains("mode")) {
        SubstParams sp;
        std::string m = j.at("mode").get<std::string>();
        if (m == "by_value")
            sp.mode = SubstParams::Mode::ByValue;
        else if (m == "equal_parts")
            sp.mode = SubstParams::Mode::EqualParts;
        else
            throw Error(Errc::MalformedTrace, "bad subst mode '" + m + "'");
        if (!j.contains("outer") || !j.contains("map"))
            throw Error(Errc::MalformedTrace, "subst params need outer and map");
        sp.outer = sym_state_from_json(j.at("outer"));
        for (const auto& je : j.at("map")) {
            if (!je.is_object() || !je.contains("payoff") || !je.contains("premise") ||
                !je.at("premise").is_number_integer())
                throw Error(Errc::MalformedTrace, "bad subst map entry");
            sp.map.push_back({affine_from_json(je.at("payoff")), je.at("premise").get<int>()});
        }
        p.subst = std::move(sp);
    }
    if (j.contains("kind")) {
        EqnParams ep;
        std::string k = j.at("kind").get<std::string>();
        if (k == "assume") {
            ep.kind = EqnParams::Kind::Assume;
        } else if (k == "solve") {
            ep.kind = EqnParams::Kind::Solve;
            if (!j.contains("unknown") || !j.at("unknown").is_number_integer())
                throw Error(Errc::MalformedTrace, "solve params need unknown");
            for (const char* f : {"a", "b", "c", "d"})
                if (!j.contains(f)) throw Error(Errc::MalformedTrace, "solve params need a,b,c,d");
            ep.unknown = j.at("unknown").get<int>();
            ep.a = Rational::from_string(j.at("a").get<std::string>());
            ep.b = affine_from_json(j.at("b"));
            ep.c = Rational::from_string(j.at("c").get<std::string>());
            ep.d = affine_from_json(j.at("d"));
        } else {
            throw Error(Errc::MalformedTrace, "bad eqn kind '" + k + "'");
        }
        p.eqn = std::move(ep);
    }
    if (j.contains("plan")) p.plan = plan_from_json(j.at("plan"));
    if (j.contains("direction")) {
        DomParams dp;
        std::string d = j.at("direction").get<std::string>();
        if (d == "lower")
            dp.direction = DomParams::Direction::Lower;
        else if (d == "upper")
            dp.direction = DomParams::Direction::Upper;
        else
            throw Error(Errc::MalformedTrace, "bad direction '" + d + "'");
        if (!j.contains("grid")) throw Error(Errc::MalformedTrace, "dom params need grid");
        dp.grid = Rational::from_string(j.at("grid").get<std::string>());
        p.dom = std::move(dp);
    }
    return p;
}

} // namespace

ordered_json trace_to_json(const ProofTrace& t) {
    ordered_json j;
    j["format"] = "qgame-trace-v1";
    j["steps"] = ordered_json::array();
    for (const RuleStep& s : t.steps) {
        ordered_json js;
        js["id"] = s.id;
        js["rule"] = rule_name(s.rule);
        js["premises"] = s.premises;
        if (s.numeric_subject) {
            ordered_json sub;
            sub["numeric"] = numeric_to_json(*s.numeric_subject);
            sub["rounded"] = sym_state_to_json(s.subject);
            js["subject"] = std::move(sub);
        } else {
            js["subject"] = sym_state_to_json(s.subject);
        }
        js["claim"] = claim_to_json(s.claim);
        js["params"] = params_to_json(s.params);
        j["steps"].push_back(std::move(js));
    }
    j["conclusion"] = t.conclusion;
    return j;
}

namespace {

ProofTrace trace_from_json_impl(const ordered_json& j) {
    if (!j.is_object() || !j.contains("steps") || !j.at("steps").is_array() ||
        !j.contains("conclusion") || !j.at("conclusion").is_number_integer())
        throw Error(Errc::MalformedTrace, "expected {\"steps\": [...], \"conclusion\": n}");
    ProofTrace t;
    int index = 0;
    for (const auto& js : j.at("steps")) {
        if (!js.is_object()) throw Error(Errc::MalformedTrace, "step must be an object");
        for (const char* f : {"id", "rule", "premises", "subject", "claim", "params"})
            if (!js.contains(f))
                throw Error(Errc::MalformedTrace, std::string("step missing '") + f + "'");
        RuleStep s;
        if (!js.at("id").is_number_integer() || js.at("id").get<int>() != index)
            throw Error(Errc::MalformedTrace, "step ids must be sequential from 0");
        s.id = index;
        s.rule = rule_from_name(js.at("rule").get<std::string>());
        for (const auto& p : js.at("premises")) {
            if (!p.is_number_integer()) throw Error(Errc::MalformedTrace, "bad premise id");
            int pid = p.get<int>();
            if (pid < 0 || pid >= index)
                throw Error(Errc::MalformedTrace,
                            "premise " + std::to_string(pid) + " does not precede step " +
                                std::to_string(index));
            s.premises.push_back(pid);
        }
        const auto& sub = js.at("subject");
        if (sub.is_object() && sub.contains("numeric")) {
            if (!sub.contains("rounded")) throw Error(Errc::MalformedTrace, "bad R_DOM subject");
            try {
                s.numeric_subject = numeric_from_json(sub.at("numeric"));
            } catch (const Error& e) {
                throw Error(Errc::MalformedTrace, e.what());
            }
            s.subject = sym_state_from_json(sub.at("rounded"));
        } else {
            s.subject = sym_state_from_json(sub);
        }
        s.claim = claim_from_json(js.at("claim"));
        s.params = params_from_json(js.at("params"));
        t.steps.push_back(std::move(s));
        ++index;
    }
    if (t.steps.empty()) throw Error(Errc::MalformedTrace, "empty trace");
    t.conclusion = j.at("conclusion").get<int>();
    if (t.conclusion < 0 || t.conclusion >= index)
        throw Error(Errc::MalformedTrace, "conclusion id out of range");
    return t;
}

} // namespace

// Anything the shapes rule out is malformed, including wrong JSON types and
// unparseable numbers.
ProofTrace trace_from_json(const ordered_json& j) {
    try {
        return trace_from_json_impl(j);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::MalformedTrace, e.what());
    } catch (const Error& e) {
        if (e.code() == Errc::MalformedTrace) throw;
        throw Error(Errc::MalformedTrace, e.what());
    }
}

ProofTrace load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::MalformedTrace, "cannot open " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::MalformedTrace, e.what());
    }
    return trace_from_json(j);
}

void save_trace(const ProofTrace& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::ParseError, "cannot write " + path);
    out << trace_to_json(t).dump(1) << "\n";
}

} // namespace qgame
