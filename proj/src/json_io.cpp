#include "qgame/json_io.hpp"

#include <fstream>

namespace qgame {

namespace {

Rational rat_field(const ordered_json& j, const char* key, bool required = true) {
    if (!j.contains(key)) {
        if (!required) return Rational(0);
        throw Error(Errc::ParseError, std::string("missing field '") + key + "'");
    }
    const auto& v = j.at(key);
    if (!v.is_string()) throw Error(Errc::ParseError, std::string("field '") + key + "' must be a fraction string");
    return Rational::from_string(v.get<std::string>());
}

ordered_json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ParseError, "cannot open " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, e.what());
    }
    return j;
}

} // namespace

ordered_json state_to_json(const ExactState& s) {
    ordered_json out;
    out["branches"] = ordered_json::array();
    for (const Branch& b : s.branches()) {
        ordered_json jb;
        jb["payoff"] = b.payoff.str();
        jb["weight"] = b.weight.str();
        jb["phase"] = b.phase.str();
        out["branches"].push_back(std::move(jb));
    }
    return out;
}

ExactState state_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("branches") || !j.at("branches").is_array())
        throw Error(Errc::ParseError, "expected {\"branches\": [...]}");
    std::vector<Branch> bs;
    for (const auto& jb : j.at("branches")) {
        if (!jb.is_object()) throw Error(Errc::ParseError, "branch must be an object");
        bs.push_back({rat_field(jb, "payoff"), rat_field(jb, "weight"),
                      rat_field(jb, "phase", /*required=*/false)});
    }
    return ExactState(std::move(bs));
}

ordered_json numeric_to_json(const NumericState& s) {
    ordered_json out;
    out["branches"] = ordered_json::array();
    for (const NumericBranch& b : s.branches()) {
        ordered_json jb;
        jb["payoff"] = b.payoff.str();
        jb["weight_lo"] = b.weight_lo.str();
        jb["weight_hi"] = b.weight_hi.str();
        out["branches"].push_back(std::move(jb));
    }
    return out;
}

NumericState numeric_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("branches") || !j.at("branches").is_array())
        throw Error(Errc::ParseError, "expected {\"branches\": [...]}");
    std::vector<NumericBranch> bs;
    for (const auto& jb : j.at("branches")) {
        if (!jb.is_object()) throw Error(Errc::ParseError, "branch must be an object");
        bs.push_back({rat_field(jb, "payoff"), rat_field(jb, "weight_lo"), rat_field(jb, "weight_hi")});
    }
    return NumericState(std::move(bs));
}

ExactState load_state(const std::string& path) { return state_from_json(parse_file(path)); }

NumericState load_numeric(const std::string& path) { return numeric_from_json(parse_file(path)); }

} // namespace qgame
