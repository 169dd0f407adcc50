// Command-line front door: derive game values with proof traces, verify
// traces, squeeze irrational-weight games, plan ancilla expansions and audit
// value functionals. All numbers are exact fraction strings; output is
// byte-deterministic for identical inputs and flags.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qgame/ancilla.hpp"
#include "qgame/axioms.hpp"
#include "qgame/checker.hpp"
#include "qgame/engine.hpp"
#include "qgame/json_io.hpp"
#include "qgame/squeeze.hpp"

using namespace qgame;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRejected = 1;
constexpr int kExitInput = 2;
constexpr int kExitOracleMismatch = 3;

int cmd_value(const std::string& game_file, const std::string& trace_file, bool oracle) {
    ExactState state = load_state(game_file);
    auto [value, trace] = derive_value(state);
    std::cout << value.str() << "\n";
    if (!trace_file.empty()) save_trace(trace, trace_file);
    if (oracle) {
        Rational born = born_value(state);
        std::cout << "oracle: " << born.str() << "\n";
        if (born != value) return kExitOracleMismatch;
    }
    return kExitOk;
}

int cmd_check(const std::string& trace_file) {
    ProofTrace trace = load_trace(trace_file);
    Verdict v = verify(trace);
    if (v.accepted) {
        std::cout << "accepted\n";
        return kExitOk;
    }
    std::cout << "rejected at step " << *v.failing_step << ": " << v.reason << "\n";
    return kExitRejected;
}

int cmd_squeeze(const std::string& game_file, const std::string& eps_str) {
    NumericState state = load_numeric(game_file);
    Rational eps = Rational::from_string(eps_str);
    if (eps.sign() <= 0) throw Error(Errc::ParseError, "eps must be positive");
    SqueezeResult r = squeeze(state, eps);
    std::cout << "[" << r.interval.lo.str() << ", " << r.interval.hi.str() << "]\n";
    return kExitOk;
}

int cmd_ancilla(const std::string& game_file) {
    ExactState state = load_state(game_file);
    auto [expanded, step] = expand_to_equal(state);
    const AncillaPlan& plan = *step.params.plan;
    ordered_json j;
    j["branches"] = plan.total();
    ordered_json blocks = ordered_json::array();
    for (size_t a = 0; a < plan.base_payoffs.size(); ++a) {
        ordered_json jb;
        jb["payoff"] = plan.base_payoffs[a].str();
        jb["size"] = plan.block_sizes[a];
        ordered_json offs = ordered_json::array();
        for (const Rational& y : plan.offsets[a]) offs.push_back(y.str());
        jb["offsets"] = std::move(offs);
        blocks.push_back(std::move(jb));
    }
    j["blocks"] = std::move(blocks);
    std::cout << j.dump(1) << "\n";
    return kExitOk;
}

int cmd_axioms(const std::string& beta_str, uint64_t seed, size_t count, size_t max_branches) {
    Rational beta = Rational::from_string(beta_str);
    ValueFunctional functional("V_" + beta.str(), beta);
    std::vector<ExactState> suite = generate_suite(seed, count, max_branches);
    std::vector<ViolationReport> violations = audit(functional, suite);
    std::cout << violations.size() << " violations\n";
    if (violations.empty()) return kExitOk;
    std::cout << violations_to_json(violations).dump(1) << "\n";
    return kExitRejected;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"value derivations for finite measurement games, with machine-checkable traces"};
    app.require_subcommand(1);

    std::string game_file, trace_file, eps_str = "1/1000000000";
    std::string beta_str = "1";
    uint64_t seed = 42;
    size_t count = 500, max_branches = 4;
    bool oracle = false;

    CLI::App* value = app.add_subcommand("value", "derive a game's value (prints m/n)");
    value->add_option("game", game_file, "game JSON file")->required();
    value->add_option("--trace", trace_file, "write the proof trace to this file");
    value->add_flag("--oracle", oracle, "also print the weighted-sum oracle; exit 3 on mismatch");

    CLI::App* check = app.add_subcommand("check", "verify a proof trace");
    check->add_option("trace", trace_file, "trace JSON file")->required();

    CLI::App* squeeze = app.add_subcommand("squeeze", "enclose an irrational-weight game's value");
    squeeze->add_option("game", game_file, "numeric game JSON file")->required();
    squeeze->add_option("--eps", eps_str, "maximum interval width (fraction)");

    CLI::App* ancilla = app.add_subcommand("ancilla", "print the equal-amplitude expansion plan");
    ancilla->add_option("game", game_file, "game JSON file")->required();

    CLI::App* axioms = app.add_subcommand("axioms", "audit a value functional on seeded games");
    axioms->add_option("--beta", beta_str, "exponent of the power functional (fraction)");
    axioms->add_option("--seed", seed, "suite seed");
    axioms->add_option("--count", count, "number of games");
    axioms->add_option("--max-branches", max_branches, "maximum branches per game");

    try {
        app.parse(argc, argv);
        if (value->parsed()) return cmd_value(game_file, trace_file, oracle);
        if (check->parsed()) return cmd_check(trace_file);
        if (squeeze->parsed()) return cmd_squeeze(game_file, eps_str);
        if (ancilla->parsed()) return cmd_ancilla(game_file);
        if (axioms->parsed()) return cmd_axioms(beta_str, seed, count, max_branches);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInput;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
