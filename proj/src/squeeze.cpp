#include "qgame/squeeze.hpp"

#include <stdexcept>

namespace qgame {

namespace {

void check_grid(const Rational& grid) {
    if (!grid.is_integer() || grid.sign() <= 0)
        throw std::domain_error("grid must be a positive integer");
}

ExactState from_top_cumulatives(const NumericState& state, const std::vector<Rational>& cum) {
    // cum[j] = total weight on payoffs >= payoff j; nonincreasing, cum[0] = 1.
    size_t k = state.size();
    std::vector<Branch> bs;
    for (size_t j = 0; j < k; ++j) {
        Rational next = j + 1 < k ? cum[j + 1] : Rational(0);
        bs.push_back({state.branches()[j].payoff, cum[j] - next, Rational(0)});
    }
    return ExactState(std::move(bs));
}

} // namespace

ExactState round_dominating(const NumericState& state, const Rational& grid) {
    check_grid(grid);
    size_t k = state.size();
    std::vector<Rational> cum(k);
    Rational hi_sum;
    for (size_t j = k; j-- > 0;) {
        hi_sum += state.branches()[j].weight_hi;
        Rational t = hi_sum < Rational(1) ? hi_sum : Rational(1);
        Rational rounded = t.ceil_to_grid(grid);
        cum[j] = rounded < Rational(1) ? rounded : Rational(1);
    }
    cum[0] = Rational(1);
    return from_top_cumulatives(state, cum);
}

ExactState round_dominated(const NumericState& state, const Rational& grid) {
    check_grid(grid);
    size_t k = state.size();
    std::vector<Rational> cum(k);
    Rational lo_sum;
    for (size_t j = k; j-- > 0;) {
        lo_sum += state.branches()[j].weight_lo;
        cum[j] = lo_sum.floor_to_grid(grid);
    }
    cum[0] = Rational(1);
    return from_top_cumulatives(state, cum);
}

Rational enclosure_slack(const NumericState& state) {
    Rational s;
    for (const NumericBranch& b : state.branches()) s += b.weight_hi - b.weight_lo;
    return s;
}

Rational payoff_range(const NumericState& state) {
    return state.branches().back().payoff - state.branches().front().payoff;
}

Rational squeeze_grid(const NumericState& state, const Rational& eps) {
    if (eps.sign() <= 0) throw std::domain_error("eps must be positive");
    Rational range = payoff_range(state);
    if (enclosure_slack(state) * (Rational(2) * range) > eps)
        throw Error(Errc::EnclosureTooWide,
                    "slack exceeds eps / (2 * range); tighten the enclosures");
    Rational k(static_cast<long>(state.size()));
    return (Rational(2) * k * range / eps).ceil();
}

SqueezeResult squeeze(const NumericState& state, const Rational& eps) {
    if (eps.sign() <= 0) throw std::domain_error("eps must be positive");
    if (state.size() == 1) {
        ExactState eig = ExactState({{state.branches()[0].payoff, Rational(1), Rational(0)}});
        Rational v = born_value(eig);
        return {Interval(v, v), eig, eig};
    }
    if (enclosure_slack(state).is_zero()) {
        // Exact weights need no rounding regardless of the grid.
        std::vector<Branch> bs;
        for (const NumericBranch& b : state.branches())
            bs.push_back({b.payoff, b.weight_lo, Rational(0)});
        ExactState exact(std::move(bs));
        Rational v = born_value(exact);
        return {Interval(v, v), exact, exact};
    }
    Rational grid = squeeze_grid(state, eps);
    ExactState lo = round_dominated(state, grid);
    ExactState hi = round_dominating(state, grid);
    return {Interval(born_value(lo), born_value(hi)), std::move(lo), std::move(hi)};
}

} // namespace qgame
