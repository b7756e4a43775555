#pragma once

// Recombining geometric binomial tree: construction, forward induction of
// terminal probabilities, backward induction of claim values, money-market
// discounting, and symmetric-tree pricing of two-asset homothetic payoffs.
//
// Levels are flat arrays: level k holds k+1 node values, index 0 the
// all-up (top) node down to index k the all-down node, so node (k, i) has
// k - i up-moves. The full value lattice is only materialized where a
// tableau needs it; pricing paths keep O(n) working memory.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include "exopt/analytic.hpp"
#include "exopt/errors.hpp"
#include "exopt/one_period.hpp"
#include "exopt/payoff_expr.hpp"

namespace exopt {

struct TreeSpec {
    double x0 = 0.0;
    double u = 1.0;
    double d = 1.0;
    int steps = 1;
    // One entry (constant per step) or exactly `steps` entries.
    std::vector<double> step_df = {1.0};
    // Reporting only; never used in pricing.
    std::optional<double> real_world_p;
};

struct Lattice {
    std::vector<std::vector<double>> levels;

    int steps() const { return static_cast<int>(levels.size()) - 1; }
    double at(int level, int i) const { return levels[level][i]; }
};

struct TerminalOutcome {
    double value = 0.0;
    double probability = 0.0;
};

struct TerminalDistribution {
    std::vector<TerminalOutcome> outcomes;  // top (all-up) to bottom
};

struct BackwardResult {
    double root = 0.0;
    Lattice values;
};

struct MmaDiscount {
    double total_df = 1.0;
    bool empty_schedule = false;
};

inline void validate(const TreeSpec& spec) {
    if (spec.steps < 1) throw StructuralError("steps must be >= 1");
    if (!(spec.u > 0.0) || !(spec.d > 0.0)) {
        throw StructuralError("tree factors must be positive");
    }
    if (spec.step_df.empty()) {
        throw StructuralError("discount schedule must not be empty");
    }
    if (spec.step_df.size() != 1 &&
        spec.step_df.size() != static_cast<std::size_t>(spec.steps)) {
        std::ostringstream os;
        os << "discount schedule has " << spec.step_df.size()
           << " entries; expected 1 or " << spec.steps;
        throw StructuralError(os.str());
    }
    for (const double df : spec.step_df) {
        if (!(df > 0.0)) throw StructuralError("discount factors must be positive");
    }
    if (spec.real_world_p &&
        !(*spec.real_world_p >= 0.0 && *spec.real_world_p <= 1.0)) {
        throw StructuralError("real-world probability must lie in [0, 1]");
    }
}

namespace detail {

inline double step_discount(const TreeSpec& spec, int k) {
    return spec.step_df.size() == 1 ? spec.step_df[0]
                                    : spec.step_df[static_cast<std::size_t>(k)];
}

inline bool constant_schedule(const TreeSpec& spec) {
    for (const double df : spec.step_df) {
        if (df != spec.step_df[0]) return false;
    }
    return true;
}

// Per-step martingale probability: the one-period market with forward
// growth 1/df against the step factors. Inherits the no-arbitrage window
// check (growth must lie in [d, u]).
inline double step_prob(const TreeSpec& spec, double df) {
    return martingale_probs({1.0 / df, spec.u, spec.d, df}).p_up;
}

// log C(n, j) + j log p + (n - j) log(1 - p), with the p in {0, 1}
// boundaries handled exactly.
inline double binomial_mass(int n, int j, double p) {
    if (p == 0.0) return j == 0 ? 1.0 : 0.0;
    if (p == 1.0) return j == n ? 1.0 : 0.0;
    const double log_choose = std::lgamma(n + 1.0) - std::lgamma(j + 1.0) -
                              std::lgamma(n - j + 1.0);
    return std::exp(log_choose + j * std::log(p) + (n - j) * std::log1p(-p));
}

}  // namespace detail

// Node (k, i) = x0 * u^(k-i) * d^i. Recombination holds by construction.
inline Lattice build_lattice(const TreeSpec& spec) {
    validate(spec);
    Lattice out;
    out.levels.resize(static_cast<std::size_t>(spec.steps) + 1);
    for (int k = 0; k <= spec.steps; ++k) {
        auto& level = out.levels[static_cast<std::size_t>(k)];
        level.resize(static_cast<std::size_t>(k) + 1);
        for (int i = 0; i <= k; ++i) {
            level[static_cast<std::size_t>(i)] =
                spec.x0 * std::pow(spec.u, k - i) * std::pow(spec.d, i);
        }
    }
    return out;
}

// Terminal prices only (O(n) memory; large-n pricing path).
inline std::vector<double> terminal_prices(const TreeSpec& spec) {
    validate(spec);
    std::vector<double> out(static_cast<std::size_t>(spec.steps) + 1);
    for (int i = 0; i <= spec.steps; ++i) {
        out[static_cast<std::size_t>(i)] =
            spec.x0 * std::pow(spec.u, spec.steps - i) * std::pow(spec.d, i);
    }
    return out;
}

// Probabilities propagate forwards: Binomial(n, p_hat) masses on the
// terminal nodes. The pmf shortcut needs the same p_hat at every step, so
// a non-constant discount schedule is refused.
inline TerminalDistribution forward_induction(const TreeSpec& spec) {
    validate(spec);
    if (!detail::constant_schedule(spec)) {
        throw ConfigError(
            "forward induction needs a constant discount schedule: the "
            "Binomial pmf assumes the same up/down probabilities everywhere");
    }
    const double p = detail::step_prob(spec, spec.step_df[0]);
    const int n = spec.steps;
    TerminalDistribution out;
    out.outcomes.resize(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        const int j = n - i;  // up-moves at top-down index i
        out.outcomes[static_cast<std::size_t>(i)] = {
            spec.x0 * std::pow(spec.u, j) * std::pow(spec.d, i),
            detail::binomial_mass(n, j, p)};
    }
    return out;
}

// Real-world pmf over the terminal nodes (reporting only).
inline std::vector<double> real_world_pmf(const TreeSpec& spec) {
    validate(spec);
    if (!spec.real_world_p) {
        throw ConfigError("no real-world probability supplied");
    }
    const int n = spec.steps;
    std::vector<double> out(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        out[static_cast<std::size_t>(i)] =
            detail::binomial_mass(n, n - i, *spec.real_world_p);
    }
    return out;
}

// Expectations propagate backwards: one discounted-expectation sweep per
// level, p_hat recomputed per step from the discount schedule. Root only;
// O(n) working memory.
inline double backward_root(const TreeSpec& spec,
                            std::span<const double> terminal_values) {
    validate(spec);
    if (terminal_values.size() != static_cast<std::size_t>(spec.steps) + 1) {
        std::ostringstream os;
        os << "terminal values: got " << terminal_values.size() << ", expected "
           << spec.steps + 1;
        throw StructuralError(os.str());
    }
    std::vector<double> values(terminal_values.begin(), terminal_values.end());
    for (int k = spec.steps - 1; k >= 0; --k) {
        const double df = detail::step_discount(spec, k);
        const double p = detail::step_prob(spec, df);
        for (int i = 0; i <= k; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            values[ui] = df * (p * values[ui] + (1.0 - p) * values[ui + 1]);
        }
    }
    return values[0];
}

// Backward induction keeping every level (tableau use; O(n^2) memory).
inline BackwardResult backward_induction(const TreeSpec& spec,
                                         std::span<const double> terminal_values) {
    validate(spec);
    if (terminal_values.size() != static_cast<std::size_t>(spec.steps) + 1) {
        std::ostringstream os;
        os << "terminal values: got " << terminal_values.size() << ", expected "
           << spec.steps + 1;
        throw StructuralError(os.str());
    }
    BackwardResult out;
    out.values.levels.resize(static_cast<std::size_t>(spec.steps) + 1);
    out.values.levels[static_cast<std::size_t>(spec.steps)].assign(
        terminal_values.begin(), terminal_values.end());
    for (int k = spec.steps - 1; k >= 0; --k) {
        const double df = detail::step_discount(spec, k);
        const double p = detail::step_prob(spec, df);
        const auto& next = out.values.levels[static_cast<std::size_t>(k) + 1];
        auto& level = out.values.levels[static_cast<std::size_t>(k)];
        level.resize(static_cast<std::size_t>(k) + 1);
        for (int i = 0; i <= k; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            level[ui] = df * (p * next[ui] + (1.0 - p) * next[ui + 1]);
        }
    }
    out.root = out.values.levels[0][0];
    return out;
}

// Rolled-up money-market discounting: the product of the per-step discount
// factors. An empty schedule discounts nothing; the flag records that.
inline MmaDiscount mma_discount(std::span<const double> step_df) {
    if (step_df.empty()) return {1.0, true};
    double total = 1.0;
    for (const double df : step_df) {
        if (!(df > 0.0)) throw StructuralError("discount factors must be positive");
        total *= df;
    }
    return {total, false};
}

inline double total_discount(const TreeSpec& spec) {
    if (spec.step_df.size() == 1) {
        return std::pow(spec.step_df[0], spec.steps);
    }
    return mma_discount(spec.step_df).total_df;
}

// Discounted expectation of the terminal payoff under the martingale pmf.
// Agrees with the backward-induction root.
inline double price_forward(const TreeSpec& spec,
                            std::span<const double> terminal_payoffs) {
    if (terminal_payoffs.size() != static_cast<std::size_t>(spec.steps) + 1) {
        std::ostringstream os;
        os << "terminal payoffs: got " << terminal_payoffs.size()
           << ", expected " << spec.steps + 1;
        throw StructuralError(os.str());
    }
    const TerminalDistribution dist = forward_induction(spec);
    double expectation = 0.0;
    for (std::size_t i = 0; i < dist.outcomes.size(); ++i) {
        expectation += dist.outcomes[i].probability * terminal_payoffs[i];
    }
    return total_discount(spec) * expectation;
}

namespace detail {

inline void require_x_only(const PayoffExpr& payoff) {
    if (payoff.references_y()) {
        throw ConfigError(
            "payoff references Y on a single-asset tree; use the two-asset "
            "form instead");
    }
}

}  // namespace detail

inline std::vector<double> terminal_payoffs(const TreeSpec& spec,
                                            const PayoffExpr& payoff) {
    detail::require_x_only(payoff);
    std::vector<double> values = terminal_prices(spec);
    for (double& v : values) v = evaluate(payoff, v, 1.0);
    return values;
}

inline double price_forward(const TreeSpec& spec, const PayoffExpr& payoff) {
    const std::vector<double> v = terminal_payoffs(spec, payoff);
    return price_forward(spec, v);
}

// Exchange-option price max(X_T - Y_T, 0) on the symmetric tree, via the
// Y-numeraire reduction: y0 * E^Y[max(W_T - 1, 0)] with W = X/Y and the
// per-step probability exactly 1/2 by construction.
inline double exchange_tree_price(double x0, double y0, double sigma,
                                  double maturity, int steps) {
    if (!(x0 > 0.0 && y0 > 0.0)) {
        throw StructuralError("x0 and y0 must be positive");
    }
    const SymmetricFactors f = symmetric_tree_factors(sigma, maturity, steps);
    if (f.degenerate) return std::fmax(x0 - y0, 0.0);
    const double w0 = x0 / y0;
    const double log_u = std::log1p(f.u - 1.0);
    const double log_d = std::log1p(f.d - 1.0);
    double acc = 0.0;
    for (int j = 0; j <= steps; ++j) {
        const double w = w0 * std::exp(j * log_u + (steps - j) * log_d);
        if (w <= 1.0) continue;
        acc += detail::binomial_mass(steps, j, 0.5) * (w - 1.0);
    }
    return y0 * acc;
}

// Symmetric-tree price of a homothetic claim on (X, Y): the payoff must
// satisfy V(sX, sY) = s V(X, Y), so V/Y is a function of W = X/Y alone and
// one-dimensional induction applies. Non-homothetic (or inconclusive)
// payoffs are refused before any lattice work.
inline double two_asset_tree_price(double x0, double y0, double sigma,
                                   double maturity, int steps,
                                   const PayoffExpr& payoff) {
    if (!(x0 > 0.0 && y0 > 0.0)) {
        throw StructuralError("x0 and y0 must be positive");
    }
    const HomotheticityVerdict verdict = check_homothetic(payoff);
    if (verdict.verdict != Homotheticity::Homothetic) {
        std::ostringstream os;
        os << "two-asset pricing refused: payoff is "
           << (verdict.verdict == Homotheticity::NotHomothetic
                   ? "not homothetic"
                   : "of undetermined homotheticity")
           << " (max scaling deviation " << verdict.max_deviation << ")";
        throw ConfigError(os.str());
    }
    const SymmetricFactors f = symmetric_tree_factors(sigma, maturity, steps);
    const double w0 = x0 / y0;
    if (f.degenerate) return y0 * evaluate(payoff, w0, 1.0);
    const double log_u = std::log1p(f.u - 1.0);
    const double log_d = std::log1p(f.d - 1.0);
    double acc = 0.0;
    for (int j = 0; j <= steps; ++j) {
        const double w = w0 * std::exp(j * log_u + (steps - j) * log_d);
        acc += detail::binomial_mass(steps, j, 0.5) * evaluate(payoff, w, 1.0);
    }
    return y0 * acc;
}

}  // namespace exopt
