#pragma once

// Forward and backward tableaus over a geometric tree, plus renderers that
// mirror the layout the two tableaus are usually printed in: columns are
// time steps, rows are nodes top-down, and the forward tableau carries
// trailing Payoff and Prob columns. CSV cells are rendered at 2 dp
// (probabilities at 4 dp) so output can be diffed against the printed
// tables; the machine-precision path is the CLI's JSON output.

#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "exopt/format.hpp"
#include "exopt/lattice.hpp"
#include "exopt/payoff_expr.hpp"

namespace exopt {

struct ForwardTableau {
    Lattice prices;
    std::vector<double> payoffs;  // terminal, top-down
    std::vector<double> probs;    // martingale pmf, top-down
    std::optional<std::vector<double>> real_probs;
    double expectation = 0.0;
    double total_df = 1.0;
    double price = 0.0;
};

struct BackwardTableau {
    Lattice values;
    double root = 0.0;
};

inline ForwardTableau make_forward_tableau(const TreeSpec& spec,
                                           const PayoffExpr& payoff) {
    ForwardTableau out;
    out.prices = build_lattice(spec);
    out.payoffs = terminal_payoffs(spec, payoff);
    const TerminalDistribution dist = forward_induction(spec);
    out.probs.reserve(dist.outcomes.size());
    for (const auto& o : dist.outcomes) out.probs.push_back(o.probability);
    for (std::size_t i = 0; i < out.payoffs.size(); ++i) {
        out.expectation += out.probs[i] * out.payoffs[i];
    }
    out.total_df = total_discount(spec);
    out.price = out.total_df * out.expectation;
    if (spec.real_world_p) out.real_probs = real_world_pmf(spec);
    return out;
}

inline BackwardTableau make_backward_tableau(const TreeSpec& spec,
                                             const PayoffExpr& payoff) {
    const std::vector<double> terminal = terminal_payoffs(spec, payoff);
    BackwardResult res = backward_induction(spec, terminal);
    return {std::move(res.values), res.root};
}

namespace detail {

// Row i spans columns i..n: i down-moves first, then up-moves.
inline double tableau_cell(const Lattice& lat, int row, int col) {
    return lat.at(col, row);
}

inline std::string csv_lattice_rows(const Lattice& lat,
                                    const std::vector<std::string>& trailing_headers,
                                    const std::vector<std::vector<std::string>>& trailing_cells) {
    const int n = lat.steps();
    std::ostringstream os;
    for (int col = 0; col <= n; ++col) {
        if (col > 0) os << ',';
        os << col;
    }
    for (const auto& h : trailing_headers) os << ',' << h;
    os << '\n';
    for (int row = 0; row <= n; ++row) {
        for (int col = 0; col <= n; ++col) {
            if (col > 0) os << ',';
            if (col >= row) os << format_fixed(tableau_cell(lat, row, col), 2);
        }
        for (const auto& cells : trailing_cells) os << ',' << cells[row];
        os << '\n';
    }
    return os.str();
}

inline std::string table_lattice_rows(const Lattice& lat,
                                      const std::vector<std::string>& trailing_headers,
                                      const std::vector<std::vector<std::string>>& trailing_cells) {
    const int n = lat.steps();
    constexpr int kWidth = 9;
    std::ostringstream os;
    for (int col = 0; col <= n; ++col) os << std::setw(kWidth) << col;
    for (const auto& h : trailing_headers) os << std::setw(kWidth) << h;
    os << '\n';
    for (int row = 0; row <= n; ++row) {
        for (int col = 0; col <= n; ++col) {
            if (col >= row) {
                os << std::setw(kWidth) << format_fixed(tableau_cell(lat, row, col), 2);
            } else {
                os << std::setw(kWidth) << "";
            }
        }
        for (const auto& cells : trailing_cells) os << std::setw(kWidth) << cells[row];
        os << '\n';
    }
    return os.str();
}

inline std::vector<std::string> fixed_cells(const std::vector<double>& v, int dp) {
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const double x : v) out.push_back(format_fixed(x, dp));
    return out;
}

}  // namespace detail

inline std::string render_forward_csv(const ForwardTableau& t) {
    std::vector<std::string> headers = {"Payoff", "Prob"};
    std::vector<std::vector<std::string>> cells = {
        detail::fixed_cells(t.payoffs, 2), detail::fixed_cells(t.probs, 4)};
    if (t.real_probs) {
        headers.push_back("RealProb");
        cells.push_back(detail::fixed_cells(*t.real_probs, 4));
    }
    return detail::csv_lattice_rows(t.prices, headers, cells);
}

inline std::string render_backward_csv(const BackwardTableau& t) {
    return detail::csv_lattice_rows(t.values, {}, {});
}

inline std::string render_forward_table(const ForwardTableau& t) {
    std::vector<std::string> headers = {"Payoff", "Prob"};
    std::vector<std::vector<std::string>> cells = {
        detail::fixed_cells(t.payoffs, 2), detail::fixed_cells(t.probs, 4)};
    if (t.real_probs) {
        headers.push_back("RealProb");
        cells.push_back(detail::fixed_cells(*t.real_probs, 4));
    }
    return detail::table_lattice_rows(t.prices, headers, cells);
}

inline std::string render_backward_table(const BackwardTableau& t) {
    return detail::table_lattice_rows(t.values, {}, {});
}

}  // namespace exopt
