// exopt: binomial-lattice and closed-form pricing of exchange options.
//
// Subcommands: one-step, tree, closed-form, converge, moments, tableau.
// Output formats: table (human, 2 dp money / 4 dp probabilities), csv and
// json (machine, 17 significant digits). Output is buffered and written
// only on success, so a nonzero exit never leaves partial output behind.
//
// Exit codes: 0 ok, 2 flag errors, 3 arbitrage/configuration errors,
// 4 payoff parse errors.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "exopt/analytic.hpp"
#include "exopt/format.hpp"
#include "exopt/lattice.hpp"
#include "exopt/one_period.hpp"
#include "exopt/payoff_expr.hpp"
#include "exopt/tableau.hpp"

namespace {

using json = nlohmann::ordered_json;

enum class Format { Table, Csv, Json };

Format parse_format(const std::string& s) {
    if (s == "table") return Format::Table;
    if (s == "csv") return Format::Csv;
    return Format::Json;
}

// Flag misuse detected after CLI11 parsing (mode conflicts, bad grids).
struct FlagError {
    std::string message;
};

std::string money(double v) { return exopt::format_fixed(v, 2); }
std::string prob(double v) { return exopt::format_fixed(v, 4); }

std::string kv_table(const std::vector<std::pair<std::string, std::string>>& rows) {
    std::size_t width = 0;
    for (const auto& [k, v] : rows) width = std::max(width, k.size());
    std::ostringstream os;
    for (const auto& [k, v] : rows) {
        os << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
    }
    return os.str();
}

std::string csv_single_row(const std::vector<std::pair<std::string, double>>& cols) {
    std::ostringstream os;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        os << (i ? "," : "") << cols[i].first;
    }
    os << '\n';
    for (std::size_t i = 0; i < cols.size(); ++i) {
        os << (i ? "," : "") << exopt::format_full(cols[i].second);
    }
    os << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// one-step

struct OneStepFlags {
    std::optional<double> x_fwd, x_up, x_dn, df, v_up, v_dn;
    std::optional<double> x0, y0, y_up, y_dn;
};

void require_flag(const std::optional<double>& value, const char* flag,
                  const char* context = "") {
    if (!value) throw FlagError{std::string(flag) + " is required" + context};
}

std::string run_one_step(const OneStepFlags& f, Format format) {
    const bool two_asset = f.y0.has_value();
    if (two_asset) {
        require_flag(f.x0, "--x0", " with --y0");
        require_flag(f.y_up, "--y-up", " with --y0");
        require_flag(f.y_dn, "--y-dn", " with --y0");
        require_flag(f.x_up, "--x-up", " with --y0");
        require_flag(f.x_dn, "--x-dn", " with --y0");
        require_flag(f.v_up, "--v-up", " with --y0");
        require_flag(f.v_dn, "--v-dn", " with --y0");
        if (f.x_fwd || f.df) {
            throw FlagError{"--x-fwd/--df do not apply to the two-asset form"};
        }
        const exopt::TwoAssetOneStep t{*f.x0, *f.y0, *f.x_up, *f.x_dn, *f.y_up, *f.y_dn};
        const exopt::BinaryClaim c{*f.v_up, *f.v_dn};
        const double p_y = exopt::two_asset_probs(t);
        const auto w = exopt::two_asset_weights(t, c);
        const double value = exopt::two_asset_price(t, c);
        switch (format) {
            case Format::Table:
                return kv_table({{"p_y", prob(p_y)},
                                 {"a_x", prob(w.a_x)},
                                 {"a_y", prob(w.a_y)},
                                 {"value", money(value)}});
            case Format::Csv:
                return csv_single_row(
                    {{"p_y", p_y}, {"a_x", w.a_x}, {"a_y", w.a_y}, {"value", value}});
            case Format::Json: {
                json j{{"p_y", p_y}, {"a_x", w.a_x}, {"a_y", w.a_y}, {"value", value}};
                return j.dump(2) + "\n";
            }
        }
    }
    require_flag(f.x_fwd, "--x-fwd");
    require_flag(f.x_up, "--x-up");
    require_flag(f.x_dn, "--x-dn");
    require_flag(f.v_up, "--v-up");
    require_flag(f.v_dn, "--v-dn");
    if (f.x0 || f.y_up || f.y_dn) {
        throw FlagError{"--x0/--y-up/--y-dn require the two-asset form (--y0)"};
    }
    const exopt::OneStepMarket m{*f.x_fwd, *f.x_up, *f.x_dn, f.df.value_or(1.0)};
    const exopt::BinaryClaim c{*f.v_up, *f.v_dn};
    const auto p = exopt::martingale_probs(m);
    const auto w = exopt::replication_weights(m, c);
    const double value = exopt::price_one_step(m, c);
    switch (format) {
        case Format::Table:
            return kv_table({{"p_up", prob(p.p_up)},
                             {"p_dn", prob(p.p_dn)},
                             {"a_x", prob(w.a_x)},
                             {"a_rf", money(w.a_rf)},
                             {"value", money(value)}});
        case Format::Csv:
            return csv_single_row({{"p_up", p.p_up},
                                   {"p_dn", p.p_dn},
                                   {"a_x", w.a_x},
                                   {"a_rf", w.a_rf},
                                   {"value", value}});
        case Format::Json: {
            json j{{"p_up", p.p_up},
                   {"p_dn", p.p_dn},
                   {"a_x", w.a_x},
                   {"a_rf", w.a_rf},
                   {"value", value}};
            return j.dump(2) + "\n";
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// tree

struct TreeFlags {
    std::optional<double> x0, u, d, y0, sigma, maturity, real_world_p;
    int steps = 0;
    std::vector<double> df;
    std::string payoff;
};

exopt::TreeSpec tree_spec_from(const TreeFlags& f) {
    exopt::TreeSpec spec;
    spec.x0 = *f.x0;
    spec.u = *f.u;
    spec.d = *f.d;
    spec.steps = f.steps;
    spec.step_df = f.df.empty() ? std::vector<double>{1.0} : f.df;
    if (spec.step_df.size() != 1 &&
        spec.step_df.size() != static_cast<std::size_t>(f.steps)) {
        throw FlagError{"--df takes one value or exactly --steps values"};
    }
    spec.real_world_p = f.real_world_p;
    return spec;
}

std::string run_tree(const TreeFlags& f, Format format) {
    if (!f.x0) throw FlagError{"--x0 is required"};
    if (f.payoff.empty()) throw FlagError{"--payoff is required"};
    if (f.steps < 1) throw FlagError{"--steps must be >= 1"};
    const exopt::PayoffExpr payoff = exopt::parse(f.payoff);

    if (f.y0) {  // two-asset symmetric tree
        if (!f.sigma || !f.maturity) {
            throw FlagError{"--sigma and --maturity are required with --y0"};
        }
        if (f.u || f.d || !f.df.empty()) {
            throw FlagError{"--u/--d/--df do not apply to the two-asset form"};
        }
        const double value = exopt::two_asset_tree_price(*f.x0, *f.y0, *f.sigma,
                                                         *f.maturity, f.steps, payoff);
        switch (format) {
            case Format::Table:
                return kv_table({{"value", money(value)}});
            case Format::Csv:
                return csv_single_row({{"value", value}});
            case Format::Json:
                return json{{"value", value}}.dump(2) + "\n";
        }
    }
    if (!f.u || !f.d) throw FlagError{"--u and --d are required"};
    const exopt::TreeSpec spec = tree_spec_from(f);
    const std::vector<double> terminal = exopt::terminal_payoffs(spec, payoff);
    const double root = exopt::backward_root(spec, terminal);
    const bool constant_df = exopt::detail::constant_schedule(spec);
    std::optional<double> expectation;
    if (constant_df) {
        const auto dist = exopt::forward_induction(spec);
        double e = 0.0;
        for (std::size_t i = 0; i < dist.outcomes.size(); ++i) {
            e += dist.outcomes[i].probability * terminal[i];
        }
        expectation = e;
    }
    const double total_df = exopt::total_discount(spec);
    switch (format) {
        case Format::Table: {
            std::vector<std::pair<std::string, std::string>> rows{
                {"price", money(root)}};
            if (expectation) rows.push_back({"expectation", money(*expectation)});
            rows.push_back({"total_df", prob(total_df)});
            if (constant_df) {
                const double p = exopt::detail::step_prob(spec, spec.step_df[0]);
                rows.push_back({"p_hat", prob(p)});
            }
            return kv_table(rows);
        }
        case Format::Csv: {
            std::vector<std::pair<std::string, double>> cols{{"price", root}};
            if (expectation) cols.push_back({"expectation", *expectation});
            cols.push_back({"total_df", total_df});
            return csv_single_row(cols);
        }
        case Format::Json: {
            json j{{"price", root}, {"total_df", total_df}, {"steps", f.steps}};
            if (expectation) j["expectation"] = *expectation;
            if (constant_df) {
                j["p_hat"] = exopt::detail::step_prob(spec, spec.step_df[0]);
            }
            return j.dump(2) + "\n";
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// closed-form

struct ClosedFormFlags {
    std::optional<double> x0, y0, spot, strike, rate, sigma, maturity;
};

std::string run_closed_form(const ClosedFormFlags& f, Format format) {
    if (!f.sigma || !f.maturity) {
        throw FlagError{"--sigma and --maturity are required"};
    }
    exopt::ExchangeOptionInputs in{};
    if (f.strike) {  // cash numeraire: y0 = K e^{-rT}
        if (!f.spot) throw FlagError{"--spot is required with --strike"};
        if (f.x0 || f.y0) {
            throw FlagError{"--x0/--y0 conflict with --spot/--strike"};
        }
        in = {*f.spot, *f.strike * std::exp(-f.rate.value_or(0.0) * *f.maturity),
              *f.sigma, *f.maturity};
    } else {
        if (!f.x0 || !f.y0) {
            throw FlagError{"--x0 and --y0 (or --spot/--strike) are required"};
        }
        if (f.rate || f.spot) {
            throw FlagError{"--spot/--rate apply only with --strike"};
        }
        in = {*f.x0, *f.y0, *f.sigma, *f.maturity};
    }
    const auto r = exopt::margrabe_price(in);
    const double put = exopt::exchange_put(in);
    const auto deltas = exopt::exchange_delta(in);
    switch (format) {
        case Format::Table:
            return kv_table({{"call", money(r.call)},
                             {"put", money(put)},
                             {"d_plus", prob(r.d_plus)},
                             {"d_minus", prob(r.d_minus)},
                             {"delta_x", prob(deltas.delta_x)},
                             {"delta_y", prob(deltas.delta_y)}});
        case Format::Csv:
            return csv_single_row({{"call", r.call},
                                   {"put", put},
                                   {"d_plus", r.d_plus},
                                   {"d_minus", r.d_minus},
                                   {"delta_x", deltas.delta_x},
                                   {"delta_y", deltas.delta_y}});
        case Format::Json: {
            json j{{"call", r.call},          {"put", put},
                   {"d_plus", r.d_plus},      {"d_minus", r.d_minus},
                   {"delta_x", deltas.delta_x}, {"delta_y", deltas.delta_y}};
            return j.dump(2) + "\n";
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// converge

struct ConvergeFlags {
    std::optional<double> x0, y0, sigma, maturity;
    std::vector<int> grid = {16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
};

std::string run_converge(const ConvergeFlags& f, Format format) {
    if (!f.x0 || !f.y0 || !f.sigma || !f.maturity) {
        throw FlagError{"--x0, --y0, --sigma and --maturity are required"};
    }
    if (f.grid.empty()) throw FlagError{"--grid must not be empty"};
    for (const int n : f.grid) {
        if (n < 1) throw FlagError{"--grid entries must be >= 1"};
    }
    const double closed =
        exopt::margrabe_price({*f.x0, *f.y0, *f.sigma, *f.maturity}).call;
    struct Row {
        int n;
        double tree, closed, abs_error;
    };
    std::vector<Row> rows;
    rows.reserve(f.grid.size());
    for (const int n : f.grid) {
        const double tree =
            exopt::exchange_tree_price(*f.x0, *f.y0, *f.sigma, *f.maturity, n);
        rows.push_back({n, tree, closed, std::abs(tree - closed)});
    }
    switch (format) {
        case Format::Table: {
            std::ostringstream os;
            os << std::left << std::setw(8) << "n" << std::setw(22) << "tree_price"
               << std::setw(22) << "closed_form" << "abs_error\n";
            for (const auto& r : rows) {
                os << std::left << std::setw(8) << r.n << std::setw(22)
                   << exopt::format_full(r.tree) << std::setw(22)
                   << exopt::format_full(r.closed) << exopt::format_full(r.abs_error)
                   << '\n';
            }
            return os.str();
        }
        case Format::Csv: {
            std::ostringstream os;
            os << "n,tree_price,closed_form,abs_error\n";
            for (const auto& r : rows) {
                os << r.n << ',' << exopt::format_full(r.tree) << ','
                   << exopt::format_full(r.closed) << ','
                   << exopt::format_full(r.abs_error) << '\n';
            }
            return os.str();
        }
        case Format::Json: {
            json arr = json::array();
            for (const auto& r : rows) {
                arr.push_back({{"n", r.n},
                               {"tree_price", r.tree},
                               {"closed_form", r.closed},
                               {"abs_error", r.abs_error}});
            }
            return json{{"rows", arr}}.dump(2) + "\n";
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// moments

struct MomentsFlags {
    std::optional<double> sigma, maturity;
    double x0 = 1.0;
    double y0 = 1.0;
    std::vector<double> lambdas = {-1.0, 0.5, 2.0, 3.0};
    std::vector<int> grid = {100, 1000, 10000, 100000};
};

std::string run_moments(const MomentsFlags& f, Format format) {
    if (!f.sigma || !f.maturity) {
        throw FlagError{"--sigma and --maturity are required"};
    }
    if (f.lambdas.empty() || f.grid.empty()) {
        throw FlagError{"--lambdas and --grid must not be empty"};
    }
    for (const int n : f.grid) {
        if (n < 1) throw FlagError{"--grid entries must be >= 1"};
    }
    struct Row {
        double lambda;
        int n;
        double finite, limit, rel_error, residual;
    };
    std::vector<Row> rows;
    for (const double lam : f.lambdas) {
        const double residual = exopt::moment_relation_residual(lam, *f.sigma, *f.maturity);
        for (const int n : f.grid) {
            const exopt::MomentSpec ms{lam,     *f.sigma, *f.maturity, n,
                                       exopt::Measure::YNumeraire, f.x0, f.y0};
            const double finite = exopt::finite_n_moment(ms);
            const double limit = exopt::limit_moment(ms);
            rows.push_back({lam, n, finite, limit,
                            std::abs(finite - limit) / std::abs(limit), residual});
        }
    }
    switch (format) {
        case Format::Table: {
            std::ostringstream os;
            os << std::left << std::setw(10) << "lambda" << std::setw(10) << "n"
               << std::setw(24) << "finite_moment" << std::setw(24) << "limit_moment"
               << std::setw(16) << "rel_error" << "relation_residual\n";
            for (const auto& r : rows) {
                os << std::left << std::setw(10) << exopt::format_full(r.lambda)
                   << std::setw(10) << r.n << std::setw(24)
                   << exopt::format_full(r.finite) << std::setw(24)
                   << exopt::format_full(r.limit) << std::setw(16)
                   << exopt::format_full(r.rel_error)
                   << exopt::format_full(r.residual) << '\n';
            }
            return os.str();
        }
        case Format::Csv: {
            std::ostringstream os;
            os << "lambda,n,finite_moment,limit_moment,rel_error,relation_residual\n";
            for (const auto& r : rows) {
                os << exopt::format_full(r.lambda) << ',' << r.n << ','
                   << exopt::format_full(r.finite) << ',' << exopt::format_full(r.limit)
                   << ',' << exopt::format_full(r.rel_error) << ','
                   << exopt::format_full(r.residual) << '\n';
            }
            return os.str();
        }
        case Format::Json: {
            json arr = json::array();
            for (const auto& r : rows) {
                arr.push_back({{"lambda", r.lambda},
                               {"n", r.n},
                               {"finite_moment", r.finite},
                               {"limit_moment", r.limit},
                               {"rel_error", r.rel_error},
                               {"relation_residual", r.residual}});
            }
            return json{{"rows", arr}}.dump(2) + "\n";
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// tableau

std::string run_tableau(const TreeFlags& f, Format format) {
    require_flag(f.x0, "--x0");
    require_flag(f.u, "--u");
    require_flag(f.d, "--d");
    if (f.steps < 1) throw FlagError{"--steps must be >= 1"};
    if (f.payoff.empty()) throw FlagError{"--payoff is required"};
    if (f.y0 || f.sigma || f.maturity) {
        throw FlagError{"tableau renders single-asset trees only"};
    }
    const exopt::PayoffExpr payoff = exopt::parse(f.payoff);
    const exopt::TreeSpec spec = tree_spec_from(f);
    const exopt::ForwardTableau fwd = exopt::make_forward_tableau(spec, payoff);
    const exopt::BackwardTableau bwd = exopt::make_backward_tableau(spec, payoff);
    switch (format) {
        case Format::Table: {
            std::ostringstream os;
            os << "Forward tableau (prices, terminal payoff, probabilities)\n"
               << exopt::render_forward_table(fwd) << '\n'
               << "expectation " << money(fwd.expectation) << ", total_df "
               << prob(fwd.total_df) << ", price " << money(fwd.price) << "\n\n"
               << "Backward tableau (claim values)\n"
               << exopt::render_backward_table(bwd) << '\n'
               << "root " << money(bwd.root) << '\n';
            return os.str();
        }
        case Format::Csv: {
            std::ostringstream os;
            os << exopt::render_forward_csv(fwd) << '\n'
               << exopt::render_backward_csv(bwd);
            return os.str();
        }
        case Format::Json: {
            json j;
            j["forward"] = {{"prices", fwd.prices.levels},
                            {"payoff", fwd.payoffs},
                            {"prob", fwd.probs},
                            {"expectation", fwd.expectation},
                            {"total_df", fwd.total_df},
                            {"price", fwd.price}};
            if (fwd.real_probs) j["forward"]["real_prob"] = *fwd.real_probs;
            j["backward"] = {{"values", bwd.values.levels}, {"root", bwd.root}};
            return j.dump(2) + "\n";
        }
    }
    return {};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Binomial-lattice and closed-form pricing of exchange options"};
    app.require_subcommand(1);
    app.set_config("--config");
    // let --format/--output/--config appear after the subcommand too
    app.fallthrough();

    std::string format_str = "table";
    app.add_option("--format", format_str, "Output format: table, csv or json")
        ->envname("EXOPT_FORMAT")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    std::string output_path;
    app.add_option("--output", output_path, "Write output to a file instead of stdout");

    OneStepFlags one;
    auto* one_cmd = app.add_subcommand("one-step", "Price a binary claim over one period");
    one_cmd->add_option("--x-fwd", one.x_fwd, "Forward price of X");
    one_cmd->add_option("--x-up", one.x_up, "X in the up state");
    one_cmd->add_option("--x-dn", one.x_dn, "X in the down state");
    one_cmd->add_option("--df", one.df, "Discount factor for the period");
    one_cmd->add_option("--v-up", one.v_up, "Claim payout in the up state");
    one_cmd->add_option("--v-dn", one.v_dn, "Claim payout in the down state");
    one_cmd->add_option("--x0", one.x0, "Spot of X (two-asset form)");
    one_cmd->add_option("--y0", one.y0, "Spot of the numeraire asset Y");
    one_cmd->add_option("--y-up", one.y_up, "Y in the up state");
    one_cmd->add_option("--y-dn", one.y_dn, "Y in the down state");

    TreeFlags tree;
    auto* tree_cmd = app.add_subcommand("tree", "Price a payoff on a geometric tree");
    tree_cmd->add_option("--x0", tree.x0, "Spot of X");
    tree_cmd->add_option("--u", tree.u, "Up factor");
    tree_cmd->add_option("--d", tree.d, "Down factor");
    tree_cmd->add_option("--steps", tree.steps, "Number of steps");
    tree_cmd->add_option("--df", tree.df, "Per-step discount factor(s)")->delimiter(',');
    tree_cmd->add_option("--payoff", tree.payoff, "Payoff expression over X (or X,Y with --y0)");
    tree_cmd->add_option("--y0", tree.y0, "Spot of Y: price a homothetic payoff on the symmetric tree");
    tree_cmd->add_option("--sigma", tree.sigma, "Volatility of X/Y (two-asset form)");
    tree_cmd->add_option("--maturity", tree.maturity, "Maturity in years (two-asset form)");
    tree_cmd->add_option("--real-world-p", tree.real_world_p, "Report the real-world pmf too");

    ClosedFormFlags cf;
    auto* cf_cmd = app.add_subcommand("closed-form", "Exchange-option closed form");
    cf_cmd->add_option("--x0", cf.x0, "Spot of X");
    cf_cmd->add_option("--y0", cf.y0, "Spot of Y");
    cf_cmd->add_option("--spot", cf.spot, "Spot (cash-numeraire form)");
    cf_cmd->add_option("--strike", cf.strike, "Strike (cash-numeraire form)");
    cf_cmd->add_option("--rate", cf.rate, "Continuously compounded rate");
    cf_cmd->add_option("--sigma", cf.sigma, "Volatility of X/Y");
    cf_cmd->add_option("--maturity", cf.maturity, "Maturity in years");

    ConvergeFlags conv;
    auto* conv_cmd = app.add_subcommand("converge", "Tree vs closed form over a step grid");
    conv_cmd->add_option("--x0", conv.x0, "Spot of X");
    conv_cmd->add_option("--y0", conv.y0, "Spot of Y");
    conv_cmd->add_option("--sigma", conv.sigma, "Volatility of X/Y");
    conv_cmd->add_option("--maturity", conv.maturity, "Maturity in years");
    conv_cmd->add_option("--grid", conv.grid, "Step counts")->delimiter(',');

    MomentsFlags mom;
    auto* mom_cmd = app.add_subcommand("moments", "Finite-n vs limit moments");
    mom_cmd->add_option("--sigma", mom.sigma, "Volatility of X/Y");
    mom_cmd->add_option("--maturity", mom.maturity, "Maturity in years");
    mom_cmd->add_option("--lambdas", mom.lambdas, "Moment exponents")->delimiter(',');
    mom_cmd->add_option("--grid", mom.grid, "Step counts")->delimiter(',');
    mom_cmd->add_option("--x0", mom.x0, "Spot of X");
    mom_cmd->add_option("--y0", mom.y0, "Spot of Y");

    TreeFlags tab;
    auto* tab_cmd = app.add_subcommand("tableau", "Render forward and backward tableaus");
    tab_cmd->add_option("--x0", tab.x0, "Spot of X");
    tab_cmd->add_option("--u", tab.u, "Up factor");
    tab_cmd->add_option("--d", tab.d, "Down factor");
    tab_cmd->add_option("--steps", tab.steps, "Number of steps");
    tab_cmd->add_option("--df", tab.df, "Per-step discount factor(s)")->delimiter(',');
    tab_cmd->add_option("--payoff", tab.payoff, "Payoff expression over X");
    tab_cmd->add_option("--real-world-p", tab.real_world_p, "Append the real-world pmf column");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return 2;
    }

    std::string out;
    try {
        const Format format = parse_format(format_str);
        if (one_cmd->parsed()) out = run_one_step(one, format);
        else if (tree_cmd->parsed()) out = run_tree(tree, format);
        else if (cf_cmd->parsed()) out = run_closed_form(cf, format);
        else if (conv_cmd->parsed()) out = run_converge(conv, format);
        else if (mom_cmd->parsed()) out = run_moments(mom, format);
        else if (tab_cmd->parsed()) out = run_tableau(tab, format);
    } catch (const FlagError& e) {
        std::cerr << "error: " << e.message << "\n";
        return 2;
    } catch (const exopt::ParseError& e) {
        std::cerr << exopt::format_parse_error(e) << "\n";
        return 4;
    } catch (const exopt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }

    if (output_path.empty()) {
        std::fputs(out.c_str(), stdout);
        return 0;
    }
    std::ofstream file(output_path, std::ios::binary);
    if (!file) {
        std::cerr << "error: cannot open '" << output_path << "' for writing\n";
        return 2;
    }
    file << out;
    return file.good() ? 0 : 2;
}
