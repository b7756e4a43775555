#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "exopt/analytic.hpp"
#include "exopt/lattice.hpp"
#include "oracles.hpp"

using namespace exopt;

TEST_CASE("symmetric tree factors", "[analytic]") {
    const auto f = symmetric_tree_factors(0.2, 1.0, 1);
    CHECK(f.u == 1.2);
    CHECK(f.d == 0.8);
    CHECK_FALSE(f.degenerate);

    const auto fine = symmetric_tree_factors(0.2, 1.0, 10000);
    CHECK(fine.u == 1.002);
    CHECK(fine.d == 0.998);

    const auto flat = symmetric_tree_factors(0.0, 1.0, 16);
    CHECK(flat.u == 1.0);
    CHECK(flat.d == 1.0);
    CHECK(flat.degenerate);

    CHECK_THROWS_AS(symmetric_tree_factors(2.0, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(symmetric_tree_factors(0.2, 1.0, 0), StructuralError);
}

TEST_CASE("symmetric factors imply up-probability one half", "[analytic]") {
    // exactly 1/2 in exact arithmetic; recovering it from the rounded
    // factors costs a few ulps
    for (int n : {1, 7, 64, 4096}) {
        const auto f = symmetric_tree_factors(0.23, 1.7, n);
        const double implied = (1.0 - f.d) / (f.u - f.d);
        CHECK_THAT(implied, Catch::Matchers::WithinAbs(0.5, 2e-14));
    }
}

TEST_CASE("finite-n moment, hand-evaluated", "[analytic]") {
    const double m = finite_n_moment({2.0, 0.2, 1.0, 1, Measure::YNumeraire, 1.0, 1.0});
    CHECK_THAT(m, Catch::Matchers::WithinRel((1.44 + 0.64) / 2.0, 1e-12));
}

TEST_CASE("finite-n moment identities are exact", "[analytic]") {
    for (int n : {1, 100, 100000}) {
        CHECK(finite_n_moment({0.0, 0.2, 1.0, n, Measure::YNumeraire, 1.0, 1.0}) == 1.0);
        CHECK(finite_n_moment({1.0, 0.2, 1.0, n, Measure::YNumeraire, 1.0, 1.0}) == 1.0);
    }
}

TEST_CASE("finite-n moment converges to the limit", "[analytic][property]") {
    for (double lam : {-1.0, 0.5, 2.0, 3.0}) {
        double prev = 1e99;
        for (int n : {100, 1000}) {
            const MomentSpec ms{lam, 0.2, 1.0, n, Measure::YNumeraire, 1.0, 1.0};
            const double rel =
                std::abs(finite_n_moment(ms) - limit_moment(ms)) / limit_moment(ms);
            CHECK(rel < prev);
            prev = rel;
        }
    }
}

TEST_CASE("limit moments", "[analytic]") {
    CHECK_THAT(limit_moment({1.0, 0.3, 2.0, 1, Measure::YNumeraire, 120.0, 80.0}),
               Catch::Matchers::WithinRel(1.5, 1e-15));
    CHECK_THAT(limit_moment({2.0, 0.2, 1.0, 1, Measure::YNumeraire, 100.0, 100.0}),
               Catch::Matchers::WithinAbs(1.04081, 1e-5));
    CHECK_THAT(limit_moment({-1.0, 0.3, 2.0, 1, Measure::XNumeraire, 120.0, 80.0}),
               Catch::Matchers::WithinRel(80.0 / 120.0, 1e-15));
}

TEST_CASE("lognormal law under both measures", "[analytic]") {
    const double s2t = 0.2 * 0.2 * 1.0;
    const auto y = lognormal_law(Measure::YNumeraire, 100.0, 100.0, 0.2, 1.0);
    CHECK_THAT(y.mean_log, Catch::Matchers::WithinAbs(-0.5 * s2t, 1e-15));
    CHECK(y.var_log == s2t);

    const auto x = lognormal_law(Measure::XNumeraire, 100.0, 100.0, 0.2, 1.0);
    CHECK_THAT(x.mean_log, Catch::Matchers::WithinAbs(0.02, 1e-15));
    CHECK(x.var_log == s2t);

    const auto flat = lognormal_law(Measure::YNumeraire, 110.0, 100.0, 0.2, 0.0);
    CHECK(flat.mean_log == std::log(1.1));
    CHECK(flat.var_log == 0.0);
}

TEST_CASE("normal cdf against quadrature oracle", "[analytic]") {
    CHECK(norm_cdf(0.0) == 0.5);
    CHECK_THAT(norm_cdf(0.1), Catch::Matchers::WithinAbs(0.539828, 1e-6));
    CHECK_THAT(norm_cdf(0.1), Catch::Matchers::WithinAbs(oracles::normal_cdf(0.1), 1e-15));

    double worst = 0.0;
    for (double z = -8.0; z <= 8.0; z += 0.37) {
        worst = std::fmax(worst, std::abs(norm_cdf(z) - oracles::normal_cdf(z)));
    }
    CHECK(worst <= 1e-15);
}

TEST_CASE("normal cdf symmetry and monotonicity", "[analytic][property]") {
    std::mt19937 rng(11u);
    std::uniform_real_distribution<double> zs(-8.0, 8.0);
    for (int it = 0; it < 500; ++it) {
        const double z = zs(rng);
        CHECK(std::abs(norm_cdf(z) + norm_cdf(-z) - 1.0) <= 1e-15);
    }
    double prev = -1.0;
    for (double z = -10.0; z <= 10.0; z += 0.01) {
        const double v = norm_cdf(z);
        CHECK(v >= prev);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
    CHECK(norm_cdf(-40.0) == 0.0);  // saturates
    CHECK(norm_cdf(40.0) == 1.0);
}

TEST_CASE("margrabe price, deterministic limits", "[analytic]") {
    CHECK(margrabe_price({110.0, 100.0, 0.0, 1.0}).call == 10.0);
    CHECK(margrabe_price({110.0, 100.0, 0.2, 0.0}).call == 10.0);
    CHECK(margrabe_price({90.0, 100.0, 0.0, 1.0}).call == 0.0);
    CHECK(margrabe_price({100.0, 100.0, 0.0, 1.0}).call == 0.0);
}

TEST_CASE("margrabe price, symmetric case", "[analytic]") {
    const auto r = margrabe_price({100.0, 100.0, 0.2, 1.0});
    CHECK_THAT(r.d_plus, Catch::Matchers::WithinAbs(0.1, 1e-15));
    CHECK_THAT(r.d_minus, Catch::Matchers::WithinAbs(-0.1, 1e-15));
    CHECK_THAT(r.call,
               Catch::Matchers::WithinRel(100.0 * (2.0 * norm_cdf(0.1) - 1.0), 1e-14));
    CHECK_THAT(r.call, Catch::Matchers::WithinAbs(7.9656, 1e-4));
    // quadrature of the payoff against the lognormal law
    CHECK_THAT(r.call, Catch::Matchers::WithinRel(
                           oracles::exchange_quadrature(100.0, 100.0, 0.2, 1.0), 1e-10));
}

TEST_CASE("margrabe price, asymmetric case against both oracles", "[analytic]") {
    const auto r = margrabe_price({100.0, 80.0, 0.2, 1.0});
    CHECK_THAT(r.call, Catch::Matchers::WithinAbs(21.18, 1e-2));
    CHECK_THAT(r.call, Catch::Matchers::WithinRel(
                           oracles::exchange_quadrature(100.0, 80.0, 0.2, 1.0), 1e-10));
    const double tree = exchange_tree_price(100.0, 80.0, 0.2, 1.0, 100000);
    CHECK_THAT(r.call, Catch::Matchers::WithinRel(tree, 1e-4));
}

TEST_CASE("black-scholes special case", "[analytic]") {
    CHECK_THAT(black_scholes_call(100.0, 100.0, 0.0, 0.2, 1.0),
               Catch::Matchers::WithinAbs(7.9656, 1e-4));
    // sigma -> 0 with S > K e^{-rT}
    const double fwd_intrinsic = 100.0 - 95.0 * std::exp(-0.03);
    CHECK_THAT(black_scholes_call(100.0, 95.0, 0.03, 0.0, 1.0),
               Catch::Matchers::WithinRel(fwd_intrinsic, 1e-14));
    // discounted strike negligible: call tends to spot
    CHECK_THAT(black_scholes_call(100.0, 95.0, 100.0, 0.2, 1.0),
               Catch::Matchers::WithinRel(100.0, 1e-10));
    // equals the exchange price with y0 = K e^{-rT}
    const double via_margrabe =
        margrabe_price({100.0, 95.0 * std::exp(-0.03), 0.25, 1.0}).call;
    CHECK(black_scholes_call(100.0, 95.0, 0.03, 0.25, 1.0) == via_margrabe);
}

TEST_CASE("exchange put and parity", "[analytic]") {
    CHECK(exchange_put({100.0, 100.0, 0.2, 1.0}) ==
          margrabe_price({100.0, 100.0, 0.2, 1.0}).call);
    CHECK(exchange_put({90.0, 100.0, 0.0, 1.0}) == 10.0);
    const double c = margrabe_price({100.0, 80.0, 0.2, 1.0}).call;
    CHECK_THAT(c - exchange_put({100.0, 80.0, 0.2, 1.0}),
               Catch::Matchers::WithinAbs(20.0, 1e-10));
    CHECK_THAT(c - 20.0, Catch::Matchers::WithinAbs(1.18, 1e-2));
}

TEST_CASE("put-call parity, randomized", "[analytic][property]") {
    std::mt19937 rng(314159u);
    std::uniform_real_distribution<double> price(20.0, 250.0);
    std::uniform_real_distribution<double> vol(0.05, 0.6);
    std::uniform_real_distribution<double> mat(0.1, 3.0);
    for (int it = 0; it < 200; ++it) {
        const ExchangeOptionInputs in{price(rng), price(rng), vol(rng), mat(rng)};
        const double c = margrabe_price(in).call;
        const double p = exchange_put(in);
        const double scale = std::fmax(in.x0, in.y0);
        CHECK(std::abs(c - p - (in.x0 - in.y0)) <= 1e-12 * scale);
    }
}

TEST_CASE("deltas match the closed form and finite differences", "[analytic]") {
    CHECK_THAT(exchange_delta({1000.0, 1.0, 0.2, 1.0}).delta_x,
               Catch::Matchers::WithinAbs(1.0, 1e-10));
    CHECK_THAT(exchange_delta({1.0, 1000.0, 0.2, 1.0}).delta_x,
               Catch::Matchers::WithinAbs(0.0, 1e-10));

    const ExchangeOptionInputs in{100.0, 100.0, 0.2, 1.0};
    const auto d = exchange_delta(in);
    CHECK_THAT(d.delta_x, Catch::Matchers::WithinAbs(0.539828, 1e-6));
    const double h = 1e-5 * in.x0;
    const double up = margrabe_price({in.x0 + h, in.y0, in.sigma, in.maturity}).call;
    const double dn = margrabe_price({in.x0 - h, in.y0, in.sigma, in.maturity}).call;
    CHECK_THAT(d.delta_x, Catch::Matchers::WithinAbs((up - dn) / (2.0 * h), 1e-6));
}

TEST_CASE("delta finite differences and Euler relation, randomized",
          "[analytic][property]") {
    std::mt19937 rng(2718u);
    std::uniform_real_distribution<double> price(50.0, 150.0);
    std::uniform_real_distribution<double> vol(0.1, 0.5);
    std::uniform_real_distribution<double> mat(0.25, 2.0);
    for (int it = 0; it < 50; ++it) {
        const ExchangeOptionInputs in{price(rng), price(rng), vol(rng), mat(rng)};
        const auto d = exchange_delta(in);
        const double hx = 1e-5 * in.x0;
        const double cx_up = margrabe_price({in.x0 + hx, in.y0, in.sigma, in.maturity}).call;
        const double cx_dn = margrabe_price({in.x0 - hx, in.y0, in.sigma, in.maturity}).call;
        CHECK(std::abs(d.delta_x - (cx_up - cx_dn) / (2.0 * hx)) <= 1e-6);

        const double hy = 1e-5 * in.y0;
        const double cy_up = margrabe_price({in.x0, in.y0 + hy, in.sigma, in.maturity}).call;
        const double cy_dn = margrabe_price({in.x0, in.y0 - hy, in.sigma, in.maturity}).call;
        CHECK(std::abs(d.delta_y - (cy_up - cy_dn) / (2.0 * hy)) <= 1e-6);

        const double c = margrabe_price(in).call;
        CHECK(std::abs(in.x0 * d.delta_x + in.y0 * d.delta_y - c) <= 1e-10 * std::fmax(1.0, c));
    }
}

TEST_CASE("price is 1-homogeneous and increasing in volatility", "[analytic][property]") {
    std::mt19937 rng(555u);
    std::uniform_real_distribution<double> price(20.0, 200.0);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    for (int it = 0; it < 200; ++it) {
        const ExchangeOptionInputs in{price(rng), price(rng), 0.3, 1.5};
        const double lam = scale(rng);
        const double base = margrabe_price(in).call;
        const double scaled =
            margrabe_price({lam * in.x0, lam * in.y0, in.sigma, in.maturity}).call;
        CHECK(std::abs(scaled - lam * base) <= 1e-12 * std::fmax(1.0, lam * base));
    }
    double prev = 0.0;
    for (double sigma = 0.05; sigma <= 0.85; sigma += 0.05) {
        const double c = margrabe_price({100.0, 95.0, sigma, 1.0}).call;
        CHECK(c > prev);
        prev = c;
    }
}

TEST_CASE("moment relation residual", "[analytic]") {
    CHECK(moment_relation_residual(0.0, 0.2, 1.0) == 0.0);
    CHECK(moment_relation_residual(1.0, 0.2, 1.0) <= 1e-12);
    CHECK(moment_relation_residual(2.5, 0.3, 2.0) <= 1e-12);
    for (double lam = -4.0; lam <= 4.0; lam += 0.25) {
        CHECK(moment_relation_residual(lam, 0.2, 1.0) <= 1e-12);
    }
}

TEST_CASE("measure relation on finite trees", "[analytic][property]") {
    // On any arbitrage-free two-asset tree the normalized moments satisfy
    // M^X(lambda) = M^Y(lambda+1); both sides by direct summation over
    // terminal nodes, the X-measure masses from reweighting by W/W0.
    const auto binom_mass = [](int n, int j, double p) {
        double comb = 1.0;  // multiplicative C(n, j)
        for (int i = 1; i <= j; ++i) comb *= static_cast<double>(n - j + i) / i;
        return comb * std::pow(p, j) * std::pow(1.0 - p, n - j);
    };
    std::mt19937 rng(808u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int n : {1, 2, 4, 8, 16, 32, 64}) {
        const double w_up = 1.0 + 0.4 * unit(rng);
        const double w_dn = 1.0 - 0.4 * unit(rng);
        const double p = (1.0 - w_dn) / (w_up - w_dn);  // martingale weight
        REQUIRE(p >= 0.0);
        REQUIRE(p <= 1.0);
        for (double lam : {-1.5, -0.5, 0.0, 0.7, 2.0}) {
            double m_y_shift = 0.0;   // M^Y(lambda + 1)
            double m_x_num = 0.0;     // E^Y[W/W0 * (W/W0)^lambda]
            double m_y_first = 0.0;   // E^Y[W/W0]
            for (int j = 0; j <= n; ++j) {
                const double mass = binom_mass(n, j, p);
                const double ratio = std::pow(w_up, j) * std::pow(w_dn, n - j);
                m_y_shift += mass * std::pow(ratio, lam + 1.0);
                m_x_num += mass * ratio * std::pow(ratio, lam);
                m_y_first += mass * ratio;
            }
            const double m_x = m_x_num / m_y_first;
            CHECK(std::abs(m_x - m_y_shift) <= 1e-10 * std::fmax(1.0, m_y_shift));
        }
    }
}

TEST_CASE("tree price converges to the closed form", "[analytic][property]") {
    const double ref = margrabe_price({100.0, 100.0, 0.2, 1.0}).call;
    const double coarse =
        std::abs(exchange_tree_price(100.0, 100.0, 0.2, 1.0, 256) - ref) / ref;
    const double fine =
        std::abs(exchange_tree_price(100.0, 100.0, 0.2, 1.0, 1024) - ref) / ref;
    CHECK(fine < coarse);
    CHECK(fine < 1e-3);
}

TEST_CASE("input validation", "[analytic]") {
    CHECK_THROWS_AS(margrabe_price({-1.0, 100.0, 0.2, 1.0}), StructuralError);
    CHECK_THROWS_AS(margrabe_price({100.0, 0.0, 0.2, 1.0}), StructuralError);
    CHECK_THROWS_AS(margrabe_price({100.0, 100.0, -0.2, 1.0}), StructuralError);
    CHECK_THROWS_AS(black_scholes_call(0.0, 100.0, 0.0, 0.2, 1.0), StructuralError);
    CHECK_THROWS_AS(lognormal_law(Measure::YNumeraire, 0.0, 1.0, 0.2, 1.0),
                    StructuralError);
}
