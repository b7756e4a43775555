#pragma once

// Test-only oracles, kept independent of the library paths they check:
// long-double adaptive quadrature, brute-force path enumeration, and a
// plain 2x2 elimination solve.

#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

inline long double adaptive_simpson(const std::function<long double(long double)>& f,
                                    long double a, long double b,
                                    long double fa, long double fm, long double fb,
                                    long double whole, long double tol, int depth) {
    const long double m = 0.5L * (a + b);
    const long double lm = 0.5L * (a + m);
    const long double rm = 0.5L * (m + b);
    const long double flm = f(lm);
    const long double frm = f(rm);
    const long double left = (m - a) / 6.0L * (fa + 4.0L * flm + fm);
    const long double right = (b - m) / 6.0L * (fm + 4.0L * frm + fb);
    const long double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0L * tol) {
        return left + right + delta / 15.0L;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5L * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5L * tol, depth - 1);
}

inline long double integrate(const std::function<long double(long double)>& f,
                             long double a, long double b, long double tol) {
    const long double fa = f(a);
    const long double fb = f(b);
    const long double fm = f(0.5L * (a + b));
    const long double whole = (b - a) / 6.0L * (fa + 4.0L * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

inline long double normal_density(long double t) {
    constexpr long double kInvSqrt2Pi = 0.3989422804014326779399461L;
    return kInvSqrt2Pi * std::exp(-0.5L * t * t);
}

// Standard normal CDF by quadrature of the density from 0.
inline double normal_cdf(double z) {
    if (z == 0.0) return 0.5;
    const long double body =
        integrate([](long double t) { return normal_density(t); }, 0.0L,
                  std::fabs(static_cast<long double>(z)), 1e-19L);
    const long double phi = z > 0.0 ? 0.5L + body : 0.5L - body;
    return static_cast<double>(phi);
}

// Exchange-option value by quadrature of max(W_T - 1, 0) against the
// lognormal law of W_T = X_T/Y_T under the Y-numeraire measure:
// ln(W_T/W_0) ~ N(-v/2, v), v = sigma^2 T.
inline double exchange_quadrature(double x0, double y0, double sigma, double T) {
    const long double w0 = static_cast<long double>(x0) / y0;
    const long double v = static_cast<long double>(sigma) * sigma * T;
    if (v == 0.0L) return static_cast<double>(std::fmax(x0 - y0, 0.0));
    const long double sq = std::sqrt(v);
    // payoff positive for z above the kink
    const long double z_star = (std::log(1.0L / w0) + 0.5L * v) / sq;
    const long double hi = std::fmax(z_star, 0.0L) + 14.0L;
    const auto integrand = [&](long double z) {
        const long double w = w0 * std::exp(-0.5L * v + sq * z);
        return (w - 1.0L) * normal_density(z);
    };
    const long double expectation = integrate(integrand, z_star, hi, 1e-18L);
    return static_cast<double>(y0 * expectation);
}

// Price by enumerating all 2^n paths of a geometric tree: per-step factors
// u/d, per-step up-probability and discount factor, payoff applied to the
// path-ordered terminal value.
inline double brute_force_tree_price(double x0, double u, double d, int n,
                                     const std::vector<double>& step_p,
                                     const std::vector<double>& step_df,
                                     const std::function<double(double)>& payoff) {
    double acc = 0.0;
    for (unsigned long path = 0; path < (1ul << n); ++path) {
        double value = x0;
        double prob = 1.0;
        double disc = 1.0;
        for (int k = 0; k < n; ++k) {
            const bool up = (path >> k) & 1u;
            value *= up ? u : d;
            prob *= up ? step_p[k] : 1.0 - step_p[k];
            disc *= step_df[k];
        }
        acc += prob * disc * payoff(value);
    }
    return acc;
}

// Terminal values of every path, for recombination checks.
inline std::vector<std::pair<int, double>> brute_force_terminals(double x0, double u,
                                                                 double d, int n) {
    std::vector<std::pair<int, double>> out;  // (up-moves, terminal value)
    for (unsigned long path = 0; path < (1ul << n); ++path) {
        double value = x0;
        int ups = 0;
        for (int k = 0; k < n; ++k) {
            const bool up = (path >> k) & 1u;
            value *= up ? u : d;
            ups += up ? 1 : 0;
        }
        out.emplace_back(ups, value);
    }
    return out;
}

struct Solve2x2 {
    double a = 0.0;
    double b = 0.0;
};

// Solve a11 x + a12 y = r1, a21 x + a22 y = r2 by elimination.
inline Solve2x2 solve_2x2(double a11, double a12, double r1, double a21,
                          double a22, double r2) {
    // eliminate x from the second row
    const double f = a21 / a11;
    const double a22p = a22 - f * a12;
    const double r2p = r2 - f * r1;
    const double y = r2p / a22p;
    const double x = (r1 - a12 * y) / a11;
    return {x, y};
}

}  // namespace oracles
