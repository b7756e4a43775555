#pragma once

// Continuum-limit moment functions under the X- and Y-numeraire measures,
// the lognormal identification, the exchange-option closed form with its
// put and deltas, and the measure-relation residual. Pure functions; no
// shared state.

#include <cmath>
#include <limits>
#include <sstream>

#include "exopt/errors.hpp"

namespace exopt {

enum class Measure { XNumeraire, YNumeraire };

struct MomentSpec {
    double lambda = 0.0;
    double sigma = 0.0;     // lognormal volatility of X/Y, per sqrt(year)
    double maturity = 0.0;  // years
    int steps = 1;          // finite-n evaluation only
    Measure measure = Measure::YNumeraire;
    double x0 = 1.0;
    double y0 = 1.0;
};

struct LognormalLaw {
    double mean_log = 0.0;
    double var_log = 0.0;
};

struct ExchangeOptionInputs {
    double x0 = 0.0;
    double y0 = 0.0;
    double sigma = 0.0;
    double maturity = 0.0;
};

struct MargrabeResult {
    double call = 0.0;
    double d_plus = 0.0;
    double d_minus = 0.0;
};

struct ExchangeDeltas {
    double delta_x = 0.0;
    double delta_y = 0.0;
};

struct SymmetricFactors {
    double u = 1.0;
    double d = 1.0;
    bool degenerate = false;  // sigma or maturity zero: u == d == 1
};

namespace detail {

// Rational Chebyshev approximation to erfc on [0, inf), after W. J. Cody,
// "Rational Chebyshev approximation for the error function" (netlib
// specfun). Accurate to ~1e-16 relative; erfc(w) == 0 for w >= 26.543
// where the true value underflows double anyway.
inline double erfc_positive(double w) {
    static constexpr double kA[5] = {
        3.16112374387056560e0, 1.13864154151050156e2, 3.77485237685302021e2,
        3.20937758913846947e3, 1.85777706184603153e-1};
    static constexpr double kB[4] = {
        2.36012909523441209e1, 2.44024637934444173e2, 1.28261652607737228e3,
        2.84423683343917062e3};
    static constexpr double kC[9] = {
        5.64188496988670089e-1, 8.88314979438837594e0, 6.61191906371416295e1,
        2.98635138197400131e2,  8.81952221241769090e2, 1.71204761263407058e3,
        2.05107837782607147e3,  1.23033935479799725e3, 2.15311535474403846e-8};
    static constexpr double kD[8] = {
        1.57449261107098347e1, 1.17693950891312499e2, 5.37181101862009858e2,
        1.62138957456669019e3, 3.29079923573345963e3, 4.36261909014324716e3,
        3.43936767414372164e3, 1.23033935480374942e3};
    static constexpr double kP[6] = {
        3.05326634961232344e-1, 3.60344899949804439e-1, 1.25781726111229246e-1,
        1.60837851487422766e-2, 6.58749161529837803e-4, 1.63153871373020978e-2};
    static constexpr double kQ[5] = {
        2.56852019228982242e0, 1.87295284992346047e0, 5.27905102951428412e-1,
        6.05183413124413191e-2, 2.33520497626869185e-3};
    static constexpr double kInvSqrtPi = 0.56418958354775628695;
    static constexpr double kThresh = 0.46875;
    static constexpr double kXBig = 26.543;
    static constexpr double kXSmall = 1.11e-16;

    if (w <= kThresh) {
        const double ysq = w > kXSmall ? w * w : 0.0;
        double num = kA[4] * ysq;
        double den = ysq;
        for (int i = 0; i < 3; ++i) {
            num = (num + kA[i]) * ysq;
            den = (den + kB[i]) * ysq;
        }
        const double erf = w * (num + kA[3]) / (den + kB[3]);
        return 1.0 - erf;
    }
    if (w <= 4.0) {
        double num = kC[8] * w;
        double den = w;
        for (int i = 0; i < 7; ++i) {
            num = (num + kC[i]) * w;
            den = (den + kD[i]) * w;
        }
        const double r = (num + kC[7]) / (den + kD[7]);
        // exp(-w^2) split to preserve accuracy for large w
        const double ysq = std::trunc(w * 16.0) / 16.0;
        const double del = (w - ysq) * (w + ysq);
        return std::exp(-ysq * ysq) * std::exp(-del) * r;
    }
    if (w >= kXBig) return 0.0;
    const double z = 1.0 / (w * w);
    double num = kP[5] * z;
    double den = z;
    for (int i = 0; i < 4; ++i) {
        num = (num + kP[i]) * z;
        den = (den + kQ[i]) * z;
    }
    double r = z * (num + kP[4]) / (den + kQ[4]);
    r = (kInvSqrtPi - r) / w;
    const double ysq = std::trunc(w * 16.0) / 16.0;
    const double del = (w - ysq) * (w + ysq);
    return std::exp(-ysq * ysq) * std::exp(-del) * r;
}

}  // namespace detail

// Standard normal CDF. Built so that norm_cdf(z) + norm_cdf(-z) == 1
// bitwise, and saturating to 0/1 in the far tails.
inline double norm_cdf(double z) {
    constexpr double kInvSqrt2 = 0.70710678118654752440;
    if (std::isnan(z)) return z;
    const double t = 0.5 * detail::erfc_positive(std::abs(z) * kInvSqrt2);
    return z <= 0.0 ? t : 1.0 - t;
}

// Up/down factors 1 +- sigma*sqrt(T/n), which pin the Y-numeraire
// martingale probability at 1/2.
inline SymmetricFactors symmetric_tree_factors(double sigma, double maturity,
                                               int steps) {
    if (steps < 1) throw StructuralError("steps must be >= 1");
    if (!(sigma >= 0.0) || !(maturity >= 0.0)) {
        throw StructuralError("sigma and maturity must be nonnegative");
    }
    const double a = sigma * std::sqrt(maturity / static_cast<double>(steps));
    if (a >= 1.0) {
        std::ostringstream os;
        os << "step too coarse: sigma*sqrt(T/n) = " << a
           << " >= 1 gives a nonpositive down factor";
        throw ConfigError(os.str());
    }
    return {1.0 + a, 1.0 - a, a == 0.0};
}

namespace detail {

inline double moment_prefactor(const MomentSpec& ms) {
    if (!(ms.x0 > 0.0 && ms.y0 > 0.0)) {
        throw StructuralError("x0 and y0 must be positive");
    }
    return std::pow(ms.x0 / ms.y0, ms.lambda);
}

}  // namespace detail

// Finite-n moment of (X_T/Y_T)^lambda on the symmetric tree:
// (x0/y0)^lambda * ((u^l + d^l)/2)^n with l = lambda under the Y measure
// and l = lambda + 1 under the X measure (whose reweighting shifts the
// exponent by one). Evaluated in log space so n up to 10^6 neither
// overflows nor loses the small per-step increments.
inline double finite_n_moment(const MomentSpec& ms) {
    const double prefactor = detail::moment_prefactor(ms);
    const double lam =
        ms.measure == Measure::YNumeraire ? ms.lambda : ms.lambda + 1.0;
    // Martingale and normalization identities: exact by construction.
    if (lam == 0.0 || lam == 1.0) return prefactor;
    const SymmetricFactors f =
        symmetric_tree_factors(ms.sigma, ms.maturity, ms.steps);
    if (f.degenerate) return prefactor;
    const double a =
        ms.sigma * std::sqrt(ms.maturity / static_cast<double>(ms.steps));
    const double u_pow_m1 = std::expm1(lam * std::log1p(a));
    const double d_pow_m1 = std::expm1(lam * std::log1p(-a));
    const double mid_m1 = 0.5 * (u_pow_m1 + d_pow_m1);
    return prefactor *
           std::exp(static_cast<double>(ms.steps) * std::log1p(mid_m1));
}

// Continuum limit: (x0/y0)^lambda * exp(lambda*(lambda -+ 1)*sigma^2*T/2),
// '-' under the Y measure and '+' under the X measure.
inline double limit_moment(const MomentSpec& ms) {
    const double prefactor = detail::moment_prefactor(ms);
    const double s2t = ms.sigma * ms.sigma * ms.maturity;
    const double shift = ms.measure == Measure::YNumeraire ? -1.0 : 1.0;
    return prefactor * std::exp(0.5 * ms.lambda * (ms.lambda + shift) * s2t);
}

// Law of ln(X_T/Y_T): mean ln(x0/y0) -+ sigma^2*T/2 (Y measure minus,
// X measure plus), variance sigma^2*T under both.
inline LognormalLaw lognormal_law(Measure measure, double x0, double y0,
                                  double sigma, double maturity) {
    if (!(x0 > 0.0 && y0 > 0.0)) {
        throw StructuralError("x0 and y0 must be positive");
    }
    const double v = sigma * sigma * maturity;
    const double shift = measure == Measure::YNumeraire ? -0.5 : 0.5;
    return {std::log(x0 / y0) + shift * v, v};
}

namespace detail {

inline void validate_exchange_inputs(const ExchangeOptionInputs& in) {
    if (!(in.x0 > 0.0 && in.y0 > 0.0)) {
        throw StructuralError("x0 and y0 must be positive");
    }
    if (!(in.sigma >= 0.0) || !(in.maturity >= 0.0)) {
        throw StructuralError("sigma and maturity must be nonnegative");
    }
}

// d_plus/d_minus; when sigma^2*T == 0 the payoff is deterministic and the
// standardized log-moneyness saturates to +-infinity (0 when x0 == y0),
// which makes the Phi formulas below reduce to the deterministic limit.
inline void d_plus_minus(const ExchangeOptionInputs& in, double& d_plus,
                         double& d_minus) {
    const double s = in.sigma * std::sqrt(in.maturity);
    const double log_moneyness = std::log(in.x0 / in.y0);
    if (s == 0.0) {
        constexpr double kInf = std::numeric_limits<double>::infinity();
        d_plus = d_minus =
            log_moneyness > 0.0 ? kInf : log_moneyness < 0.0 ? -kInf : 0.0;
        return;
    }
    d_plus = (log_moneyness + 0.5 * s * s) / s;
    d_minus = (log_moneyness - 0.5 * s * s) / s;
}

}  // namespace detail

// Value of the option to exchange Y for X at maturity:
// x0*Phi(d+) - y0*Phi(d-).
inline MargrabeResult margrabe_price(const ExchangeOptionInputs& in) {
    detail::validate_exchange_inputs(in);
    MargrabeResult out;
    detail::d_plus_minus(in, out.d_plus, out.d_minus);
    out.call = in.x0 * norm_cdf(out.d_plus) - in.y0 * norm_cdf(out.d_minus);
    return out;
}

// Special case where Y is cash: y0 = strike * exp(-rate * maturity).
inline double black_scholes_call(double spot, double strike, double rate,
                                 double sigma, double maturity) {
    if (!(spot > 0.0 && strike > 0.0)) {
        throw StructuralError("spot and strike must be positive");
    }
    const ExchangeOptionInputs in{spot, strike * std::exp(-rate * maturity),
                                  sigma, maturity};
    return margrabe_price(in).call;
}

// Option to exchange X for Y: y0*Phi(-d-) - x0*Phi(-d+). Satisfies
// C - P = x0 - y0.
inline double exchange_put(const ExchangeOptionInputs& in) {
    detail::validate_exchange_inputs(in);
    double d_plus = 0.0;
    double d_minus = 0.0;
    detail::d_plus_minus(in, d_plus, d_minus);
    return in.y0 * norm_cdf(-d_minus) - in.x0 * norm_cdf(-d_plus);
}

// (dC/dx0, dC/dy0) = (Phi(d+), -Phi(d-)). The price is 1-homogeneous, so
// x0*delta_x + y0*delta_y recovers the call value.
inline ExchangeDeltas exchange_delta(const ExchangeOptionInputs& in) {
    detail::validate_exchange_inputs(in);
    double d_plus = 0.0;
    double d_minus = 0.0;
    detail::d_plus_minus(in, d_plus, d_minus);
    return {norm_cdf(d_plus), -norm_cdf(d_minus)};
}

// |M^X(lambda) - M^Y(lambda + 1)| with the (x0/y0)-normalized moment
// convention; both sides are evaluated independently.
inline double moment_relation_residual(double lambda, double sigma,
                                       double maturity) {
    const double s2t = sigma * sigma * maturity;
    const double m_x = std::exp(0.5 * lambda * (lambda + 1.0) * s2t);
    const double mu = lambda + 1.0;
    const double m_y_shifted = std::exp(0.5 * mu * (mu - 1.0) * s2t);
    return std::abs(m_x - m_y_shifted);
}

}  // namespace exopt
