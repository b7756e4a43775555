#pragma once

// Single-step replication and martingale-probability pricing: one risky
// asset plus cash, and a pair of risky assets with a homothetic claim.
// All functions are pure; safe to call concurrently.

#include <cmath>
#include <sstream>
#include <utility>

#include "exopt/errors.hpp"

namespace exopt {

// One risky asset over a single period. x_fwd is the forward price (a
// forward contract absorbs coupons/dividends); df discounts the period.
struct OneStepMarket {
    double x_fwd = 0.0;
    double x_up = 0.0;
    double x_dn = 0.0;
    double df = 1.0;
};

// Two risky assets over a single period. No cash leg: Y is the numeraire.
struct TwoAssetOneStep {
    double x0 = 0.0;
    double y0 = 0.0;
    double x_up = 0.0;
    double x_dn = 0.0;
    double y_up = 0.0;
    double y_dn = 0.0;
};

// Claim paying v_up or v_dn according to the realized state.
struct BinaryClaim {
    double v_up = 0.0;
    double v_dn = 0.0;
};

struct MartingaleProbs {
    double p_up = 0.0;
    double p_dn = 0.0;
};

// Units of risky asset plus cash amount replicating a binary claim.
struct ReplicationWeights {
    double a_x = 0.0;
    double a_rf = 0.0;
};

struct TwoAssetWeights {
    double a_x = 0.0;
    double a_y = 0.0;
};

namespace detail {

inline void require_nondegenerate(double x_up, double x_dn, const char* what) {
    if (x_up == x_dn) {
        std::ostringstream os;
        os << "degenerate market: " << what << " up and down states coincide ("
           << x_up << ")";
        throw StructuralError(os.str());
    }
}

inline void require_positive_df(double df) {
    if (!(df > 0.0)) {
        std::ostringstream os;
        os << "discount factor must be positive, got " << df;
        throw StructuralError(os.str());
    }
}

inline void require_finite_claim(const BinaryClaim& c) {
    if (!std::isfinite(c.v_up) || !std::isfinite(c.v_dn)) {
        throw StructuralError("claim payouts must be finite");
    }
}

}  // namespace detail

// State weights calibrated so the weighted future value equals the forward.
// The up state must sit above the down state and the forward inside the
// window [x_dn, x_up]; at the boundary the weight is exactly 0 or 1.
// Outside the window one of the states dominates and a riskfree profit
// exists, so we refuse rather than return weights outside [0, 1].
inline MartingaleProbs martingale_probs(const OneStepMarket& m) {
    detail::require_nondegenerate(m.x_up, m.x_dn, "asset");
    detail::require_positive_df(m.df);
    const double p_up = (m.x_fwd - m.x_dn) / (m.x_up - m.x_dn);
    if (!(m.x_dn <= m.x_fwd && m.x_fwd <= m.x_up)) {
        std::ostringstream os;
        os << "arbitrage: forward " << m.x_fwd << " outside the window [down "
           << m.x_dn << ", up " << m.x_up << "], implied up-probability " << p_up;
        throw ArbitrageError(os.str(), p_up);
    }
    return {p_up, 1.0 - p_up};
}

// Solve a_x * x_state + a_rf = v_state across both states.
inline ReplicationWeights replication_weights(const OneStepMarket& m,
                                              const BinaryClaim& c) {
    detail::require_nondegenerate(m.x_up, m.x_dn, "asset");
    detail::require_finite_claim(c);
    const double a_x = (c.v_up - c.v_dn) / (m.x_up - m.x_dn);
    const double a_rf = (c.v_dn * m.x_up - c.v_up * m.x_dn) / (m.x_up - m.x_dn);
    return {a_x, a_rf};
}

// Discounted expectation under the martingale weights. Coincides with the
// value of the replicating portfolio.
inline double price_one_step(const OneStepMarket& m, const BinaryClaim& c) {
    detail::require_finite_claim(c);
    const MartingaleProbs p = martingale_probs(m);
    return m.df * (p.p_up * c.v_up + p.p_dn * c.v_dn);
}

// Martingale probability of the up state with Y as numeraire: weights on
// the asset ratio W = X/Y.
inline double two_asset_probs(const TwoAssetOneStep& t) {
    if (!(t.y0 > 0.0 && t.y_up > 0.0 && t.y_dn > 0.0)) {
        throw StructuralError("numeraire asset values must be positive");
    }
    const double w0 = t.x0 / t.y0;
    const double w_up = t.x_up / t.y_up;
    const double w_dn = t.x_dn / t.y_dn;
    detail::require_nondegenerate(w_up, w_dn, "asset ratio X/Y");
    const double p_y = (w0 - w_dn) / (w_up - w_dn);
    if (p_y < 0.0 || p_y > 1.0) {
        std::ostringstream os;
        os << "arbitrage: implied Y-numeraire up-probability " << p_y
           << " outside [0, 1]";
        throw ArbitrageError(os.str(), p_y);
    }
    return p_y;
}

// Replication in the two assets themselves: a_x * X + a_y * Y matches the
// claim in both states.
inline TwoAssetWeights two_asset_weights(const TwoAssetOneStep& t,
                                         const BinaryClaim& c) {
    detail::require_finite_claim(c);
    const double det = t.x_up * t.y_dn - t.x_dn * t.y_up;
    if (det == 0.0) {
        throw StructuralError(
            "degenerate two-asset market: states are linearly dependent");
    }
    const double a_x = (c.v_up * t.y_dn - c.v_dn * t.y_up) / det;
    const double a_y = (c.v_dn * t.x_up - c.v_up * t.x_dn) / det;
    return {a_x, a_y};
}

// Price a claim on (X, Y) as Y0 times the Y-numeraire expectation of V/Y.
// Meaningful when the claim is homothetic (V/Y a function of X/Y); the
// caller owns that check when supplying state payoffs.
inline double two_asset_price(const TwoAssetOneStep& t, const BinaryClaim& c) {
    detail::require_finite_claim(c);
    const double p_y = two_asset_probs(t);
    return t.y0 * (p_y * (c.v_up / t.y_up) + (1.0 - p_y) * (c.v_dn / t.y_dn));
}

}  // namespace exopt
