#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "duopoly/equilibrium.hpp"
#include "duopoly/market.hpp"

namespace duopoly {

// Equality band inside which a bound hit counts as Marginal.
inline constexpr double kMarginalBand = 1e-12;

enum class Stability { Stable, Marginal, Unstable, NotApplicable };

struct Classification {
    Stability value = Stability::NotApplicable;
    // Signed distance to the nearest bound, in units of c. Positive inside
    // the stable range, negative outside.
    double margin = std::numeric_limits<double>::quiet_NaN();
};

inline Classification classify_margin(double margin) {
    if (std::abs(margin) <= kMarginalBand)
        return {Stability::Marginal, margin};
    return {margin > 0.0 ? Stability::Stable : Stability::Unstable, margin};
}

// Private seller holds a steady positive volume iff 1 < c < 3; the restricted
// map multiplier at the stationary point is 2 - c.
inline Classification private_stability(const ReducedParams& r) {
    return classify_margin(std::min(r.c - 1.0, 3.0 - r.c));
}

// Upper end of the state seller's stable c-range. Infinite when
// beta_x >= 2*beta_y: the affine restricted map then contracts for every c > 0.
inline double state_stability_upper_bound(double beta_x, double beta_y) {
    const double d = 1.0 - 0.5 * beta_x / beta_y;
    if (d <= kMarginalBand)
        return std::numeric_limits<double>::infinity();
    return 1.0 / d;
}

inline Classification state_stability(const ReducedParams& r, double beta_x, double beta_y) {
    const double bound = state_stability_upper_bound(beta_x, beta_y);
    if (std::isinf(bound))
        return classify_margin(r.c);
    return classify_margin(std::min(r.c, bound - r.c));
}

// Steady coexistence needs the full chain 1 < c < bound <= 3; the last link
// caps the price ratio at beta_x <= (4/3)*beta_y.
inline Classification coexistence_condition(const ReducedParams& r, double beta_x, double beta_y) {
    const double bound = state_stability_upper_bound(beta_x, beta_y);
    const double upper = std::min(3.0, bound);
    return classify_margin(std::min({r.c - 1.0, upper - r.c, 3.0 - bound}));
}

inline bool price_bound_check(double beta_x, double beta_y) {
    return beta_x <= (4.0 / 3.0) * beta_y + 1e-12;
}

struct Mat2 {
    double a00, a01;
    double a10, a11;
};

inline Mat2 jacobian(const ReducedParams& r, double a, const MarketState& s) {
    return {r.c - 2.0 * r.delta_x * s.x * s.y, -r.delta_x * s.x * s.x,
            -a * r.delta_y * s.y,              -a * r.delta_y * s.x};
}

// Largest eigenvalue modulus via the characteristic quadratic; a complex pair
// has modulus sqrt(det).
inline double spectral_radius(const Mat2& m) {
    const double tr = m.a00 + m.a11;
    const double det = m.a00 * m.a11 - m.a01 * m.a10;
    const double disc = tr * tr - 4.0 * det;
    if (disc < 0.0)
        return std::sqrt(det);
    const double root = std::sqrt(disc);
    return std::max(std::abs(0.5 * (tr + root)), std::abs(0.5 * (tr - root)));
}

// True iff an orbit started `perturbation` off the fixed point comes back
// within perturbation/10 of it (componentwise) by step n without diverging.
inline bool empirical_stability(const MarketParams& p, const FixedPoint& fp,
                                double perturbation, std::size_t n,
                                double divergence_threshold = 1e12) {
    const ReducedParams r = p.reduced();
    const double close = perturbation / 10.0;
    MarketState s{fp.x + perturbation, fp.y + perturbation};
    for (std::size_t i = 0; i <= n; ++i) {
        if (std::abs(s.x - fp.x) <= close && std::abs(s.y - fp.y) <= close)
            return true;
        if (!std::isfinite(s.x) || !std::isfinite(s.y) ||
            std::abs(s.x) > divergence_threshold || std::abs(s.y) > divergence_threshold)
            return false;
        s = step(r, p.a, s);
    }
    return false;
}

struct StabilityReport {
    Classification private_cond;
    Classification state_cond;
    Classification coexistence_cond;
    bool price_bound_ok = false;
    // Linearization at the coexistence point; NaN/false when that point is
    // degenerate. Can disagree with the per-axis conditions: the coupling
    // terms add a flip instability that the restricted maps cannot see.
    double jacobian_spectral_radius = std::numeric_limits<double>::quiet_NaN();
    bool jacobian_stable = false;
};

inline StabilityReport stability_report(const MarketParams& p) {
    const ReducedParams r = p.reduced();
    StabilityReport rep;
    rep.private_cond = private_stability(r);
    rep.state_cond = state_stability(r, p.beta_x, p.beta_y);
    rep.coexistence_cond = coexistence_condition(r, p.beta_x, p.beta_y);
    rep.price_bound_ok = price_bound_check(p.beta_x, p.beta_y);
    try {
        const CoexistenceSolution sol = coexistence_fixed_point(r, p.a);
        const Mat2 j = jacobian(r, p.a, {sol.point.x, sol.point.y});
        rep.jacobian_spectral_radius = spectral_radius(j);
        rep.jacobian_stable = rep.jacobian_spectral_radius < 1.0;
    } catch (const DegenerateEquilibrium&) {
        // no isolated coexistence point to linearize at
    }
    return rep;
}

} // namespace duopoly
