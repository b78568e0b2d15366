#pragma once

#include <cmath>

#include "duopoly/errors.hpp"
#include "duopoly/market.hpp"

namespace duopoly {

enum class FixedPointKind { Coexistence, Trivial };

struct FixedPoint {
    double x;
    double y;
    FixedPointKind kind;
};

// Nontrivial stationary point. With p = (c-1)/delta_x the pair satisfies
// x*y = p and y = a*(c - delta_y*p); the product relation makes the private
// factor c - delta_x*x*y exactly neutral there.
struct CoexistenceSolution {
    FixedPoint point;
    bool positive;  // false when c <= 1 or a coordinate is nonpositive
};

inline CoexistenceSolution coexistence_fixed_point(const ReducedParams& r, double a) {
    const double p = (r.c - 1.0) / r.delta_x;
    const double y = a * (r.c - r.delta_y * p);
    if (std::abs(y) <= 1e-12)
        throw DegenerateEquilibrium("coexistence denominator a*(c - p*delta_y) vanishes");
    const double x = p / y;
    const bool positive = r.c > 1.0 && x > 0.0 && y > 0.0;
    return {{x, y, FixedPointKind::Coexistence}, positive};
}

// x = 0 is absorbing for the private seller, so (0, a*c) is always stationary.
inline FixedPoint trivial_fixed_point(const ReducedParams& r, double a) {
    return {0.0, a * r.c, FixedPointKind::Trivial};
}

// delta_y/delta_x implied by a stationary state volume; blows up as c -> 1.
inline double price_ratio_at_equilibrium(const ReducedParams& r, double a, double y_star) {
    if (r.c == 1.0)
        throw DivisionByZero("price ratio undefined at c = 1");
    return (r.c - y_star / a) / (r.c - 1.0);
}

inline bool verify_fixed_point(const MarketParams& p, const FixedPoint& fp, double tol) {
    const MarketState next = step(p, {fp.x, fp.y});
    return std::abs(next.x - fp.x) <= tol && std::abs(next.y - fp.y) <= tol;
}

} // namespace duopoly
