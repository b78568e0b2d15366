#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace duopoly {

// Coupled sales map for one private seller and one state seller of an
// interchangeable good:
//
//   x' = x * (c - delta_x * x * y)      private volume, quadratic in x
//   y' = a * (c - delta_y * x * y)      state volume, affine in y
//
// with c = alpha * c0, delta_x = mu * beta_x, delta_y = mu * beta_y.
// Both coordinates advance simultaneously from the same (x, y).

struct ReducedParams {
    double c;
    double delta_x;
    double delta_y;
};

struct MarketParams {
    double alpha;   // demand activity
    double c0;      // base demand level
    double mu;      // price response scale
    double beta_x;  // private seller price
    double beta_y;  // state seller price
    double a;       // state production capacity

    MarketParams(double alpha_, double c0_, double mu_, double beta_x_,
                 double beta_y_, double a_)
        : alpha(alpha_), c0(c0_), mu(mu_), beta_x(beta_x_), beta_y(beta_y_), a(a_) {
        for (double v : {alpha, c0, mu, beta_x, beta_y, a})
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::invalid_argument("market parameters must be positive finite reals");
    }

    ReducedParams reduced() const { return {alpha * c0, mu * beta_x, mu * beta_y}; }
};

struct MarketState {
    double x;
    double y;
};

inline MarketState step(const ReducedParams& r, double a, const MarketState& s) {
    const double cross = s.x * s.y;
    return {s.x * (r.c - r.delta_x * cross), a * (r.c - r.delta_y * cross)};
}

inline MarketState step(const MarketParams& p, const MarketState& s) {
    return step(p.reduced(), p.a, s);
}

inline ReducedParams reduce(const MarketParams& p) { return p.reduced(); }

// Private map with the state volume frozen; conjugate to the logistic map.
// The cross term is grouped exactly as in step() so the restricted orbit
// reproduces the full map bit for bit along y = y_star.
inline double step_private_fixed_y(const ReducedParams& r, double x, double y_star) {
    const double cross = x * y_star;
    return x * (r.c - r.delta_x * cross);
}

inline double step_private_fixed_y(const MarketParams& p, double x, double y_star) {
    return step_private_fixed_y(p.reduced(), x, y_star);
}

// State map with the private volume frozen; affine in y, slope -a*delta_y*x_star.
inline double step_state_fixed_x(const ReducedParams& r, double a, double y, double x_star) {
    const double cross = x_star * y;
    return a * (r.c - r.delta_y * cross);
}

inline double step_state_fixed_x(const MarketParams& p, double y, double x_star) {
    return step_state_fixed_x(p.reduced(), p.a, y, x_star);
}

struct Orbit {
    std::vector<MarketState> states;          // init first, then one entry per step
    std::optional<std::size_t> diverged_at;   // index of the first offending state

    bool diverged() const { return diverged_at.has_value(); }
};

inline Orbit iterate(const MarketParams& p, const MarketState& init, std::size_t n,
                     double divergence_threshold = 1e12) {
    if (!std::isfinite(init.x) || !std::isfinite(init.y))
        throw std::invalid_argument("initial state must be finite");
    const ReducedParams r = p.reduced();
    Orbit orbit;
    orbit.states.reserve(n + 1);
    orbit.states.push_back(init);
    for (std::size_t i = 0; i < n; ++i) {
        const MarketState next = step(r, p.a, orbit.states.back());
        orbit.states.push_back(next);
        if (!std::isfinite(next.x) || !std::isfinite(next.y) ||
            std::abs(next.x) > divergence_threshold ||
            std::abs(next.y) > divergence_threshold) {
            orbit.diverged_at = orbit.states.size() - 1;
            break;
        }
    }
    return orbit;
}

} // namespace duopoly
