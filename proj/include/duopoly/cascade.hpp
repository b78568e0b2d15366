#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "duopoly/errors.hpp"
#include "duopoly/market.hpp"

namespace duopoly {

// Route to chaos of the private map. Freezing y at y_star and substituting
// z = x*delta_x*y_star/c turns the private map into z' = 4*gamma*z*(1-z)
// with 4*gamma = c, so the whole period-doubling cascade carries over.

struct LogisticParams {
    double gamma;  // in (0, 1]

    static LogisticParams from_market(const ReducedParams& r) {
        if (!(r.c > 0.0) || r.c > 4.0)
            throw Error("no logistic form for c outside (0, 4]");
        return {r.c / 4.0};
    }
};

// Grouping z*(1-z) first keeps iterates of gamma <= 1 provably inside [0,1]
// in floating point: the product never rounds above 0.25.
inline double logistic_step(double gamma, double z) {
    return 4.0 * gamma * (z * (1.0 - z));
}

inline double to_logistic(double x, const ReducedParams& r, double y_star) {
    return x * r.delta_x * y_star / r.c;
}

inline double from_logistic(double z, const ReducedParams& r, double y_star) {
    return z * r.c / (r.delta_x * y_star);
}

// Worst deviation between the pushed-forward private orbit and the logistic
// orbit over n steps. Exact conjugacy means this is rounding noise only.
inline double conjugacy_check(const MarketParams& p, double y_star, double x0, std::size_t n) {
    const ReducedParams r = p.reduced();
    const double gamma = r.c / 4.0;
    double x = x0;
    double z = to_logistic(x0, r, y_star);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x = step_private_fixed_y(r, x, y_star);
        z = logistic_step(gamma, z);
        worst = std::max(worst, std::abs(to_logistic(x, r, y_star) - z));
    }
    return worst;
}

struct OrbitSummary {
    std::optional<std::size_t> period;  // absent when no cycle <= max_period fits
    double lyapunov = std::numeric_limits<double>::quiet_NaN();
    bool diverged = false;
    std::vector<double> samples;        // post-transient attractor samples
};

namespace detail {

inline void check_seed(double z0) {
    if (!(z0 > 0.0 && z0 < 1.0))
        throw InvalidSeed("logistic seed must lie strictly inside (0, 1)");
}

// Smallest p <= max_period that repeats across the whole window, or nothing.
inline std::optional<std::size_t> window_period(const std::vector<double>& w,
                                                double tol, std::size_t max_period) {
    for (std::size_t p = 1; p <= max_period && p < w.size(); ++p) {
        bool ok = true;
        for (std::size_t k = 0; k + p < w.size(); ++k) {
            if (std::abs(w[k + p] - w[k]) >= tol) {
                ok = false;
                break;
            }
        }
        if (ok)
            return p;
    }
    return std::nullopt;
}

} // namespace detail

// Iterates past burn_in, then scans a sampling window for the smallest cycle
// length. The summary also carries the window-average Lyapunov exponent and
// one cycle's worth of samples (or `aperiodic_samples` of them for chaos).
inline OrbitSummary detect_period(double gamma, double z0, std::size_t burn_in,
                                  std::size_t window, double tol, std::size_t max_period,
                                  std::size_t aperiodic_samples = 256) {
    detail::check_seed(z0);
    OrbitSummary out;
    double z = z0;
    const bool confined = gamma <= 1.0;
    auto advance = [&](double& v) {
        v = logistic_step(gamma, v);
        if (confined && !(v >= 0.0 && v <= 1.0))
            throw std::logic_error("logistic iterate escaped [0,1] at gamma <= 1");
        if (!confined && (!std::isfinite(v) || std::abs(v) > 1e6))
            out.diverged = true;
    };
    for (std::size_t i = 0; i < burn_in && !out.diverged; ++i)
        advance(z);
    if (out.diverged)
        return out;

    std::vector<double> w(window);
    double log_sum = 0.0;
    bool zero_slope = false;
    for (std::size_t i = 0; i < window; ++i) {
        w[i] = z;
        const double slope = std::abs(4.0 * gamma * (1.0 - 2.0 * z));
        if (slope < 1e-300)
            zero_slope = true;
        else
            log_sum += std::log(slope);
        advance(z);
        if (out.diverged) {
            out.samples.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i + 1));
            return out;
        }
    }
    out.lyapunov = zero_slope ? -std::numeric_limits<double>::infinity()
                              : log_sum / static_cast<double>(window);
    out.period = detail::window_period(w, tol, max_period);
    const std::size_t keep = out.period ? *out.period : std::min(aperiodic_samples, window);
    out.samples.assign(w.end() - static_cast<std::ptrdiff_t>(keep), w.end());
    return out;
}

// Time average of log|d/dz 4*gamma*z*(1-z)| along the orbit. Returns -infinity
// as soon as a derivative factor vanishes (superstable orbit hit).
inline double lyapunov_exponent(double gamma, double z0, std::size_t burn_in, std::size_t n) {
    detail::check_seed(z0);
    if (n == 0)
        throw std::invalid_argument("lyapunov exponent needs at least one iterate");
    double z = z0;
    for (std::size_t i = 0; i < burn_in; ++i)
        z = logistic_step(gamma, z);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double slope = std::abs(4.0 * gamma * (1.0 - 2.0 * z));
        if (slope < 1e-300)
            return -std::numeric_limits<double>::infinity();
        sum += std::log(slope);
        z = logistic_step(gamma, z);
    }
    return sum / static_cast<double>(n);
}

struct DoublingCascade {
    std::vector<double> points;                // gamma at each doubling, ascending
    std::vector<double> feigenbaum_estimates;  // (g[k]-g[k-1])/(g[k+1]-g[k]) per interior k
};

struct CascadeOptions {
    double z0 = 0.31830988;
    std::size_t burn_in = 10000;
    std::size_t window = 4096;
    double tol = 1e-6;
    std::size_t max_period = 1024;
    // Transients slow down critically next to a doubling; inside this band of
    // the bracketed transition the burn-in is stretched by refine_factor.
    double refine_band = 1e-3;
    std::size_t refine_factor = 10;
};

// Locates the gamma values where the detected period leaves 1, 2, 4, ... by
// bisecting a bracket found with a right-moving coarse scan. Aperiodic or
// escaped orbits count as "past the transition", which keeps the predicate
// monotone across the bracket even when the scan overshoots several levels.
inline DoublingCascade doubling_points(double gamma_lo, double gamma_hi, std::size_t k_max,
                                       double bisect_tol, const CascadeOptions& opt = {}) {
    if (!(0.0 < gamma_lo) || !(gamma_lo < gamma_hi) || !(gamma_hi <= 1.0) || !(bisect_tol > 0.0))
        throw std::invalid_argument(
            "doubling scan needs 0 < gamma_lo < gamma_hi <= 1 and positive tolerance");
    auto beyond = [&](double g, std::size_t p, bool refined) {
        const OrbitSummary s =
            detect_period(g, opt.z0, refined ? opt.burn_in * opt.refine_factor : opt.burn_in,
                          opt.window, opt.tol, opt.max_period, 2);
        return s.diverged || !s.period || *s.period > p;
    };
    if (beyond(gamma_lo, 1, false))
        throw ConvergenceFailure("no period-1 attractor at the low end of the gamma range");

    DoublingCascade out;
    double lo = gamma_lo;
    double scan = (gamma_hi - gamma_lo) / 64.0;
    for (std::size_t k = 1; k <= k_max; ++k) {
        const std::size_t p = std::size_t{1} << (k - 1);
        double a = lo;
        double b = 0.0;
        bool bracketed = false;
        for (double g = a + scan; !bracketed; g += scan) {
            if (g > gamma_hi)
                g = gamma_hi;
            if (beyond(g, p, false)) {
                b = g;
                bracketed = true;
            } else {
                a = g;
                if (g >= gamma_hi)
                    break;
            }
        }
        if (!bracketed)
            throw ConvergenceFailure("doubling " + std::to_string(k) +
                                     " not bracketed below gamma_hi");
        while (b - a > bisect_tol) {
            const double mid = 0.5 * (a + b);
            const bool refined = (b - a) <= opt.refine_band;
            if (beyond(mid, p, refined))
                b = mid;
            else
                a = mid;
        }
        out.points.push_back(0.5 * (a + b));
        lo = b;
        // successive doubling gaps shrink roughly by the Feigenbaum factor
        scan = std::max(scan / 4.0, 8.0 * bisect_tol);
    }
    for (std::size_t k = 1; k + 1 < out.points.size(); ++k)
        out.feigenbaum_estimates.push_back((out.points[k] - out.points[k - 1]) /
                                           (out.points[k + 1] - out.points[k]));
    return out;
}

inline double feigenbaum_estimate(const DoublingCascade& cascade) {
    const std::size_t n = cascade.points.size();
    if (n < 3)
        throw InsufficientPoints("Feigenbaum ratio needs at least three doubling points");
    return (cascade.points[n - 2] - cascade.points[n - 3]) /
           (cascade.points[n - 1] - cascade.points[n - 2]);
}

// Second differences of the frozen-x state map vanish identically: the map is
// affine in y, so it can never period-double on its own.
inline bool state_map_affinity_check(const MarketParams& p, double x_star, std::size_t samples) {
    if (samples < 3)
        throw std::invalid_argument("affinity check needs at least 3 samples");
    const ReducedParams r = p.reduced();
    const double a = p.a;
    const double span = std::max(1.0, std::abs(a * r.c));
    auto f = [&](std::size_t i) {
        const double y = span * static_cast<double>(i) / static_cast<double>(samples - 1);
        return step_state_fixed_x(r, a, y, x_star);
    };
    for (std::size_t i = 0; i + 2 < samples; ++i) {
        const double f0 = f(i), f1 = f(i + 1), f2 = f(i + 2);
        const double second = f2 - 2.0 * f1 + f0;
        const double scale = std::max({1.0, std::abs(f0), std::abs(f1), std::abs(f2)});
        if (std::abs(second) > 1e-9 * scale)
            return false;
    }
    return true;
}

} // namespace duopoly
