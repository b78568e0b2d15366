#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "duopoly/cascade.hpp"
#include "duopoly/config.hpp"
#include "duopoly/equilibrium.hpp"
#include "duopoly/errors.hpp"
#include "duopoly/market.hpp"
#include "duopoly/stability.hpp"

namespace duopoly {

enum class RegimeKind {
    StableCoexistence,
    PrivateUnstable,
    StateUnstable,
    BothUnstable,
    NoPositiveEquilibrium,
    PeriodK,
    Chaotic,
    Divergent,
};

struct Regime {
    RegimeKind kind = RegimeKind::NoPositiveEquilibrium;
    std::size_t period = 0;  // cycle length when one was detected
};

inline std::string regime_name(const Regime& r) {
    switch (r.kind) {
        case RegimeKind::StableCoexistence: return "StableCoexistence";
        case RegimeKind::PrivateUnstable: return "PrivateUnstable";
        case RegimeKind::StateUnstable: return "StateUnstable";
        case RegimeKind::BothUnstable: return "BothUnstable";
        case RegimeKind::NoPositiveEquilibrium: return "NoPositiveEquilibrium";
        case RegimeKind::PeriodK: return "Period" + std::to_string(r.period);
        case RegimeKind::Chaotic: return "Chaotic";
        case RegimeKind::Divergent: return "Divergent";
    }
    return "Unknown";
}

// Label from the closed-form conditions alone. A cell is StableCoexistence
// only when both restricted maps pass and the price bound holds; failures are
// attributed per seller, with the price-chain failure charged to the state
// seller whose bound it is.
inline Regime analytic_regime(const MarketParams& p) {
    const ReducedParams r = p.reduced();
    bool positive = false;
    try {
        positive = coexistence_fixed_point(r, p.a).positive;
    } catch (const DegenerateEquilibrium&) {
        positive = false;
    }
    if (!positive)
        return {RegimeKind::NoPositiveEquilibrium};
    const bool private_ok = private_stability(r).value == Stability::Stable;
    const bool state_ok = state_stability(r, p.beta_x, p.beta_y).value == Stability::Stable &&
                          price_bound_check(p.beta_x, p.beta_y);
    if (private_ok && state_ok)
        return {RegimeKind::StableCoexistence, 1};
    if (!private_ok && !state_ok)
        return {RegimeKind::BothUnstable};
    return private_ok ? Regime{RegimeKind::StateUnstable} : Regime{RegimeKind::PrivateUnstable};
}

// Attractor fingerprint of the coupled map: componentwise cycle search over a
// post-transient window plus the tangent-vector Lyapunov exponent. Samples
// hold the x coordinate of one cycle (or a tail of the window when aperiodic).
inline OrbitSummary coupled_orbit_summary(const MarketParams& p, MarketState s,
                                          std::size_t burn_in, std::size_t window,
                                          double tol, std::size_t max_period,
                                          double divergence_threshold = 1e12,
                                          std::size_t aperiodic_samples = 256) {
    if (window == 0)
        throw std::invalid_argument("orbit summary needs a nonempty window");
    const ReducedParams r = p.reduced();
    OrbitSummary out;
    auto escaped = [&](const MarketState& q) {
        return !std::isfinite(q.x) || !std::isfinite(q.y) ||
               std::abs(q.x) > divergence_threshold || std::abs(q.y) > divergence_threshold;
    };
    for (std::size_t i = 0; i < burn_in; ++i) {
        s = step(r, p.a, s);
        if (escaped(s)) {
            out.diverged = true;
            return out;
        }
    }

    std::vector<double> wx(window), wy(window);
    double vx = 1.0, vy = 1.0;
    double log_sum = 0.0;
    bool tangent_dead = false;  // tangent vector annihilated, exponent is -inf
    for (std::size_t i = 0; i < window; ++i) {
        wx[i] = s.x;
        wy[i] = s.y;
        if (!tangent_dead) {
            const Mat2 j = jacobian(r, p.a, s);
            const double tx = j.a00 * vx + j.a01 * vy;
            const double ty = j.a10 * vx + j.a11 * vy;
            const double norm = std::hypot(tx, ty);
            if (norm < 1e-300) {
                tangent_dead = true;
            } else {
                log_sum += std::log(norm);
                vx = tx / norm;
                vy = ty / norm;
            }
        }
        s = step(r, p.a, s);
        if (escaped(s)) {
            out.diverged = true;
            out.samples.assign(wx.begin(), wx.begin() + static_cast<std::ptrdiff_t>(i + 1));
            return out;
        }
    }
    out.lyapunov = tangent_dead ? -std::numeric_limits<double>::infinity()
                                : log_sum / static_cast<double>(window);
    for (std::size_t p2 = 1; p2 <= max_period && p2 < window; ++p2) {
        bool ok = true;
        for (std::size_t k = 0; k + p2 < window; ++k) {
            if (std::abs(wx[k + p2] - wx[k]) >= tol || std::abs(wy[k + p2] - wy[k]) >= tol) {
                ok = false;
                break;
            }
        }
        if (ok) {
            out.period = p2;
            break;
        }
    }
    const std::size_t keep = out.period ? *out.period : std::min(aperiodic_samples, window);
    out.samples.assign(wx.end() - static_cast<std::ptrdiff_t>(keep), wx.end());
    return out;
}

inline Regime empirical_regime(const OrbitSummary& s) {
    if (s.diverged)
        return {RegimeKind::Divergent};
    if (!s.period)
        return {RegimeKind::Chaotic};
    if (*s.period == 1)
        return {RegimeKind::StableCoexistence, 1};
    return {RegimeKind::PeriodK, *s.period};
}

struct RegimeClassification {
    Regime analytic;
    OrbitSummary empirical;
};

// Pairs the closed-form label with the coupled map's observed behaviour,
// started just off the coexistence point (or from a fixed interior seed when
// no positive equilibrium exists).
inline RegimeClassification classify_regime(const MarketParams& p, const RunConfig& cfg = {}) {
    const ReducedParams r = p.reduced();
    MarketState start{0.1, 0.1};
    try {
        const CoexistenceSolution sol = coexistence_fixed_point(r, p.a);
        if (sol.positive)
            start = {sol.point.x + cfg.perturbation, sol.point.y + cfg.perturbation};
    } catch (const DegenerateEquilibrium&) {
    }
    OrbitSummary s = coupled_orbit_summary(p, start, cfg.burn_in, cfg.window, cfg.period_tol,
                                           cfg.max_period, cfg.divergence_threshold);
    return {analytic_regime(p), std::move(s)};
}

struct SweepCell {
    Regime analytic;
    std::optional<std::size_t> empirical_period;
    double lyapunov = std::numeric_limits<double>::quiet_NaN();
};

// Observed regime of a cell. Divergence is the only way the exponent can be
// NaN, so the pair (period, lyapunov) determines the kind.
inline Regime empirical_regime(const SweepCell& cell) {
    if (cell.empirical_period)
        return *cell.empirical_period == 1 ? Regime{RegimeKind::StableCoexistence, 1}
                                           : Regime{RegimeKind::PeriodK, *cell.empirical_period};
    return std::isnan(cell.lyapunov) ? Regime{RegimeKind::Divergent} : Regime{RegimeKind::Chaotic};
}

struct SweepGrid {
    std::vector<double> c_axis;      // ascending, endpoints included
    std::vector<double> ratio_axis;  // beta_x / beta_y, ascending, endpoints included
    std::vector<SweepCell> cells;    // row-major, c outermost

    const SweepCell& at(std::size_t ci, std::size_t ri) const {
        return cells[ci * ratio_axis.size() + ri];
    }
};

// Classifies every node of a c by beta-ratio grid spanning the given ranges
// inclusively, with mu = 1, beta_y = 1, beta_x = ratio and alpha*c0 = c.
inline SweepGrid sweep(double c_lo, double c_hi, double ratio_lo, double ratio_hi,
                       std::size_t nc, std::size_t nr, const RunConfig& cfg = {}) {
    if (!(c_lo > 0.0) || !(ratio_lo > 0.0) || !(c_lo < c_hi) || !(ratio_lo < ratio_hi))
        throw std::invalid_argument("sweep ranges must be positive and increasing");
    if (nc < 2 || nr < 2)
        throw std::invalid_argument("sweep needs at least two samples per axis");
    SweepGrid g;
    g.c_axis.resize(nc);
    g.ratio_axis.resize(nr);
    for (std::size_t i = 0; i < nc; ++i)
        g.c_axis[i] =
            c_lo + static_cast<double>(i) * (c_hi - c_lo) / static_cast<double>(nc - 1);
    for (std::size_t j = 0; j < nr; ++j)
        g.ratio_axis[j] =
            ratio_lo + static_cast<double>(j) * (ratio_hi - ratio_lo) / static_cast<double>(nr - 1);
    g.cells.reserve(nc * nr);
    for (std::size_t i = 0; i < nc; ++i) {
        for (std::size_t j = 0; j < nr; ++j) {
            const RegimeClassification rc =
                classify_regime(MarketParams(g.c_axis[i], 1.0, 1.0, g.ratio_axis[j], 1.0, 1.0), cfg);
            g.cells.push_back({rc.analytic, rc.empirical.period, rc.empirical.lyapunov});
        }
    }
    return g;
}

} // namespace duopoly
