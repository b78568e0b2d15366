#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "duopoly/sweep.hpp"

using Catch::Approx;
using namespace duopoly;

namespace {

MarketParams make(double c, double ratio) { return {c, 1.0, 1.0, ratio, 1.0, 1.0}; }

RunConfig light() {
    RunConfig cfg;
    cfg.burn_in = 2000;
    cfg.window = 512;
    return cfg;
}

}  // namespace

TEST_CASE("analytic labels partition the parameter plane") {
    REQUIRE(analytic_regime(make(1.2, 1.0)).kind == RegimeKind::StableCoexistence);
    REQUIRE(analytic_regime(make(1.2, 1.0)).period == 1);
    REQUIRE(analytic_regime(make(2.5, 1.0)).kind == RegimeKind::StateUnstable);
    REQUIRE(analytic_regime(make(4.0, 1.0)).kind == RegimeKind::BothUnstable);
    REQUIRE(analytic_regime(make(0.8, 1.0)).kind == RegimeKind::NoPositiveEquilibrium);
    REQUIRE(analytic_regime(make(1.0, 1.0)).kind == RegimeKind::NoPositiveEquilibrium);
    // State seller priced out entirely: closed-form y turns negative.
    REQUIRE(analytic_regime(MarketParams(1.0, 3.5, 1.0, 1.0, 4.0, 1.0)).kind ==
            RegimeKind::NoPositiveEquilibrium);
    // Degenerate closed form counts as no positive equilibrium, not an error.
    REQUIRE(analytic_regime(MarketParams(1.0, 2.0, 1.0, 1.0, 2.0, 1.0)).kind ==
            RegimeKind::NoPositiveEquilibrium);
    // Price cap failure is charged to the state seller even when its own
    // demand bound would pass.
    REQUIRE(analytic_regime(make(1.5, 1.5)).kind == RegimeKind::StateUnstable);
    // Exactly on the state bound is marginal, hence not stable.
    REQUIRE(analytic_regime(make(2.0, 1.0)).kind == RegimeKind::StateUnstable);
}

TEST_CASE("regime names are stable strings") {
    REQUIRE(regime_name({RegimeKind::StableCoexistence, 1}) == "StableCoexistence");
    REQUIRE(regime_name({RegimeKind::PrivateUnstable, 0}) == "PrivateUnstable");
    REQUIRE(regime_name({RegimeKind::StateUnstable, 0}) == "StateUnstable");
    REQUIRE(regime_name({RegimeKind::BothUnstable, 0}) == "BothUnstable");
    REQUIRE(regime_name({RegimeKind::NoPositiveEquilibrium, 0}) == "NoPositiveEquilibrium");
    REQUIRE(regime_name({RegimeKind::PeriodK, 4}) == "Period4");
    REQUIRE(regime_name({RegimeKind::Chaotic, 0}) == "Chaotic");
    REQUIRE(regime_name({RegimeKind::Divergent, 0}) == "Divergent");
}

TEST_CASE("coupled orbit summary finds the attractor of a contracting market") {
    const MarketParams p = make(1.2, 1.0);
    const FixedPoint fp = coexistence_fixed_point(p.reduced(), p.a).point;
    const OrbitSummary s =
        coupled_orbit_summary(p, {fp.x + 1e-3, fp.y + 1e-3}, 2000, 512, 1e-6, 1024);
    REQUIRE_FALSE(s.diverged);
    REQUIRE(s.period == 1);
    REQUIRE(s.samples.size() == 1);
    REQUIRE(s.samples[0] == Approx(fp.x).margin(1e-9));
    // Dominant stretching rate at the point is the spectral radius.
    REQUIRE(s.lyapunov == Approx(std::log(0.8385164807134504)).margin(0.01));
}

TEST_CASE("coupled orbit summary sees the flip cycle the axis conditions miss") {
    const MarketParams p = make(1.8, 1.0);
    const FixedPoint fp = coexistence_fixed_point(p.reduced(), p.a).point;
    const OrbitSummary s =
        coupled_orbit_summary(p, {fp.x + 1e-3, fp.y + 1e-3}, 10000, 1024, 1e-6, 1024);
    REQUIRE_FALSE(s.diverged);
    REQUIRE(s.period == 2);
    REQUIRE(s.samples.size() == 2);
    REQUIRE(std::abs(s.samples[0] - s.samples[1]) > 1e-3);
    REQUIRE(s.lyapunov < 0.0);
}

TEST_CASE("runaway markets are flagged divergent, fast ones during burn-in") {
    const MarketParams p = make(2.5, 1.0);
    const FixedPoint fp = coexistence_fixed_point(p.reduced(), p.a).point;
    const OrbitSummary s =
        coupled_orbit_summary(p, {fp.x + 1e-3, fp.y + 1e-3}, 10000, 1024, 1e-6, 1024);
    REQUIRE(s.diverged);
    REQUIRE_FALSE(s.period.has_value());
    REQUIRE(std::isnan(s.lyapunov));

    // With no burn-in the escape happens inside the window and leaves the
    // pre-escape samples behind.
    const OrbitSummary t =
        coupled_orbit_summary(p, {fp.x + 1e-3, fp.y + 1e-3}, 0, 1024, 1e-6, 1024);
    REQUIRE(t.diverged);
    REQUIRE_FALSE(t.samples.empty());
    REQUIRE(t.samples.size() < 1024);
}

TEST_CASE("orbit summary rejects an empty window") {
    REQUIRE_THROWS_AS(coupled_orbit_summary(make(1.2, 1.0), {0.1, 0.1}, 10, 0, 1e-6, 16),
                      std::invalid_argument);
}

TEST_CASE("classified regimes pair the closed-form label with the observation") {
    const RegimeClassification rc = classify_regime(make(1.2, 1.0), light());
    REQUIRE(rc.analytic.kind == RegimeKind::StableCoexistence);
    REQUIRE(rc.empirical.period == 1);

    // Flip zone: conditions say stable, the orbit settles on a 2-cycle. The
    // pair records the disagreement instead of hiding it.
    const RegimeClassification flip = classify_regime(make(1.8, 1.0), light());
    REQUIRE(flip.analytic.kind == RegimeKind::StableCoexistence);
    REQUIRE(flip.empirical.period == 2);

    const RegimeClassification gone = classify_regime(make(2.5, 1.0), light());
    REQUIRE(gone.analytic.kind == RegimeKind::StateUnstable);
    REQUIRE(gone.empirical.diverged);

    // Without a positive point the orbit starts from the fixed interior seed.
    const RegimeClassification none = classify_regime(make(0.8, 1.0), light());
    REQUIRE(none.analytic.kind == RegimeKind::NoPositiveEquilibrium);
    REQUIRE_FALSE(none.empirical.diverged);
}

TEST_CASE("observed regime of a cell is reconstructed from period and exponent") {
    SweepCell cell;
    cell.empirical_period = 1;
    cell.lyapunov = -0.2;
    REQUIRE(empirical_regime(cell).kind == RegimeKind::StableCoexistence);
    cell.empirical_period = 6;
    REQUIRE(empirical_regime(cell).kind == RegimeKind::PeriodK);
    REQUIRE(empirical_regime(cell).period == 6);
    cell.empirical_period.reset();
    cell.lyapunov = 0.4;
    REQUIRE(empirical_regime(cell).kind == RegimeKind::Chaotic);
    cell.lyapunov = std::numeric_limits<double>::quiet_NaN();
    REQUIRE(empirical_regime(cell).kind == RegimeKind::Divergent);
}

TEST_CASE("observed regime of a summary follows the same rules") {
    OrbitSummary s;
    s.diverged = true;
    REQUIRE(empirical_regime(s).kind == RegimeKind::Divergent);
    s.diverged = false;
    s.period = 1;
    REQUIRE(empirical_regime(s).kind == RegimeKind::StableCoexistence);
    s.period = 5;
    REQUIRE(empirical_regime(s).kind == RegimeKind::PeriodK);
    s.period.reset();
    REQUIRE(empirical_regime(s).kind == RegimeKind::Chaotic);
}

TEST_CASE("sweep spans both axes inclusively in row-major order") {
    const SweepGrid g = sweep(1.2, 2.5, 0.8, 1.2, 2, 3, light());
    REQUIRE(g.c_axis.size() == 2);
    REQUIRE(g.ratio_axis.size() == 3);
    REQUIRE(g.cells.size() == 6);
    REQUIRE(g.c_axis.front() == 1.2);
    REQUIRE(g.c_axis.back() == 2.5);
    REQUIRE(g.ratio_axis.front() == 0.8);
    REQUIRE(g.ratio_axis[1] == Approx(1.0).margin(1e-12));
    REQUIRE(g.ratio_axis.back() == 1.2);

    // Low-demand row coexists, high-demand row exceeds the state bound.
    for (std::size_t ri = 0; ri < 3; ++ri) {
        REQUIRE(g.at(0, ri).analytic.kind == RegimeKind::StableCoexistence);
        REQUIRE(g.at(0, ri).empirical_period == 1);
        REQUIRE(g.at(1, ri).analytic.kind == RegimeKind::StateUnstable);
    }
    // at() walks the flat vector with c outermost.
    REQUIRE(&g.at(1, 2) == &g.cells[1 * 3 + 2]);
}

TEST_CASE("small stable patch classifies identically at every node") {
    const SweepGrid g = sweep(1.1, 1.3, 0.9, 1.1, 3, 3, light());
    for (const SweepCell& cell : g.cells) {
        REQUIRE(cell.analytic.kind == RegimeKind::StableCoexistence);
        REQUIRE(cell.empirical_period == 1);
        REQUIRE(cell.lyapunov < 0.0);
    }
}

TEST_CASE("sweep validates its ranges and sample counts") {
    REQUIRE_THROWS_AS(sweep(0.0, 2.0, 0.5, 2.0, 2, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(sweep(1.0, 2.0, -0.5, 2.0, 2, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(sweep(2.0, 1.0, 0.5, 2.0, 2, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(sweep(1.0, 2.0, 0.5, 2.0, 1, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(sweep(1.0, 2.0, 0.5, 2.0, 2, 1), std::invalid_argument);
}
