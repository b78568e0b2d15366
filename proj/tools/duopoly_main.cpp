#include <cstddef>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "duopoly/duopoly.hpp"

namespace {

using duopoly::RunConfig;

void with_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
    if (path.empty()) {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw duopoly::IoError("cannot open output file '" + path + "'");
    fn(f);
    f.flush();
    if (!f)
        throw duopoly::IoError("error while writing '" + path + "'");
}

// Knob flags layered over an optional --config file: the file sets the base,
// explicitly passed flags win.
class Knobs {
  public:
    explicit Knobs(CLI::App* sub) : sub_(sub) {
        sub_->add_option("--config", config_path_, "key = value run configuration file");
    }

    void real(const std::string& flag, double RunConfig::*field, const std::string& desc) {
        auto v = std::make_shared<double>(RunConfig{}.*field);
        CLI::Option* opt = sub_->add_option(flag, *v, desc);
        apply_.push_back([opt, v, field](RunConfig& c) {
            if (opt->count() > 0)
                c.*field = *v;
        });
    }

    void count(const std::string& flag, std::size_t RunConfig::*field, const std::string& desc) {
        auto v = std::make_shared<std::size_t>(RunConfig{}.*field);
        CLI::Option* opt = sub_->add_option(flag, *v, desc);
        apply_.push_back([opt, v, field](RunConfig& c) {
            if (opt->count() > 0)
                c.*field = *v;
        });
    }

    RunConfig resolve() const {
        RunConfig cfg;
        if (!config_path_.empty()) {
            try {
                cfg = duopoly::load_run_config(config_path_);
            } catch (const duopoly::IoError& e) {
                throw duopoly::ConfigError(e.what());
            }
        }
        for (const auto& f : apply_)
            f(cfg);
        return cfg;
    }

  private:
    CLI::App* sub_;
    std::string config_path_;
    std::vector<std::function<void(RunConfig&)>> apply_;
};

struct ModelOpts {
    double alpha = 1.0;
    double c0 = 2.0;
    double mu = 1.0;
    double beta_x = 1.0;
    double beta_y = 1.0;
    double a = 1.0;

    void attach(CLI::App* sub) {
        sub->add_option("--alpha", alpha, "markup factor");
        sub->add_option("--c0", c0, "base market capacity");
        sub->add_option("--mu", mu, "price response scale");
        sub->add_option("--beta-x", beta_x, "private seller price coefficient");
        sub->add_option("--beta-y", beta_y, "state seller price coefficient");
        sub->add_option("--a", a, "state seller volume scale");
    }

    duopoly::MarketParams build() const { return {alpha, c0, mu, beta_x, beta_y, a}; }
};

const char* stability_name(duopoly::Stability s) {
    switch (s) {
        case duopoly::Stability::Stable: return "Stable";
        case duopoly::Stability::Marginal: return "Marginal";
        case duopoly::Stability::Unstable: return "Unstable";
        case duopoly::Stability::NotApplicable: return "NotApplicable";
    }
    return "NotApplicable";
}

const char* bool_name(bool b) { return b ? "true" : "false"; }

void run_fixpoint(const duopoly::MarketParams& p, std::ostream& out) {
    using duopoly::fmt17;
    const duopoly::ReducedParams r = p.reduced();
    const duopoly::FixedPoint tr = duopoly::trivial_fixed_point(r, p.a);
    double cx = std::numeric_limits<double>::quiet_NaN();
    double cy = cx, ratio = cx, res_x = cx, res_y = cx;
    bool positive = false;
    try {
        const duopoly::CoexistenceSolution sol = duopoly::coexistence_fixed_point(r, p.a);
        cx = sol.point.x;
        cy = sol.point.y;
        positive = sol.positive;
        const duopoly::MarketState next = duopoly::step(r, p.a, {cx, cy});
        res_x = next.x - cx;
        res_y = next.y - cy;
        try {
            ratio = duopoly::price_ratio_at_equilibrium(r, p.a, cy);
        } catch (const duopoly::DivisionByZero&) {
        }
    } catch (const duopoly::DegenerateEquilibrium&) {
    }
    out << "c = " << fmt17(r.c) << "\n";
    out << "delta_x = " << fmt17(r.delta_x) << "\n";
    out << "delta_y = " << fmt17(r.delta_y) << "\n";
    out << "trivial_x = " << fmt17(tr.x) << "\n";
    out << "trivial_y = " << fmt17(tr.y) << "\n";
    out << "coexistence_x = " << fmt17(cx) << "\n";
    out << "coexistence_y = " << fmt17(cy) << "\n";
    out << "positive = " << bool_name(positive) << "\n";
    out << "price_ratio = " << fmt17(ratio) << "\n";
    out << "residual_x = " << fmt17(res_x) << "\n";
    out << "residual_y = " << fmt17(res_y) << "\n";
}

void run_stability(const duopoly::MarketParams& p, const RunConfig& cfg,
                   const std::string& format, std::ostream& out) {
    using duopoly::fmt17;
    const duopoly::ReducedParams r = p.reduced();
    const duopoly::StabilityReport rep = duopoly::stability_report(p);
    const duopoly::RegimeClassification rc = duopoly::classify_regime(p, cfg);
    const duopoly::Regime empirical = duopoly::empirical_regime(rc.empirical);
    const std::size_t period = rc.empirical.period.value_or(0);
    const double ub = duopoly::state_stability_upper_bound(p.beta_x, p.beta_y);
    if (format == "csv") {
        out << "c,private,state,coexistence,price_bound_ok,spectral_radius,"
               "analytic_regime,empirical_regime,empirical_period,lyapunov\n";
        out << fmt17(r.c) << ',' << stability_name(rep.private_cond.value) << ','
            << stability_name(rep.state_cond.value) << ','
            << stability_name(rep.coexistence_cond.value) << ',' << bool_name(rep.price_bound_ok)
            << ',' << fmt17(rep.jacobian_spectral_radius) << ',' << regime_name(rc.analytic)
            << ',' << regime_name(empirical) << ',' << period << ','
            << fmt17(rc.empirical.lyapunov) << '\n';
        return;
    }
    out << "c = " << fmt17(r.c) << "\n";
    out << "private = " << stability_name(rep.private_cond.value) << "\n";
    out << "private_margin = " << fmt17(rep.private_cond.margin) << "\n";
    out << "state = " << stability_name(rep.state_cond.value) << "\n";
    out << "state_margin = " << fmt17(rep.state_cond.margin) << "\n";
    out << "state_upper_bound = " << fmt17(ub) << "\n";
    out << "coexistence = " << stability_name(rep.coexistence_cond.value) << "\n";
    out << "coexistence_margin = " << fmt17(rep.coexistence_cond.margin) << "\n";
    out << "price_bound_ok = " << bool_name(rep.price_bound_ok) << "\n";
    out << "jacobian_spectral_radius = " << fmt17(rep.jacobian_spectral_radius) << "\n";
    out << "jacobian_stable = " << bool_name(rep.jacobian_stable) << "\n";
    out << "analytic_regime = " << regime_name(rc.analytic) << "\n";
    out << "empirical_regime = " << regime_name(empirical) << "\n";
    out << "empirical_period = " << period << "\n";
    out << "lyapunov = " << fmt17(rc.empirical.lyapunov) << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"point-map toolkit for a market shared by one private and one state seller"};
    app.require_subcommand(0, 1);
    bool ran = false;

    // iterate
    CLI::App* it = app.add_subcommand("iterate", "run the coupled map and emit the orbit as CSV");
    ModelOpts it_model;
    it_model.attach(it);
    Knobs it_knobs(it);
    double x0 = 0.1, y0 = 0.1;
    std::string it_out;
    it->add_option("--x0", x0, "initial private sales volume");
    it->add_option("--y0", y0, "initial state sales volume");
    it_knobs.count("--steps", &RunConfig::orbit_steps, "number of map applications");
    it->add_option("--out", it_out, "write CSV here instead of stdout");
    it->callback([&] {
        ran = true;
        const RunConfig cfg = it_knobs.resolve();
        const duopoly::Orbit orbit =
            duopoly::iterate(it_model.build(), {x0, y0}, cfg.orbit_steps, cfg.divergence_threshold);
        with_output(it_out, [&](std::ostream& os) { duopoly::emit_orbit_csv(os, orbit); });
    });

    // fixpoint
    CLI::App* fp = app.add_subcommand("fixpoint", "report both fixed points in closed form");
    ModelOpts fp_model;
    fp_model.attach(fp);
    std::string fp_out;
    fp->add_option("--out", fp_out, "write report here instead of stdout");
    fp->callback([&] {
        ran = true;
        with_output(fp_out, [&](std::ostream& os) { run_fixpoint(fp_model.build(), os); });
    });

    // stability
    CLI::App* st = app.add_subcommand("stability", "classify the equilibrium analytically and empirically");
    ModelOpts st_model;
    st_model.attach(st);
    Knobs st_knobs(st);
    std::string st_out, st_format = "plain";
    st_knobs.count("--burn-in", &RunConfig::burn_in, "transient steps before sampling");
    st_knobs.count("--window", &RunConfig::window, "sampling window length");
    st->add_option("--format", st_format, "plain or csv")->check(CLI::IsMember({"plain", "csv"}));
    st->add_option("--out", st_out, "write report here instead of stdout");
    st->callback([&] {
        ran = true;
        const RunConfig cfg = st_knobs.resolve();
        with_output(st_out,
                    [&](std::ostream& os) { run_stability(st_model.build(), cfg, st_format, os); });
    });

    // bifurcate
    CLI::App* bf = app.add_subcommand("bifurcate", "sample attractors across a gamma range as CSV");
    Knobs bf_knobs(bf);
    std::string bf_out, bf_svg;
    bf_knobs.real("--gamma-min", &RunConfig::gamma_min, "low end of the scan");
    bf_knobs.real("--gamma-max", &RunConfig::gamma_max, "high end of the scan");
    bf_knobs.count("--steps", &RunConfig::scan_steps, "number of gamma samples");
    bf_knobs.count("--burn-in", &RunConfig::burn_in, "transient steps before sampling");
    bf_knobs.count("--window", &RunConfig::window, "sampling window length");
    bf_knobs.count("--samples", &RunConfig::samples, "points kept per aperiodic gamma");
    bf_knobs.real("--seed-z", &RunConfig::seed_z, "initial point in (0,1)");
    bf->add_option("--out", bf_out, "write CSV here instead of stdout");
    bf->add_option("--svg", bf_svg, "also render the diagram to this SVG file");
    bf->callback([&] {
        ran = true;
        const RunConfig cfg = bf_knobs.resolve();
        if (cfg.scan_steps < 2)
            throw std::invalid_argument("bifurcation scan needs at least two gamma samples");
        std::vector<duopoly::BifurcationPoint> pts;
        for (std::size_t i = 0; i < cfg.scan_steps; ++i) {
            const double g = cfg.gamma_min + static_cast<double>(i) *
                                                 (cfg.gamma_max - cfg.gamma_min) /
                                                 static_cast<double>(cfg.scan_steps - 1);
            const duopoly::OrbitSummary s =
                duopoly::detect_period(g, cfg.seed_z, cfg.burn_in, cfg.window, cfg.period_tol,
                                       cfg.max_period, cfg.samples);
            if (s.diverged)
                continue;
            for (double z : s.samples)
                pts.push_back({g, z});
        }
        with_output(bf_out, [&](std::ostream& os) { duopoly::emit_bifurcation_csv(os, pts); });
        if (!bf_svg.empty()) {
            std::vector<duopoly::PlotPoint> dots;
            dots.reserve(pts.size());
            for (const duopoly::BifurcationPoint& p : pts)
                dots.push_back({p.gamma, p.z});
            with_output(bf_svg, [&](std::ostream& os) {
                duopoly::emit_svg(os, dots, {cfg.gamma_min, cfg.gamma_max, 0.0, 1.0});
            });
        }
    });

    // lyapunov
    CLI::App* ly = app.add_subcommand("lyapunov", "print the logistic Lyapunov exponent at one gamma");
    Knobs ly_knobs(ly);
    double ly_gamma = 1.0;
    std::string ly_out;
    ly->add_option("--gamma", ly_gamma, "logistic parameter in (0,1]");
    ly_knobs.count("--steps", &RunConfig::lyapunov_steps, "iterates averaged");
    ly_knobs.count("--burn-in", &RunConfig::burn_in, "transient steps before averaging");
    ly_knobs.real("--seed-z", &RunConfig::seed_z, "initial point in (0,1)");
    ly->add_option("--out", ly_out, "write the value here instead of stdout");
    ly->callback([&] {
        ran = true;
        const RunConfig cfg = ly_knobs.resolve();
        const double lam =
            duopoly::lyapunov_exponent(ly_gamma, cfg.seed_z, cfg.burn_in, cfg.lyapunov_steps);
        with_output(ly_out, [&](std::ostream& os) { os << duopoly::fmt17(lam) << "\n"; });
    });

    // cascade
    CLI::App* ca = app.add_subcommand("cascade", "locate period-doubling points and the ratio they converge to");
    Knobs ca_knobs(ca);
    std::string ca_out;
    ca_knobs.real("--gamma-min", &RunConfig::gamma_min, "low end of the search range");
    ca_knobs.real("--gamma-max", &RunConfig::gamma_max, "high end of the search range");
    ca_knobs.count("--burn-in", &RunConfig::burn_in, "transient steps before sampling");
    ca_knobs.count("--window", &RunConfig::window, "sampling window length");
    ca_knobs.real("--seed-z", &RunConfig::seed_z, "initial point in (0,1)");
    ca->add_option("--out", ca_out, "write the report here instead of stdout");
    ca->callback([&] {
        ran = true;
        const RunConfig cfg = ca_knobs.resolve();
        const duopoly::CascadeOptions co{cfg.seed_z,    cfg.burn_in,
                                         cfg.window,    cfg.period_tol,
                                         cfg.max_period, cfg.bisect_refine_band,
                                         cfg.bisect_burn_factor};
        const duopoly::DoublingCascade dc = duopoly::doubling_points(
            cfg.gamma_min, cfg.gamma_max, cfg.doubling_k_max, cfg.bisect_tol, co);
        with_output(ca_out, [&](std::ostream& os) {
            for (std::size_t k = 0; k < dc.points.size(); ++k)
                os << "gamma[" << k + 1 << "] = " << duopoly::fmt17(dc.points[k]) << "\n";
            for (std::size_t i = 0; i < dc.feigenbaum_estimates.size(); ++i)
                os << "ratio[" << i + 2 << "] = " << duopoly::fmt17(dc.feigenbaum_estimates[i])
                   << "\n";
            if (dc.points.size() >= 3)
                os << "feigenbaum_estimate = " << duopoly::fmt17(duopoly::feigenbaum_estimate(dc))
                   << "\n";
        });
    });

    // sweep
    CLI::App* sw = app.add_subcommand("sweep", "classify a c by beta-ratio grid of markets as CSV");
    Knobs sw_knobs(sw);
    std::string sw_out, sw_pgm, sw_svg;
    sw_knobs.real("--c-min", &RunConfig::sweep_c_min, "low edge of the c range");
    sw_knobs.real("--c-max", &RunConfig::sweep_c_max, "high edge of the c range");
    sw_knobs.real("--ratio-min", &RunConfig::sweep_ratio_min, "low edge of the beta ratio range");
    sw_knobs.real("--ratio-max", &RunConfig::sweep_ratio_max, "high edge of the beta ratio range");
    sw_knobs.count("--nc", &RunConfig::sweep_c_cells, "cells along the c axis");
    sw_knobs.count("--nr", &RunConfig::sweep_ratio_cells, "cells along the ratio axis");
    sw_knobs.count("--burn-in", &RunConfig::burn_in, "transient steps per cell");
    sw_knobs.count("--window", &RunConfig::window, "sampling window per cell");
    sw->add_option("--out", sw_out, "write CSV here instead of stdout");
    sw->add_option("--pgm", sw_pgm, "also render the regime raster to this PGM file");
    sw->add_option("--svg", sw_svg, "also plot analytically stable cells to this SVG file");
    sw->callback([&] {
        ran = true;
        const RunConfig cfg = sw_knobs.resolve();
        const duopoly::SweepGrid grid =
            duopoly::sweep(cfg.sweep_c_min, cfg.sweep_c_max, cfg.sweep_ratio_min,
                           cfg.sweep_ratio_max, cfg.sweep_c_cells, cfg.sweep_ratio_cells, cfg);
        with_output(sw_out, [&](std::ostream& os) { duopoly::emit_sweep_csv(os, grid); });
        if (!sw_pgm.empty())
            with_output(sw_pgm, [&](std::ostream& os) { duopoly::emit_pgm(os, grid); });
        if (!sw_svg.empty()) {
            std::vector<duopoly::PlotPoint> dots;
            for (std::size_t i = 0; i < grid.c_axis.size(); ++i)
                for (std::size_t j = 0; j < grid.ratio_axis.size(); ++j)
                    if (grid.at(i, j).analytic.kind == duopoly::RegimeKind::StableCoexistence)
                        dots.push_back({grid.c_axis[i], grid.ratio_axis[j]});
            with_output(sw_svg, [&](std::ostream& os) {
                duopoly::emit_svg(os, dots,
                                  {cfg.sweep_c_min, cfg.sweep_c_max, cfg.sweep_ratio_min,
                                   cfg.sweep_ratio_max});
            });
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const duopoly::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (!ran) {
        std::cerr << app.help();
        return 1;
    }
    return 0;
}
