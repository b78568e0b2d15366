#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "duopoly/errors.hpp"
#include "duopoly/market.hpp"
#include "duopoly/sweep.hpp"

namespace duopoly {

// Shortest round-trippable decimal form. All emitters funnel numbers through
// here so identical inputs give byte-identical files.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

inline double parse_real(const std::string& s, const char* what) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw IoError(std::string("cannot parse ") + what + " value '" + s + "'");
    return v;
}

inline std::size_t parse_count(const std::string& s, const char* what) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const unsigned long long v = std::strtoull(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw IoError(std::string("cannot parse ") + what + " value '" + s + "'");
    return static_cast<std::size_t>(v);
}

} // namespace detail

inline void emit_orbit_csv(std::ostream& out, const Orbit& orbit) {
    out << "n,x,y\n";
    for (std::size_t i = 0; i < orbit.states.size(); ++i)
        out << i << ',' << fmt17(orbit.states[i].x) << ',' << fmt17(orbit.states[i].y) << '\n';
}

inline std::vector<MarketState> parse_orbit_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || detail::split_csv_line(line) != std::vector<std::string>{"n", "x", "y"})
        throw IoError("orbit CSV must start with header n,x,y");
    std::vector<MarketState> states;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const std::vector<std::string> f = detail::split_csv_line(line);
        if (f.size() != 3)
            throw IoError("orbit CSV row must have 3 fields");
        if (detail::parse_count(f[0], "orbit index") != states.size())
            throw IoError("orbit CSV rows must be numbered consecutively from 0");
        states.push_back({detail::parse_real(f[1], "x"), detail::parse_real(f[2], "y")});
    }
    return states;
}

struct BifurcationPoint {
    double gamma;
    double z;
};

inline void emit_bifurcation_csv(std::ostream& out, const std::vector<BifurcationPoint>& points) {
    out << "gamma,z_sample\n";
    for (const BifurcationPoint& p : points)
        out << fmt17(p.gamma) << ',' << fmt17(p.z) << '\n';
}

inline const char* sweep_csv_header() { return "c,beta_ratio,analytic_regime,empirical_period,lyapunov"; }

inline void emit_sweep_csv(std::ostream& out, const SweepGrid& grid) {
    out << sweep_csv_header() << '\n';
    for (std::size_t i = 0; i < grid.c_axis.size(); ++i) {
        for (std::size_t j = 0; j < grid.ratio_axis.size(); ++j) {
            const SweepCell& cell = grid.at(i, j);
            out << fmt17(grid.c_axis[i]) << ',' << fmt17(grid.ratio_axis[j]) << ','
                << regime_name(cell.analytic) << ',';
            if (cell.empirical_period)
                out << *cell.empirical_period;
            out << ',' << fmt17(cell.lyapunov) << '\n';
        }
    }
}

inline Regime parse_regime(const std::string& name) {
    if (name == "StableCoexistence")
        return {RegimeKind::StableCoexistence, 1};
    if (name == "PrivateUnstable")
        return {RegimeKind::PrivateUnstable};
    if (name == "StateUnstable")
        return {RegimeKind::StateUnstable};
    if (name == "BothUnstable")
        return {RegimeKind::BothUnstable};
    if (name == "NoPositiveEquilibrium")
        return {RegimeKind::NoPositiveEquilibrium};
    if (name == "Chaotic")
        return {RegimeKind::Chaotic};
    if (name == "Divergent")
        return {RegimeKind::Divergent};
    if (name.rfind("Period", 0) == 0)
        return {RegimeKind::PeriodK, detail::parse_count(name.substr(6), "regime period")};
    throw IoError("unknown regime name '" + name + "'");
}

inline SweepGrid parse_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || detail::split_csv_line(line) !=
                                       detail::split_csv_line(sweep_csv_header()))
        throw IoError("sweep CSV has a wrong or missing header");
    SweepGrid g;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const std::vector<std::string> f = detail::split_csv_line(line);
        if (f.size() != 5)
            throw IoError("sweep CSV row must have 5 fields");
        const double c = detail::parse_real(f[0], "c");
        const double ratio = detail::parse_real(f[1], "beta_ratio");
        if (g.c_axis.empty() || c != g.c_axis.back())
            g.c_axis.push_back(c);
        if (g.c_axis.size() == 1)
            g.ratio_axis.push_back(ratio);
        SweepCell cell;
        cell.analytic = parse_regime(f[2]);
        if (!f[3].empty())
            cell.empirical_period = detail::parse_count(f[3], "empirical period");
        cell.lyapunov = detail::parse_real(f[4], "lyapunov");
        g.cells.push_back(cell);
    }
    if (g.cells.size() != g.c_axis.size() * g.ratio_axis.size())
        throw IoError("sweep CSV is not a complete row-major grid");
    return g;
}

struct PlotPoint {
    double x;
    double y;
};

struct PlotBounds {
    double x_min;
    double x_max;
    double y_min;
    double y_max;
};

// Fixed 1024x768 scatter plot. Bounds map linearly onto the full canvas with
// y flipped so larger values sit higher; non-finite points are dropped.
inline void emit_svg(std::ostream& out, const std::vector<PlotPoint>& points,
                     const PlotBounds& b) {
    if (!std::isfinite(b.x_min) || !std::isfinite(b.x_max) || !std::isfinite(b.y_min) ||
        !std::isfinite(b.y_max) || !(b.x_min < b.x_max) || !(b.y_min < b.y_max))
        throw std::invalid_argument("plot bounds must be finite and increasing");
    const double w = 1024.0, h = 768.0;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1024\" height=\"768\" "
           "viewBox=\"0 0 1024 768\">\n";
    out << "<rect width=\"1024\" height=\"768\" fill=\"white\"/>\n";
    out << "<line x1=\"0\" y1=\"768\" x2=\"1024\" y2=\"768\" stroke=\"black\" "
           "stroke-width=\"1\"/>\n";
    out << "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"768\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "<text x=\"4\" y=\"752\" font-size=\"12\">" << fmt17(b.x_min) << "</text>\n";
    out << "<text x=\"1020\" y=\"752\" font-size=\"12\" text-anchor=\"end\">" << fmt17(b.x_max)
        << "</text>\n";
    out << "<text x=\"4\" y=\"738\" font-size=\"12\">" << fmt17(b.y_min) << "</text>\n";
    out << "<text x=\"4\" y=\"14\" font-size=\"12\">" << fmt17(b.y_max) << "</text>\n";
    for (const PlotPoint& p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            continue;
        const double px = (p.x - b.x_min) / (b.x_max - b.x_min) * w;
        const double py = h - (p.y - b.y_min) / (b.y_max - b.y_min) * h;
        out << "<circle cx=\"" << fmt17(px) << "\" cy=\"" << fmt17(py)
            << "\" r=\"0.5\" fill=\"black\"/>\n";
    }
    out << "</svg>\n";
}

// Brightness encodes the observed regime; coexistence is lightest, divergence
// black, so the stable tongue reads directly off the raster.
inline int regime_gray(const Regime& r) {
    switch (r.kind) {
        case RegimeKind::StableCoexistence: return 255;
        case RegimeKind::Chaotic: return 224;
        case RegimeKind::PeriodK: return 208;
        case RegimeKind::PrivateUnstable: return 176;
        case RegimeKind::StateUnstable: return 128;
        case RegimeKind::BothUnstable: return 80;
        case RegimeKind::NoPositiveEquilibrium: return 32;
        case RegimeKind::Divergent: return 0;
    }
    return 0;
}

// Plain PGM raster of the observed regimes. One pixel per grid node, beta
// ratio left to right, c top to bottom starting from the highest c row.
inline void emit_pgm(std::ostream& out, const SweepGrid& grid) {
    const std::size_t nc = grid.c_axis.size();
    const std::size_t nr = grid.ratio_axis.size();
    out << "P2\n" << nr << ' ' << nc << "\n255\n";
    for (std::size_t row = 0; row < nc; ++row) {
        const std::size_t ci = nc - 1 - row;
        for (std::size_t j = 0; j < nr; ++j) {
            if (j > 0)
                out << ' ';
            out << regime_gray(empirical_regime(grid.at(ci, j)));
        }
        out << '\n';
    }
}

} // namespace duopoly
