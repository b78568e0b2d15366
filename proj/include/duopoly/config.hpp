#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "duopoly/errors.hpp"

namespace duopoly {

// Numerical knobs shared by the command line tools. Everything has a working
// default; a config file only needs the keys it wants to change.
struct RunConfig {
    double divergence_threshold = 1e12;
    double period_tol = 1e-6;
    double bisect_tol = 1e-6;
    double seed_z = 0.31830988;
    double perturbation = 1e-3;
    double gamma_min = 0.6;
    double gamma_max = 1.0;
    double sweep_c_min = 0.5;
    double sweep_c_max = 3.5;
    double sweep_ratio_min = 0.5;
    double sweep_ratio_max = 2.0;
    std::size_t burn_in = 10000;
    std::size_t window = 4096;
    std::size_t max_period = 1024;
    std::size_t orbit_steps = 1000;
    std::size_t scan_steps = 201;
    std::size_t lyapunov_steps = 1000000;
    std::size_t samples = 100;
    std::size_t doubling_k_max = 4;
    std::size_t sweep_c_cells = 101;
    std::size_t sweep_ratio_cells = 101;
    std::size_t bisect_burn_factor = 10;
    double bisect_refine_band = 1e-3;
};

namespace detail {

inline void assign_config_key(RunConfig& cfg, const std::string& key, const std::string& raw) {
    std::map<std::string, double RunConfig::*> real_keys = {
        {"divergence_threshold", &RunConfig::divergence_threshold},
        {"period_tol", &RunConfig::period_tol},
        {"bisect_tol", &RunConfig::bisect_tol},
        {"seed_z", &RunConfig::seed_z},
        {"perturbation", &RunConfig::perturbation},
        {"gamma_min", &RunConfig::gamma_min},
        {"gamma_max", &RunConfig::gamma_max},
        {"sweep_c_min", &RunConfig::sweep_c_min},
        {"sweep_c_max", &RunConfig::sweep_c_max},
        {"sweep_ratio_min", &RunConfig::sweep_ratio_min},
        {"sweep_ratio_max", &RunConfig::sweep_ratio_max},
        {"bisect_refine_band", &RunConfig::bisect_refine_band},
    };
    std::map<std::string, std::size_t RunConfig::*> count_keys = {
        {"burn_in", &RunConfig::burn_in},
        {"window", &RunConfig::window},
        {"max_period", &RunConfig::max_period},
        {"orbit_steps", &RunConfig::orbit_steps},
        {"scan_steps", &RunConfig::scan_steps},
        {"lyapunov_steps", &RunConfig::lyapunov_steps},
        {"samples", &RunConfig::samples},
        {"doubling_k_max", &RunConfig::doubling_k_max},
        {"sweep_c_cells", &RunConfig::sweep_c_cells},
        {"sweep_ratio_cells", &RunConfig::sweep_ratio_cells},
        {"bisect_burn_factor", &RunConfig::bisect_burn_factor},
    };

    std::istringstream vs(raw);
    double value = 0.0;
    char trailing = '\0';
    if (!(vs >> value) || (vs >> trailing))
        throw ConfigError("config key '" + key + "': cannot parse value '" + raw + "'");
    if (!std::isfinite(value) || value <= 0.0)
        throw ConfigError("config key '" + key + "': value must be positive and finite");

    if (auto it = real_keys.find(key); it != real_keys.end()) {
        cfg.*(it->second) = value;
        return;
    }
    if (auto it = count_keys.find(key); it != count_keys.end()) {
        if (value != std::floor(value) || value > 1e15)
            throw ConfigError("config key '" + key + "': expects a whole number");
        cfg.*(it->second) = static_cast<std::size_t>(value);
        return;
    }
    throw ConfigError("unknown config key '" + key + "'");
}

} // namespace detail

// Parses `key = value` lines. Blank lines and lines starting with # are
// skipped; anything else must be a known key.
inline RunConfig parse_run_config(std::istream& in) {
    RunConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");
        detail::assign_config_key(cfg, key, value);
    }
    return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file '" + path + "'");
    return parse_run_config(in);
}

} // namespace duopoly
