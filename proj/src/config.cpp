#include "wavelab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wavelab/waterwave.hpp"

namespace wavelab {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw config_error("config: cannot parse boolean value '" + v + "'");
}

}  // namespace

double ExperimentConfig::rho0_value() const {
    if (rho0 > 0.0) return rho0;
    return 0.4 * std::min(1.0, s - 1.0 - 0.5 * grid.d);
}

double ExperimentConfig::T_value() const {
    if (T > 0.0) return T;
    const double k = base_mode * grid.dxi();
    const double omega = std::sqrt(g * k * std::tanh(k * h));
    return periods * 2.0 * pi / omega;
}

double ExperimentConfig::dt_value() const {
    if (dt > 0.0) return dt;
    return cfl * cfl_limit(grid, g, h);
}

std::uint64_t ExperimentConfig::config_hash() const {
    std::uint64_t hash = 1469598103934665603ull;
    for (char c : raw_text) {
        hash ^= std::uint64_t(static_cast<unsigned char>(c));
        hash *= 1099511628211ull;
    }
    return hash;
}

void ExperimentConfig::validate() const {
    try {
        grid.validate();
    } catch (const parameter_error& e) {
        throw config_error(std::string("config: ") + e.what());
    }
    if (kind.empty()) throw config_error("config: scenario kind is required");
    if (!(s > 1.0 + 0.5 * grid.d)) throw config_error("config: s must exceed 1 + d/2");
    const bool reduction_scenario =
        kind == "flowmap" || kind == "reduction" || kind == "recovery" || kind == "dn";
    if (reduction_scenario && !(s > 1.5 + 0.5 * grid.d))
        throw config_error("config: scenario '" + kind + "' requires s > 3/2 + d/2");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0 && eps[i] < 1.0)) throw config_error("config: eps values must lie in (0,1)");
        if (i > 0 && !(eps[i] < eps[i - 1])) throw config_error("config: eps list must be strictly decreasing");
    }
    if (!(g > 0.0) || !(h > 0.0)) throw config_error("config: g and h must be positive");
    if (n_z < 4) throw config_error("config: n_z too small");
    if (sample_stride < 1) throw config_error("config: sample_stride must be >= 1");
    if (n_min < 0 || n_max < n_min) throw config_error("config: bad n range");
    if (threads < 1) throw config_error("config: threads must be >= 1");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    cfg.raw_text = text;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw config_error("config: bad section header at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw config_error("config: expected key = value at line " + std::to_string(lineno));
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        std::string full = section.empty() ? key : section + "." + key;

        try {
            if (full == "scenario.kind") cfg.kind = val;
            else if (full == "scenario.id") cfg.id = val;
            else if (full == "grid.d") cfg.grid.d = std::stoi(val);
            else if (full == "grid.n") cfg.grid.n = std::stoi(val);
            else if (full == "grid.period") cfg.grid.period = std::stod(val);
            else if (full == "physics.g") cfg.g = std::stod(val);
            else if (full == "physics.h") cfg.h = std::stod(val);
            else if (full == "physics.delta") cfg.delta = std::stod(val);
            else if (full == "analysis.s") cfg.s = std::stod(val);
            else if (full == "analysis.rho0") cfg.rho0 = std::stod(val);
            else if (full == "analysis.eps") cfg.eps = parse_list(val);
            else if (full == "data.family") cfg.family = val;
            else if (full == "data.base_eta_amp") cfg.base_eta_amp = std::stod(val);
            else if (full == "data.base_mode") cfg.base_mode = std::stoi(val);
            else if (full == "data.pert_mode") cfg.pert_mode = std::stoi(val);
            else if (full == "data.pert_size") cfg.pert_size = std::stod(val);
            else if (full == "data.n_min") cfg.n_min = std::stoi(val);
            else if (full == "data.n_max") cfg.n_max = std::stoi(val);
            else if (full == "data.band_limit") cfg.band_limit = std::stoi(val);
            else if (full == "data.amp") cfg.amp = std::stod(val);
            else if (full == "data.eta_file") cfg.eta_file = val;
            else if (full == "data.psi_file") cfg.psi_file = val;
            else if (full == "integration.periods") cfg.periods = std::stod(val);
            else if (full == "integration.T") cfg.T = std::stod(val);
            else if (full == "integration.cfl") cfg.cfl = std::stod(val);
            else if (full == "integration.dt") cfg.dt = std::stod(val);
            else if (full == "integration.sample_stride") cfg.sample_stride = std::stoi(val);
            else if (full == "integration.n_z") cfg.n_z = std::stoi(val);
            else if (full == "integration.dealias") cfg.dealias_flag = parse_bool(val);
            else if (full == "integration.filter") cfg.exp_filter = parse_bool(val);
            else if (full == "sweep.seed") cfg.seed = std::stoull(val);
            else if (full == "sweep.threads") cfg.threads = std::stoi(val);
            else if (section == "thresholds") cfg.thresholds[key] = std::stod(val);
            else throw config_error("config: unknown key '" + full + "' at line " + std::to_string(lineno));
        } catch (const config_error&) {
            throw;
        } catch (const std::exception&) {
            throw config_error("config: cannot parse value for '" + full + "' at line " + std::to_string(lineno));
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace wavelab
