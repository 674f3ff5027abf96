#pragma once

// Flat key-value experiment configuration with dotted section keys.
// Unknown keys are rejected; omitted keys take documented defaults; grid and
// profile discretization keys accept "auto". The canonical serialization
// (sorted keys, shortest round-trip numbers) defines the config hash.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "shocklab/errors.hpp"
#include "shocklab/gas.hpp"
#include "shocklab/solver.hpp"

namespace shocklab {

struct ExperimentConfig {
    GasModel gas;
    double v_plus = 0.0;
    double u_plus = 0.0;
    InitialDataSpec init;
    std::optional<double> grid_L;
    std::optional<int> grid_n;
    double t_final = 20.0;
    double cfl = 0.4;
    std::optional<double> output_interval;  // default t_final / 200
    std::vector<double> snapshot_times;     // default {0, t_final}
    std::uint64_t max_steps = 50'000'000;
    std::optional<double> profile_half_width;
    std::optional<double> profile_resolution;
    std::string out_dir;
    std::string gates = "auto";
};

namespace detail {

inline std::string shortest(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline double parse_number(std::string_view key, std::string_view value) {
    const std::string tmp(value);
    char* end = nullptr;
    const double x = std::strtod(tmp.c_str(), &end);
    if (end != tmp.c_str() + tmp.size() || tmp.empty())
        throw config_error("invalid number for key '" + std::string(key) + "': " + tmp);
    return x;
}

inline std::int64_t parse_integer(std::string_view key, std::string_view value) {
    const std::string tmp(value);
    char* end = nullptr;
    const long long x = std::strtoll(tmp.c_str(), &end, 10);
    if (end != tmp.c_str() + tmp.size() || tmp.empty())
        throw config_error("invalid integer for key '" + std::string(key) + "': " + tmp);
    return x;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace detail

inline InitialKind parse_initial_kind(std::string_view v) {
    if (v == "pure-profile") return InitialKind::pure_profile;
    if (v == "bump") return InitialKind::bump;
    if (v == "random-smooth") return InitialKind::random_smooth;
    throw config_error("init.kind must be one of pure-profile, bump, random-smooth; got '" +
                       std::string(v) + "'");
}

inline ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::set<std::string> seen;
    bool have_gamma = false, have_vplus = false, have_uplus = false, have_beta = false;
    bool explicit_snapshots = false, explicit_tfinal = false;

    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        std::string_view line(raw);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw config_error("malformed line (expected key = value): " + std::string(line));
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string value(detail::trim(line.substr(eq + 1)));
        if (!seen.insert(key).second) throw config_error("duplicate key '" + key + "'");

        const bool is_auto = (value == "auto");
        if (key == "gas.a") {
            cfg.gas.a = detail::parse_number(key, value);
        } else if (key == "gas.gamma") {
            cfg.gas.gamma = detail::parse_number(key, value);
            have_gamma = true;
        } else if (key == "gas.alpha") {
            cfg.gas.alpha = detail::parse_number(key, value);
        } else if (key == "state.v_plus") {
            cfg.v_plus = detail::parse_number(key, value);
            have_vplus = true;
        } else if (key == "state.u_plus") {
            cfg.u_plus = detail::parse_number(key, value);
            have_uplus = true;
        } else if (key == "init.kind") {
            cfg.init.kind = parse_initial_kind(value);
        } else if (key == "init.amplitude") {
            cfg.init.amplitude = detail::parse_number(key, value);
        } else if (key == "init.support_lo") {
            cfg.init.support_lo = detail::parse_number(key, value);
        } else if (key == "init.support_hi") {
            cfg.init.support_hi = detail::parse_number(key, value);
        } else if (key == "init.seed") {
            cfg.init.seed = static_cast<std::uint64_t>(detail::parse_integer(key, value));
        } else if (key == "init.beta") {
            cfg.init.beta = detail::parse_number(key, value);
            have_beta = true;
        } else if (key == "grid.L") {
            if (!is_auto) cfg.grid_L = detail::parse_number(key, value);
        } else if (key == "grid.n") {
            if (!is_auto) cfg.grid_n = static_cast<int>(detail::parse_integer(key, value));
        } else if (key == "time.t_final") {
            cfg.t_final = detail::parse_number(key, value);
            explicit_tfinal = true;
        } else if (key == "time.cfl") {
            cfg.cfl = detail::parse_number(key, value);
        } else if (key == "time.output_interval") {
            if (!is_auto) cfg.output_interval = detail::parse_number(key, value);
        } else if (key == "time.snapshots") {
            explicit_snapshots = true;
            cfg.snapshot_times.clear();
            std::string_view rest(value);
            while (!rest.empty()) {
                const auto comma = rest.find(',');
                const auto item = detail::trim(rest.substr(0, comma));
                if (!item.empty()) cfg.snapshot_times.push_back(detail::parse_number(key, item));
                if (comma == std::string_view::npos) break;
                rest = rest.substr(comma + 1);
            }
        } else if (key == "time.max_steps") {
            cfg.max_steps = static_cast<std::uint64_t>(detail::parse_integer(key, value));
        } else if (key == "profile.half_width") {
            if (!is_auto) cfg.profile_half_width = detail::parse_number(key, value);
        } else if (key == "profile.resolution") {
            if (!is_auto) cfg.profile_resolution = detail::parse_number(key, value);
        } else if (key == "paths.out_dir") {
            cfg.out_dir = value;
        } else if (key == "verify.gates") {
            cfg.gates = value;
        } else {
            throw config_error("unknown key '" + key + "'");
        }
    }

    if (!have_gamma) throw config_error("missing required key gas.gamma");
    if (!have_vplus) throw config_error("missing required key state.v_plus");
    if (!have_uplus) throw config_error("missing required key state.u_plus");
    if (!have_beta) throw config_error("missing required key init.beta");
    (void)explicit_tfinal;
    if (!explicit_snapshots) cfg.snapshot_times = {0.0, cfg.t_final};

    // physical and structural validation
    if (!(cfg.gas.gamma > 1.0)) throw config_error("gamma must exceed 1");
    if (!(cfg.gas.a > 0.0)) throw config_error("gas.a must be positive");
    if (!(cfg.gas.alpha >= 0.0)) throw config_error("gas.alpha must be non-negative");
    if (!(cfg.v_plus > 0.0)) throw config_error("v_plus must be positive");
    if (!(cfg.u_plus < 0.0)) throw config_error("u_plus must be negative (outgoing 2-shock)");
    if (!(cfg.init.beta > 0.0)) throw config_error("init.beta must be positive");
    if (!(cfg.init.amplitude >= 0.0)) throw config_error("init.amplitude must be non-negative");
    if (!(cfg.t_final > 0.0)) throw config_error("time.t_final must be positive");
    if (!(cfg.cfl > 0.0) || !(cfg.cfl <= 2.0)) throw config_error("time.cfl must lie in (0, 2]");
    if (cfg.output_interval && !(*cfg.output_interval > 0.0))
        throw config_error("time.output_interval must be positive");
    if (cfg.grid_n && *cfg.grid_n < 64) throw config_error("grid.n must be at least 64");
    if (cfg.grid_L && !(*cfg.grid_L > 0.0)) throw config_error("grid.L must be positive");
    if (cfg.max_steps == 0) throw config_error("time.max_steps must be positive");
    if (cfg.init.kind != InitialKind::pure_profile) {
        if (!(cfg.init.support_lo > 0.0) || !(cfg.init.support_hi > cfg.init.support_lo))
            throw config_error("init.support_lo/support_hi required: 0 < lo < hi");
    }
    for (double t : cfg.snapshot_times)
        if (t < 0.0 || t > cfg.t_final)
            throw config_error("time.snapshots entries must lie in [0, t_final]");
    if (cfg.profile_half_width && !(*cfg.profile_half_width > 0.0))
        throw config_error("profile.half_width must be positive");
    if (cfg.profile_resolution && !(*cfg.profile_resolution > 0.0))
        throw config_error("profile.resolution must be positive");
    return cfg;
}

// Canonical form: alphabetical keys, shortest round-trip numbers, explicit
// "auto" for unresolved discretization values.
inline std::string serialize_config(const ExperimentConfig& cfg) {
    using detail::shortest;
    std::ostringstream out;
    out << "gas.a = " << shortest(cfg.gas.a) << "\n";
    out << "gas.alpha = " << shortest(cfg.gas.alpha) << "\n";
    out << "gas.gamma = " << shortest(cfg.gas.gamma) << "\n";
    out << "grid.L = " << (cfg.grid_L ? shortest(*cfg.grid_L) : "auto") << "\n";
    out << "grid.n = " << (cfg.grid_n ? std::to_string(*cfg.grid_n) : "auto") << "\n";
    out << "init.amplitude = " << shortest(cfg.init.amplitude) << "\n";
    out << "init.beta = " << shortest(cfg.init.beta) << "\n";
    out << "init.kind = " << to_string(cfg.init.kind) << "\n";
    out << "init.seed = " << cfg.init.seed << "\n";
    out << "init.support_hi = " << shortest(cfg.init.support_hi) << "\n";
    out << "init.support_lo = " << shortest(cfg.init.support_lo) << "\n";
    out << "paths.out_dir = " << cfg.out_dir << "\n";
    out << "profile.half_width = "
        << (cfg.profile_half_width ? shortest(*cfg.profile_half_width) : "auto") << "\n";
    out << "profile.resolution = "
        << (cfg.profile_resolution ? shortest(*cfg.profile_resolution) : "auto") << "\n";
    out << "state.u_plus = " << shortest(cfg.u_plus) << "\n";
    out << "state.v_plus = " << shortest(cfg.v_plus) << "\n";
    out << "time.cfl = " << shortest(cfg.cfl) << "\n";
    out << "time.max_steps = " << cfg.max_steps << "\n";
    out << "time.output_interval = "
        << (cfg.output_interval ? shortest(*cfg.output_interval) : "auto") << "\n";
    out << "time.snapshots = ";
    for (std::size_t i = 0; i < cfg.snapshot_times.size(); ++i)
        out << (i ? "," : "") << shortest(cfg.snapshot_times[i]);
    out << "\n";
    out << "time.t_final = " << shortest(cfg.t_final) << "\n";
    out << "verify.gates = " << cfg.gates << "\n";
    return out.str();
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string config_hash(const ExperimentConfig& cfg) {
    const std::uint64_t h = fnv1a64(serialize_config(cfg));
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return serialize_config(a) == serialize_config(b);
}

}  // namespace shocklab
