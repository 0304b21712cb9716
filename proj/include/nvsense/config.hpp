// Copyright 2026 The nvsense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Sectioned key = value configuration with documented defaults.
//
// Units at the file level: *_hz keys are plain Hz (multiplied by 2*pi on
// load), *_w watts, *_s seconds; bare-rate keys (pump_rate, gamma_coh, ...)
// are 1/s and pass through unchanged. Unknown sections or keys are rejected
// by name.
//
// Defaults not traceable to a published value (pump/T1/dephasing rates,
// g_ens, the 300 K thermal derivation) are engineering choices for a dense
// room-temperature NV ensemble and are marked "unverified" in the README
// schema table.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nvsense/constants.hpp"
#include "nvsense/errors.hpp"
#include "nvsense/sensitivity.hpp"

namespace nvsense {

enum class OutputFormat { csv, json };

struct SweepSpec {
    double delta_cav_min_hz = -5e6;
    double delta_cav_max_hz = 5e6;
    int delta_cav_points = 101;
    double delta_ex_min_hz = -5e6;
    double delta_ex_max_hz = 5e6;
    int delta_ex_points = 101;
};

struct Config {
    PipelineConfig pipeline;
    SweepSpec sweep;
    double regime_threshold = 0.01;
    unsigned workers = 1;
    OutputFormat format = OutputFormat::csv;
    std::string out_dir = ".";
    bool render = false;

    // Full resolved parameter set in file units, in schema order, plus its
    // digest. Embedded in every output file so a figure is reproducible
    // from its own header.
    std::vector<std::pair<std::string, std::string>> resolved;
    std::string fingerprint;
};

namespace cfg_detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline double parse_double(const std::string& key, const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v))
        throw ConfigError("config: key \"" + key + "\" has non-numeric value \"" + text + "\"");
    return v;
}

inline int parse_int(const std::string& key, const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw ConfigError("config: key \"" + key + "\" has non-integer value \"" + text + "\"");
    return static_cast<int>(v);
}

inline bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError("config: key \"" + key + "\" has non-boolean value \"" + text + "\"");
}

// section -> allowed keys
inline const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"spin",
         {"omega_sys_hz", "rabi_hz", "pump_rate", "t1_rate", "thermal_rate", "dephasing_rate",
          "gamma_coh", "z_element"}},
        {"cavity", {"omega_cav_hz", "q_factor", "split_fraction", "g_ens_hz", "g_single_hz",
                    "n_nv"}},
        {"two_mode", {"omega1_hz", "omega2_hz", "kappa1_hz", "kappa2_hz", "g1_hz", "g2_hz"}},
        {"drive", {"omega_ex_hz", "power_in_w", "tau_s"}},
        {"demod", {"nf_db"}},
        {"sweep",
         {"delta_cav_min_hz", "delta_cav_max_hz", "delta_cav_points", "delta_ex_min_hz",
          "delta_ex_max_hz", "delta_ex_points"}},
        {"numerics", {"fd_step_hz", "chi_mode", "regime_threshold", "steady_tol", "workers"}},
        {"output", {"format", "out_dir", "channel", "render"}},
    };
    return s;
}

using RawConfig = std::map<std::string, std::string>;   // "section.key" -> value text

inline RawConfig parse_ini(std::istream& in) {
    RawConfig raw;
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: malformed section header at line " +
                                  std::to_string(line_no));
            section = trim(line.substr(1, line.size() - 2));
            if (!schema().count(section))
                throw ConfigError("config: unknown section \"" + section + "\"");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected key = value at line " + std::to_string(line_no));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("config: key \"" + key + "\" appears before any [section]");
        if (!schema().at(section).count(key))
            throw ConfigError("config: unknown key \"" + key + "\" in section [" + section + "]");
        const std::string full = section + "." + key;
        if (raw.count(full)) throw ConfigError("config: duplicate key \"" + full + "\"");
        if (value.empty()) throw ConfigError("config: key \"" + full + "\" has empty value");
        raw[full] = value;
    }
    return raw;
}

struct Resolver {
    RawConfig raw;
    std::vector<std::pair<std::string, std::string>> resolved;

    std::optional<std::string> get(const std::string& full_key) {
        auto it = raw.find(full_key);
        if (it == raw.end()) return std::nullopt;
        return it->second;
    }

    double num(const std::string& key, double def) {
        const auto v = get(key);
        const double out = v ? parse_double(key, *v) : def;
        resolved.emplace_back(key, fmt_double(out));
        return out;
    }

    int integer(const std::string& key, int def) {
        const auto v = get(key);
        const int out = v ? parse_int(key, *v) : def;
        resolved.emplace_back(key, std::to_string(out));
        return out;
    }

    bool boolean(const std::string& key, bool def) {
        const auto v = get(key);
        const bool out = v ? parse_bool(key, *v) : def;
        resolved.emplace_back(key, out ? "true" : "false");
        return out;
    }

    std::string text(const std::string& key, const std::string& def) {
        const auto v = get(key);
        const std::string out = v ? *v : def;
        resolved.emplace_back(key, out);
        return out;
    }
};

inline Config resolve(RawConfig raw_in) {
    Resolver r{std::move(raw_in), {}};
    Config cfg;

    // --- spin
    const double omega_sys_hz = r.num("spin.omega_sys_hz", 2.87e9);
    const double rabi_hz = r.num("spin.rabi_hz", 0.2e6);
    SpinModel spin;
    spin.omega_sys = two_pi * omega_sys_hz;
    spin.rabi = two_pi * rabi_hz;
    spin.pump_rate = r.num("spin.pump_rate", 5e3);
    spin.t1_rate = r.num("spin.t1_rate", 200.0);
    // Detailed-balance thermal excitation at 300 K unless set explicitly.
    const double thermal_default =
        spin.t1_rate * std::exp(-PhysConstants::hbar * spin.omega_sys / (PhysConstants::k_B * 300.0));
    spin.thermal_rate = r.num("spin.thermal_rate", thermal_default);
    spin.dephasing_rate = r.num("spin.dephasing_rate", 5e6);
    spin.gamma_coh = r.num("spin.gamma_coh", consistent_gamma_coh(spin));
    spin.z_element = r.num("spin.z_element", 1.0);

    // --- cavity
    const double omega_cav_hz = r.num("cavity.omega_cav_hz", omega_sys_hz);
    const double q_factor = r.num("cavity.q_factor", 5000.0);
    const double split_fraction = r.num("cavity.split_fraction", 0.5);
    const bool has_g_ens = r.get("cavity.g_ens_hz").has_value();
    const bool has_g_single = r.get("cavity.g_single_hz").has_value();
    const bool has_n_nv = r.get("cavity.n_nv").has_value();
    if (has_g_single != has_n_nv)
        throw ConfigError("config: keys \"cavity.g_single_hz\" and \"cavity.n_nv\" must be set "
                          "together");
    if (has_g_ens && has_g_single)
        throw ConfigError("config: key \"cavity.g_ens_hz\" conflicts with the "
                          "g_single_hz/n_nv pair; set one or the other");
    double g_ens_hz;
    if (has_g_single) {
        const double g_single_hz = r.num("cavity.g_single_hz", 0.0);
        const double n_nv = r.num("cavity.n_nv", 0.0);
        g_ens_hz = collective_coupling(g_single_hz, n_nv);
        r.resolved.emplace_back("cavity.g_ens_hz", fmt_double(g_ens_hz));
    } else {
        g_ens_hz = r.num("cavity.g_ens_hz", 1e5);
    }
    CavityModel cavity = make_cavity(two_pi * omega_cav_hz, q_factor, split_fraction,
                                     two_pi * g_ens_hz);

    // --- two orthogonal modes; degenerate with the one-mode cavity unless
    // overridden (same frequency, full kappa = omega_cav/Q per mode, same g).
    const double mode_kappa_hz_default = omega_cav_hz / q_factor;
    TwoModeCavityModel cav2;
    cav2.omega1 = two_pi * r.num("two_mode.omega1_hz", omega_cav_hz);
    cav2.omega2 = two_pi * r.num("two_mode.omega2_hz", omega_cav_hz);
    cav2.kappa1 = two_pi * r.num("two_mode.kappa1_hz", mode_kappa_hz_default);
    cav2.kappa2 = two_pi * r.num("two_mode.kappa2_hz", mode_kappa_hz_default);
    cav2.g1 = two_pi * r.num("two_mode.g1_hz", g_ens_hz);
    cav2.g2 = two_pi * r.num("two_mode.g2_hz", g_ens_hz);

    // --- drive, demod
    DriveModel drive;
    drive.omega_ex = two_pi * r.num("drive.omega_ex_hz", omega_sys_hz);
    drive.power_in = r.num("drive.power_in_w", 0.04);
    drive.tau = r.num("drive.tau_s", 1.0);
    DemodModel demod;
    demod.nf_db = r.num("demod.nf_db", 13.5);

    // --- sweep
    cfg.sweep.delta_cav_min_hz = r.num("sweep.delta_cav_min_hz", -5e6);
    cfg.sweep.delta_cav_max_hz = r.num("sweep.delta_cav_max_hz", 5e6);
    cfg.sweep.delta_cav_points = r.integer("sweep.delta_cav_points", 101);
    cfg.sweep.delta_ex_min_hz = r.num("sweep.delta_ex_min_hz", -5e6);
    cfg.sweep.delta_ex_max_hz = r.num("sweep.delta_ex_max_hz", 5e6);
    cfg.sweep.delta_ex_points = r.integer("sweep.delta_ex_points", 101);

    // --- numerics
    const double fd_step_default_hz = spin.gamma_coh / 100.0 / two_pi;
    const double fd_step_hz = r.num("numerics.fd_step_hz", fd_step_default_hz);
    const std::string chi_mode = r.text("numerics.chi_mode", "rwa");
    cfg.regime_threshold = r.num("numerics.regime_threshold", 0.01);
    const double steady_tol = r.num("numerics.steady_tol", 1e-10);
    const int workers = r.integer("numerics.workers", 1);

    // --- output
    const std::string format = r.text("output.format", "csv");
    cfg.out_dir = r.text("output.out_dir", ".");
    const std::string channel = r.text("output.channel", "t");
    cfg.render = r.boolean("output.render", false);

    cfg.pipeline.spin = spin;
    cfg.pipeline.cavity = cavity;
    cfg.pipeline.cav2 = cav2;
    cfg.pipeline.drive = drive;
    cfg.pipeline.demod = demod;
    cfg.pipeline.fd_step = two_pi * fd_step_hz;
    cfg.pipeline.steady_tol = steady_tol;

    if (chi_mode == "rwa") cfg.pipeline.chi_mode = ChiMode::rwa_term_only;
    else if (chi_mode == "both") cfg.pipeline.chi_mode = ChiMode::both_terms;
    else throw ConfigError("config: key \"numerics.chi_mode\" must be rwa or both");

    if (channel == "t") cfg.pipeline.channel = Channel::one_mode_t;
    else if (channel == "r") cfg.pipeline.channel = Channel::one_mode_r;
    else if (channel == "s21") cfg.pipeline.channel = Channel::two_mode_s21;
    else throw ConfigError("config: key \"output.channel\" must be t, r or s21");

    if (format == "csv") cfg.format = OutputFormat::csv;
    else if (format == "json") cfg.format = OutputFormat::json;
    else throw ConfigError("config: key \"output.format\" must be csv or json");

    if (workers < 1) throw ConfigError("config: key \"numerics.workers\" must be >= 1");
    cfg.workers = static_cast<unsigned>(workers);

    if (!(cfg.regime_threshold > 0.0 && cfg.regime_threshold < 1.0))
        throw ConfigError("config: key \"numerics.regime_threshold\" must lie in (0, 1)");
    if (cfg.sweep.delta_cav_points < 1)
        throw ConfigError("config: key \"sweep.delta_cav_points\" must be >= 1");
    if (cfg.sweep.delta_ex_points < 1)
        throw ConfigError("config: key \"sweep.delta_ex_points\" must be >= 1");
    if (cfg.sweep.delta_cav_points > 1 && !(cfg.sweep.delta_cav_min_hz < cfg.sweep.delta_cav_max_hz))
        throw ConfigError("config: key \"sweep.delta_cav_min_hz\" must be below the max");
    if (cfg.sweep.delta_ex_points > 1 && !(cfg.sweep.delta_ex_min_hz < cfg.sweep.delta_ex_max_hz))
        throw ConfigError("config: key \"sweep.delta_ex_min_hz\" must be below the max");

    try {
        validate(cfg.pipeline);
    } catch (const InvalidInputError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    cfg.resolved = std::move(r.resolved);
    std::string blob;
    for (const auto& [k, v] : cfg.resolved) {
        blob += k;
        blob += '=';
        blob += v;
        blob += '\n';
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a64_str(blob)));
    cfg.fingerprint = buf;
    return cfg;
}

}  // namespace cfg_detail

inline Config default_config() { return cfg_detail::resolve({}); }

inline Config load_config_stream(std::istream& in) {
    return cfg_detail::resolve(cfg_detail::parse_ini(in));
}

inline Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open \"" + path + "\"");
    return load_config_stream(in);
}

// Command-line overrides merge into the raw key set before resolution, so
// the resolved listing and fingerprint always describe the effective run.
inline Config load_config_with_overrides(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
    cfg_detail::RawConfig raw;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw ConfigError("config: cannot open \"" + path + "\"");
        raw = cfg_detail::parse_ini(in);
    }
    for (const auto& [full_key, value] : overrides) {
        const std::size_t dot = full_key.find('.');
        const std::string section = full_key.substr(0, dot);
        const std::string key = dot == std::string::npos ? "" : full_key.substr(dot + 1);
        if (!cfg_detail::schema().count(section) || !cfg_detail::schema().at(section).count(key))
            throw ConfigError("config: unknown override key \"" + full_key + "\"");
        raw[full_key] = value;
    }
    return cfg_detail::resolve(std::move(raw));
}

// Evenly spaced grid, endpoints included; a single point sits at lo.
inline std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw InvalidInputError("linspace: need at least one point");
    std::vector<double> v(static_cast<std::size_t>(n));
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + step * i;
    return v;
}

// Sweep axes in internal units (rad/s).
inline std::vector<double> delta_cav_axis(const Config& c) {
    auto v = linspace(c.sweep.delta_cav_min_hz, c.sweep.delta_cav_max_hz, c.sweep.delta_cav_points);
    for (auto& x : v) x *= two_pi;
    return v;
}

inline std::vector<double> delta_ex_axis(const Config& c) {
    auto v = linspace(c.sweep.delta_ex_min_hz, c.sweep.delta_ex_max_hz, c.sweep.delta_ex_points);
    for (auto& x : v) x *= two_pi;
    return v;
}

}  // namespace nvsense
