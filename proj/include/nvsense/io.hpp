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

// Output writers. CSV is the primary, human-inspectable format: a comment
// block with the code version, config fingerprint and the full resolved
// parameter set, then a long-format table. JSON carries the same content.
// Non-finite values print as inf/nan in CSV and serialize as null in JSON;
// the flag column disambiguates.

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nvsense/config.hpp"
#include "nvsense/errors.hpp"
#include "nvsense/lindblad.hpp"
#include "nvsense/model.hpp"
#include "nvsense/sensitivity.hpp"
#include "nvsense/version.hpp"

namespace nvsense {

namespace io_detail {

inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file \"" + path + "\"");
    return out;
}

inline void write_csv_header(std::ofstream& out, const Config& cfg,
                             const std::string& extra = {}) {
    out << "# nvsense " << version_string << "\n";
    out << "# fingerprint " << cfg.fingerprint << "\n";
    if (!extra.empty()) out << "# " << extra << "\n";
    for (const auto& [k, v] : cfg.resolved) out << "# " << k << " = " << v << "\n";
}

inline nlohmann::ordered_json json_header(const Config& cfg) {
    nlohmann::ordered_json j;
    j["version"] = version_string;
    j["fingerprint"] = cfg.fingerprint;
    nlohmann::ordered_json params;
    for (const auto& [k, v] : cfg.resolved) params[k] = v;
    j["config"] = params;
    return j;
}

inline std::vector<double> axis_hz(const std::vector<double>& axis_rad) {
    std::vector<double> v;
    v.reserve(axis_rad.size());
    for (double x : axis_rad) v.push_back(x / two_pi);
    return v;
}

}  // namespace io_detail

// ---------------------------------------------------------------- maps

inline void write_map_csv(const std::string& path, const SensitivityMap& map, const Config& cfg) {
    auto out = io_detail::open_out(path);
    io_detail::write_csv_header(out, cfg, std::string("channel ") + channel_name(map.channel));
    out << "delta_cav_hz,delta_ex_hz,eta_tesla,n_photons,slope_rad_per_rad_s,flag\n";
    for (std::size_t i = 0; i < map.n_cav(); ++i)
        for (std::size_t j = 0; j < map.n_ex(); ++j) {
            const auto& p = map.at(i, j);
            out << io_detail::g17(p.delta_cav / two_pi) << ',' << io_detail::g17(p.delta_ex / two_pi)
                << ',' << io_detail::g17(p.eta) << ',' << io_detail::g17(p.n_photons) << ','
                << io_detail::g17(p.slope) << ',' << point_flag_name(p.flag) << '\n';
        }
}

inline void write_map_json(const std::string& path, const SensitivityMap& map, const Config& cfg) {
    auto j = io_detail::json_header(cfg);
    j["channel"] = channel_name(map.channel);
    j["delta_cav_axis_hz"] = io_detail::axis_hz(map.delta_cav_axis);
    j["delta_ex_axis_hz"] = io_detail::axis_hz(map.delta_ex_axis);
    nlohmann::ordered_json eta, n_photons, slope, flags;
    for (std::size_t i = 0; i < map.n_cav(); ++i) {
        nlohmann::ordered_json re, rn, rs, rf;
        for (std::size_t jx = 0; jx < map.n_ex(); ++jx) {
            const auto& p = map.at(i, jx);
            re.push_back(p.eta);              // non-finite -> null
            rn.push_back(p.n_photons);
            rs.push_back(p.slope);
            rf.push_back(point_flag_name(p.flag));
        }
        eta.push_back(re);
        n_photons.push_back(rn);
        slope.push_back(rs);
        flags.push_back(rf);
    }
    j["eta_tesla"] = eta;
    j["n_photons"] = n_photons;
    j["slope_rad_per_rad_s"] = slope;
    j["flags"] = flags;
    auto out = io_detail::open_out(path);
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------- ratio

inline const char* ratio_flag_name(RatioFlag f) {
    return f == RatioFlag::ok ? "ok" : "undefined";
}

inline void write_ratio_csv(const std::string& path, const RatioMap& map, const Config& cfg) {
    auto out = io_detail::open_out(path);
    io_detail::write_csv_header(out, cfg, "sensitivity ratio eta1/eta2");
    out << "delta_cav_hz,delta_ex_hz,ratio,flag\n";
    const std::size_t n_ex = map.delta_ex_axis.size();
    for (std::size_t i = 0; i < map.delta_cav_axis.size(); ++i)
        for (std::size_t j = 0; j < n_ex; ++j) {
            out << io_detail::g17(map.delta_cav_axis[i] / two_pi) << ','
                << io_detail::g17(map.delta_ex_axis[j] / two_pi) << ','
                << io_detail::g17(map.values[i * n_ex + j]) << ','
                << ratio_flag_name(map.flags[i * n_ex + j]) << '\n';
        }
}

inline void write_ratio_json(const std::string& path, const RatioMap& map, const Config& cfg) {
    auto j = io_detail::json_header(cfg);
    j["delta_cav_axis_hz"] = io_detail::axis_hz(map.delta_cav_axis);
    j["delta_ex_axis_hz"] = io_detail::axis_hz(map.delta_ex_axis);
    nlohmann::ordered_json values, flags;
    const std::size_t n_ex = map.delta_ex_axis.size();
    for (std::size_t i = 0; i < map.delta_cav_axis.size(); ++i) {
        nlohmann::ordered_json rv, rf;
        for (std::size_t jx = 0; jx < n_ex; ++jx) {
            rv.push_back(map.values[i * n_ex + jx]);
            rf.push_back(ratio_flag_name(map.flags[i * n_ex + jx]));
        }
        values.push_back(rv);
        flags.push_back(rf);
    }
    j["ratio"] = values;
    j["flags"] = flags;
    auto out = io_detail::open_out(path);
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------- slice

inline void write_slice_csv(const std::string& path, const SliceCurve& slice, const Config& cfg) {
    auto out = io_detail::open_out(path);
    io_detail::write_csv_header(
        out, cfg, "slice at delta_ex_hz " + io_detail::g17(slice.delta_ex / two_pi));
    out << "delta_cav_hz,value\n";
    for (std::size_t i = 0; i < slice.delta_cav.size(); ++i)
        out << io_detail::g17(slice.delta_cav[i] / two_pi) << ',' << io_detail::g17(slice.value[i])
            << '\n';
}

inline void write_slice_json(const std::string& path, const SliceCurve& slice, const Config& cfg) {
    auto j = io_detail::json_header(cfg);
    j["delta_ex_hz"] = slice.delta_ex / two_pi;
    j["delta_cav_axis_hz"] = io_detail::axis_hz(slice.delta_cav);
    j["value"] = slice.value;
    auto out = io_detail::open_out(path);
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------- curves

inline void write_populations_csv(const std::string& path, const PopulationCurve& curve,
                                  const Config& cfg) {
    auto out = io_detail::open_out(path);
    io_detail::write_csv_header(out, cfg);
    out << "detuning_hz,p_g,p_e\n";
    for (std::size_t i = 0; i < curve.detunings.size(); ++i)
        out << io_detail::g17(curve.detunings[i] / two_pi) << ','
            << io_detail::g17(curve.populations[i].p_g()) << ','
            << io_detail::g17(curve.populations[i].p_e()) << '\n';
}

inline void write_populations_json(const std::string& path, const PopulationCurve& curve,
                                   const Config& cfg) {
    auto j = io_detail::json_header(cfg);
    j["detuning_hz"] = io_detail::axis_hz(curve.detunings);
    nlohmann::ordered_json pg, pe;
    for (const auto& p : curve.populations) {
        pg.push_back(p.p_g());
        pe.push_back(p.p_e());
    }
    j["p_g"] = pg;
    j["p_e"] = pe;
    auto out = io_detail::open_out(path);
    out << j.dump(2) << '\n';
}

struct SpectrumRow {
    double detuning = 0.0;   // rad/s
    double amplitude_abs = 0.0;
    double power_transmittance = 0.0;
    double phase = 0.0;
};

inline void write_spectrum_csv(const std::string& path, const std::vector<SpectrumRow>& rows,
                               const Config& cfg, Channel channel) {
    auto out = io_detail::open_out(path);
    io_detail::write_csv_header(out, cfg, std::string("channel ") + channel_name(channel));
    out << "detuning_hz,amplitude_abs,power_transmittance,phase_rad\n";
    for (const auto& row : rows)
        out << io_detail::g17(row.detuning / two_pi) << ',' << io_detail::g17(row.amplitude_abs)
            << ',' << io_detail::g17(row.power_transmittance) << ',' << io_detail::g17(row.phase)
            << '\n';
}

inline void write_spectrum_json(const std::string& path, const std::vector<SpectrumRow>& rows,
                                const Config& cfg, Channel channel) {
    auto j = io_detail::json_header(cfg);
    j["channel"] = channel_name(channel);
    nlohmann::ordered_json det, amp, pow, ph;
    for (const auto& row : rows) {
        det.push_back(row.detuning / two_pi);
        amp.push_back(row.amplitude_abs);
        pow.push_back(row.power_transmittance);
        ph.push_back(row.phase);
    }
    j["detuning_hz"] = det;
    j["amplitude_abs"] = amp;
    j["power_transmittance"] = pow;
    j["phase_rad"] = ph;
    auto out = io_detail::open_out(path);
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------- regime

inline void write_regime_csv(const std::string& path, const RegimeReport& rep, const Config& cfg) {
    auto out = io_detail::open_out(path);
    io_detail::write_csv_header(out, cfg);
    out << "ratio_kappa,ratio_detuning,ratio_dispersive_shift,threshold,pass\n";
    out << io_detail::g17(rep.ratios[0]) << ',' << io_detail::g17(rep.ratios[1]) << ','
        << io_detail::g17(rep.ratios[2]) << ',' << io_detail::g17(rep.threshold) << ','
        << (rep.pass ? "true" : "false") << '\n';
}

inline void write_regime_json(const std::string& path, const RegimeReport& rep,
                              const Config& cfg) {
    auto j = io_detail::json_header(cfg);
    j["ratio_kappa"] = rep.ratios[0];
    j["ratio_detuning"] = rep.ratios[1];
    j["ratio_dispersive_shift"] = rep.ratios[2];
    j["threshold"] = rep.threshold;
    j["pass"] = rep.pass;
    auto out = io_detail::open_out(path);
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------- render

namespace io_detail {

// Five-stop viridis-like ramp on a unit coordinate.
inline std::array<unsigned char, 3> ramp(double u) {
    static const double stops[5][3] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140},
                                       {94, 201, 98}, {253, 231, 37}};
    if (u <= 0.0) return {68, 1, 84};
    if (u >= 1.0) return {253, 231, 37};
    const double x = u * 4.0;
    const int k = static_cast<int>(x);
    const double f = x - k;
    std::array<unsigned char, 3> c{};
    for (int i = 0; i < 3; ++i)
        c[static_cast<std::size_t>(i)] =
            static_cast<unsigned char>(stops[k][i] + f * (stops[k + 1][i] - stops[k][i]) + 0.5);
    return c;
}

}  // namespace io_detail

// Optional heat-map rendering on a log10 color scale; one pixel per grid
// point, delta_ex along x, delta_cav along y (top row = lowest delta_cav).
// Non-finite values render gray. Data files remain the contract.
inline void render_grid_ppm(const std::string& path, const std::vector<double>& grid,
                            std::size_t n_rows, std::size_t n_cols) {
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (double v : grid)
        if (std::isfinite(v) && v > 0.0) {
            const double l = std::log10(v);
            lo = any ? std::min(lo, l) : l;
            hi = any ? std::max(hi, l) : l;
            any = true;
        }
    if (!any || hi == lo) hi = lo + 1.0;

    auto out = io_detail::open_out(path);
    out << "P6\n" << n_cols << ' ' << n_rows << "\n255\n";
    for (std::size_t i = 0; i < n_rows; ++i)
        for (std::size_t j = 0; j < n_cols; ++j) {
            const double v = grid[i * n_cols + j];
            std::array<unsigned char, 3> c{128, 128, 128};
            if (std::isfinite(v) && v > 0.0)
                c = io_detail::ramp((std::log10(v) - lo) / (hi - lo));
            out.write(reinterpret_cast<const char*>(c.data()), 3);
        }
}

inline void render_map_ppm(const std::string& path, const SensitivityMap& map) {
    std::vector<double> grid;
    grid.reserve(map.values.size());
    for (const auto& p : map.values) grid.push_back(p.eta);
    render_grid_ppm(path, grid, map.n_cav(), map.n_ex());
}

inline void render_ratio_ppm(const std::string& path, const RatioMap& map) {
    render_grid_ppm(path, map.values, map.delta_cav_axis.size(), map.delta_ex_axis.size());
}

}  // namespace nvsense
