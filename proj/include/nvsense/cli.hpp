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

// Subcommand dispatch. Exit codes: 0 success, 1 computational failure,
// 2 usage or configuration error.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "nvsense/config.hpp"
#include "nvsense/io.hpp"
#include "nvsense/response.hpp"
#include "nvsense/sensitivity.hpp"

namespace nvsense {

namespace cli_detail {

inline std::string ext(const Config& cfg) {
    return cfg.format == OutputFormat::csv ? ".csv" : ".json";
}

inline std::string out_path(const Config& cfg, const std::string& stem, const std::string& e) {
    return (std::filesystem::path(cfg.out_dir) / (stem + e)).string();
}

inline void announce(const std::string& path) { std::cout << "wrote " << path << "\n"; }

inline int cmd_populations(const Config& cfg) {
    const auto detunings = delta_ex_axis(cfg);
    const auto curve = population_curve(cfg.pipeline.spin, detunings, cfg.pipeline.steady_tol);
    const std::string path = out_path(cfg, "populations", ext(cfg));
    if (cfg.format == OutputFormat::csv)
        write_populations_csv(path, curve, cfg);
    else
        write_populations_json(path, curve, cfg);
    announce(path);
    return 0;
}

inline int cmd_spectrum(const Config& cfg) {
    const auto detunings = delta_ex_axis(cfg);
    const double omega_sys = cfg.pipeline.spin.omega_sys;
    const double delta_cav = cfg.pipeline.cavity.omega_cav - omega_sys;
    std::vector<SpectrumRow> rows;
    rows.reserve(detunings.size());
    for (double dex : detunings) {
        const PhasePoint p = response_phase(cfg.pipeline, delta_cav, dex, omega_sys);
        rows.push_back({dex, std::sqrt(p.power_transmittance), p.power_transmittance, p.phase});
    }
    const std::string path = out_path(cfg, "spectrum", ext(cfg));
    if (cfg.format == OutputFormat::csv)
        write_spectrum_csv(path, rows, cfg, cfg.pipeline.channel);
    else
        write_spectrum_json(path, rows, cfg, cfg.pipeline.channel);
    announce(path);
    return 0;
}

inline void emit_map(const Config& cfg, const SensitivityMap& map, const std::string& stem) {
    const std::string path = out_path(cfg, stem, ext(cfg));
    if (cfg.format == OutputFormat::csv)
        write_map_csv(path, map, cfg);
    else
        write_map_json(path, map, cfg);
    announce(path);
    if (cfg.render) {
        const std::string ppm = out_path(cfg, stem, ".ppm");
        render_map_ppm(ppm, map);
        announce(ppm);
    }
}

inline int cmd_heatmap(const Config& cfg) {
    const auto map =
        sensitivity_map(cfg.pipeline, delta_cav_axis(cfg), delta_ex_axis(cfg), cfg.workers);
    emit_map(cfg, map, std::string("heatmap_") + channel_name(cfg.pipeline.channel));
    return 0;
}

inline int cmd_compare(const Config& cfg) {
    PipelineConfig one = cfg.pipeline;
    if (one.channel == Channel::two_mode_s21) one.channel = Channel::one_mode_t;
    PipelineConfig two = cfg.pipeline;
    two.channel = Channel::two_mode_s21;

    const auto cav_axis = delta_cav_axis(cfg);
    const auto ex_axis = delta_ex_axis(cfg);
    const auto map1 = sensitivity_map(one, cav_axis, ex_axis, cfg.workers);
    const auto map2 = sensitivity_map(two, cav_axis, ex_axis, cfg.workers);
    const auto ratio = ratio_map(map1, map2);
    const auto slice = resonant_slice(ratio, 0.0);

    emit_map(cfg, map1, "map_one_mode");
    emit_map(cfg, map2, "map_two_mode");

    const std::string ratio_path = out_path(cfg, "ratio_map", ext(cfg));
    if (cfg.format == OutputFormat::csv)
        write_ratio_csv(ratio_path, ratio, cfg);
    else
        write_ratio_json(ratio_path, ratio, cfg);
    announce(ratio_path);
    if (cfg.render) {
        const std::string ppm = out_path(cfg, "ratio_map", ".ppm");
        render_ratio_ppm(ppm, ratio);
        announce(ppm);
    }

    const std::string slice_path = out_path(cfg, "resonant_slice", ext(cfg));
    if (cfg.format == OutputFormat::csv)
        write_slice_csv(slice_path, slice, cfg);
    else
        write_slice_json(slice_path, slice, cfg);
    announce(slice_path);
    return 0;
}

inline int cmd_validate(const Config& cfg) {
    const SpinModel& spin = cfg.pipeline.spin;
    const double omega_ex = cfg.pipeline.drive.omega_ex;
    const double delta_ex = omega_ex - spin.omega_sys;
    const auto rho = steady_state(
        liouvillian(rwa_hamiltonian(delta_ex, spin.rabi), dissipator_channels(spin)),
        cfg.pipeline.steady_tol);
    const auto chi =
        susceptibility(spin, level_populations(rho, spin), omega_ex, cfg.pipeline.chi_mode);
    const auto rep =
        validate_regime(cfg.pipeline.cavity, chi.value, omega_ex, cfg.regime_threshold);

    std::cout << "dispersive regime check (all ratios must stay below "
              << io_detail::g17(rep.threshold) << ")\n"
              << "  kappa / omega_cav            = " << io_detail::g17(rep.ratios[0]) << "\n"
              << "  |omega - omega_cav| / omega_cav = " << io_detail::g17(rep.ratios[1]) << "\n"
              << "  |g^2 Re chi| / omega_cav     = " << io_detail::g17(rep.ratios[2]) << "\n"
              << "  pass = " << (rep.pass ? "true" : "false") << "\n";

    const std::string path = out_path(cfg, "regime", ext(cfg));
    if (cfg.format == OutputFormat::csv)
        write_regime_csv(path, rep, cfg);
    else
        write_regime_json(path, rep, cfg);
    announce(path);
    return 0;
}

}  // namespace cli_detail

inline int run(int argc, const char* const* argv) {
    CLI::App app{"nvsense: dispersive-readout sensitivity simulator for NV-ensemble "
                 "cavity magnetometry"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir, format, channel;
    int grid = 0, workers = 0;
    bool render = false;
    app.add_option("--config", config_path, "configuration file (sectioned key = value)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--format", format, "output format: csv or json");
    app.add_option("--channel", channel, "readout channel: t, r or s21");
    app.add_option("--grid", grid, "override both sweep axes to N points");
    app.add_option("--workers", workers, "worker threads for map evaluation");
    app.add_flag("--render", render, "also write PPM heat-map images");

    auto* sub_pop = app.add_subcommand("populations", "steady-state populations vs detuning");
    auto* sub_spec = app.add_subcommand("spectrum", "channel amplitude and phase vs detuning");
    auto* sub_heat = app.add_subcommand("heatmap", "shot-noise sensitivity map");
    auto* sub_cmp =
        app.add_subcommand("compare", "one-mode and two-mode maps, their ratio, resonant slice");
    auto* sub_val = app.add_subcommand("validate", "dispersive-regime inequality report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        std::vector<std::pair<std::string, std::string>> overrides;
        if (!out_dir.empty()) overrides.emplace_back("output.out_dir", out_dir);
        if (!format.empty()) overrides.emplace_back("output.format", format);
        if (!channel.empty()) overrides.emplace_back("output.channel", channel);
        if (grid > 0) {
            overrides.emplace_back("sweep.delta_cav_points", std::to_string(grid));
            overrides.emplace_back("sweep.delta_ex_points", std::to_string(grid));
        }
        if (workers > 0) overrides.emplace_back("numerics.workers", std::to_string(workers));
        if (render) overrides.emplace_back("output.render", "true");

        const Config cfg = load_config_with_overrides(config_path, overrides);
        std::filesystem::create_directories(cfg.out_dir);

        if (sub_pop->parsed()) return cli_detail::cmd_populations(cfg);
        if (sub_spec->parsed()) return cli_detail::cmd_spectrum(cfg);
        if (sub_heat->parsed()) return cli_detail::cmd_heatmap(cfg);
        if (sub_cmp->parsed()) return cli_detail::cmd_compare(cfg);
        if (sub_val->parsed()) return cli_detail::cmd_validate(cfg);
        std::cerr << "no subcommand given\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const InvalidInputError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}

}  // namespace nvsense
