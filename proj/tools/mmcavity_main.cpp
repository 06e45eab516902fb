// mmcavity: optical mode spectra and optomechanical coupling coefficients of
// membrane-array cavities.
//
// Subcommands: spectrum | couplings | modes | validate.  Each reads an
// optional JSON config (--config) plus command-line overrides, and writes CSV
// or JSON.  Exit status: 0 success, 1 validation failure, 2 configuration
// error, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mmcavity/config.hpp"
#include "mmcavity/io.hpp"
#include "mmcavity/normal_modes.hpp"
#include "mmcavity/validation.hpp"
#include "mmcavity/version.hpp"

namespace {

using namespace mmcavity;

struct Overrides {
    std::optional<std::string> config_path;
    std::optional<double> reflectivity;
    std::optional<double> half_length;
    std::optional<int> n_membranes;
    std::optional<std::string> sweep;
    std::optional<std::string> range;     // lo:hi:npts
    std::optional<std::string> k_window;  // lo:hi
    std::optional<double> q0;
    std::optional<double> Q0;
    std::optional<double> step;
    std::optional<int> mode_index;
    std::optional<double> amplitude;
    std::optional<std::string> out;
    std::optional<std::string> format;
};

std::vector<double> split_numbers(const std::string& text, std::size_t expected,
                                  const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            out.push_back(std::stod(item));
        } catch (...) {
            throw ConfigError("cannot parse " + what + " \"" + text + "\"");
        }
    }
    if (out.size() != expected)
        throw ConfigError(what + " expects " + std::to_string(expected) +
                          " colon-separated values, got \"" + text + "\"");
    return out;
}

RunConfig build_config(const std::string& command, const Overrides& ov) {
    RunConfig cfg = ov.config_path ? load_config(*ov.config_path) : default_config(command);
    cfg.command.name = command;

    if (ov.reflectivity) cfg.geometry.reflectivity = *ov.reflectivity;
    if (ov.half_length) cfg.geometry.half_length = *ov.half_length;
    if (ov.n_membranes) cfg.geometry.n_membranes = *ov.n_membranes;
    if (ov.sweep) cfg.command.sweep = *ov.sweep;
    if (ov.range) {
        const auto v = split_numbers(*ov.range, 3, "--range");
        cfg.command.range = RangeSpec{v[0], v[1], static_cast<int>(v[2])};
    }
    if (ov.k_window) {
        const auto v = split_numbers(*ov.k_window, 2, "--k-window");
        cfg.command.k_window = Window{v[0], v[1]};
    }
    if (ov.q0) cfg.command.q0 = *ov.q0;
    if (ov.Q0) cfg.command.Q0 = *ov.Q0;
    if (ov.step) cfg.command.step = *ov.step;
    if (ov.mode_index) cfg.command.mode_index = *ov.mode_index;
    if (ov.amplitude) cfg.command.amplitude = *ov.amplitude;
    if (ov.out) cfg.output.path = *ov.out;
    if (ov.format) cfg.output.format = *ov.format;

    cfg.validate();
    return cfg;
}

void write_output(const std::string& path, const std::string& payload) {
    if (path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << payload;
}

int cmd_spectrum(const RunConfig& cfg) {
    const CavityGeometry geom = cfg.geometry.to_geometry();
    AxisSpec axis;
    axis.coordinate = cfg.command.sweep == "q" ? SweepCoordinate::Relative
                                               : SweepCoordinate::Com;
    for (int t = 0; t < cfg.command.range.points; ++t)
        axis.values.push_back(cfg.command.range.lo +
                              (cfg.command.range.hi - cfg.command.range.lo) * t /
                                  (cfg.command.range.points - 1));

    SweepOptions opts;
    opts.scan.oversample = cfg.command.oversample;
    opts.workers = cfg.command.workers;
    const CollectiveCoordinates base{cfg.command.q0, cfg.command.Q0};
    const SpectrumSurface surf =
        sweep_surface(geom, axis, std::nullopt, base, cfg.command.k_window, opts);

    std::ostringstream os;
    write_spectrum_csv(surf, cfg, os);
    write_output(cfg.output.path, os.str());

    if (surf.any_flagged) {
        std::cerr << "mmcavity: branch tracking flagged samples; see continuity_flag "
                     "column\n";
        return 3;
    }
    return 0;
}

int cmd_couplings(const RunConfig& cfg) {
    const CavityGeometry geom = cfg.geometry.to_geometry();
    std::vector<CouplingCoefficients> coeffs;
    ExtractOptions opts;
    opts.step = cfg.command.step;
    for (int i : cfg.command.branches)
        coeffs.push_back(extract_couplings_numeric(geom, cfg.command.multiplet_n, i,
                                                   cfg.command.q0, cfg.command.Q0, opts));
    write_output(cfg.output.path, couplings_json(coeffs, cfg));
    return 0;
}

int cmd_modes(const RunConfig& cfg) {
    const CavityGeometry geom = cfg.geometry.to_geometry();
    const NormalModeBasis b = basis(geom.membrane_count);
    const Window w = multiplet_window(geom, cfg.command.multiplet_n);

    std::vector<double> residuals(geom.membrane_count, 0.0);
    for (int m = 0; m < geom.membrane_count; ++m) {
        if (cfg.command.mode_index >= 0 && m != cfg.command.mode_index) continue;
        residuals[m] = check_spectrum_symmetry(geom, b, m,
                                               cfg.command.amplitude *
                                                   geom.half_subcavity_length,
                                               w);
    }
    write_output(cfg.output.path, modes_json(b, residuals, cfg));
    return 0;
}

int cmd_validate(const RunConfig& cfg) {
    const CavityGeometry geom = cfg.geometry.to_geometry();
    const SuiteReport report = run_validation_suite(geom);
    write_output(cfg.output.path, validation_json(report, cfg));
    print_summary(report, std::cout);
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"membrane-array cavity spectra and optomechanical couplings"};
    app.set_version_flag("--version", std::string(mmcavity::kVersion));
    app.require_subcommand(1);

    Overrides ov;
    std::string command;
    for (const char* name : {"spectrum", "couplings", "modes", "validate"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", ov.config_path, "JSON config file");
        sub->add_option("--reflectivity", ov.reflectivity, "membrane reflectivity R");
        sub->add_option("--half-length", ov.half_length, "half sub-cavity length L");
        sub->add_option("--n-membranes", ov.n_membranes, "membrane count N");
        sub->add_option("--sweep", ov.sweep, "sweep coordinate: q or Q");
        sub->add_option("--range", ov.range, "sweep grid lo:hi:npts");
        sub->add_option("--k-window", ov.k_window, "wavenumber window lo:hi");
        sub->add_option("--q0", ov.q0, "operating point, relative coordinate");
        sub->add_option("--Q0", ov.Q0, "operating point, center of mass");
        sub->add_option("--step", ov.step, "finite-difference step (units of L)");
        sub->add_option("--mode-index", ov.mode_index, "collective mode index");
        sub->add_option("--amplitude", ov.amplitude, "mode displacement (units of L)");
        sub->add_option("--out", ov.out, "output path (default per command)");
        sub->add_option("--format", ov.format, "output format: csv or json");
        sub->callback([&command, name] { command = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = build_config(command, ov);
        if (command == "spectrum") return cmd_spectrum(cfg);
        if (command == "couplings") return cmd_couplings(cfg);
        if (command == "modes") return cmd_modes(cfg);
        return cmd_validate(cfg);
    } catch (const mmcavity::ConfigError& e) {
        std::cerr << "mmcavity: configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "mmcavity: configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "mmcavity: numerical failure: " << e.what() << "\n";
        return 3;
    }
}
