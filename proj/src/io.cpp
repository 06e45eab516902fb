#include "mmcavity/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <ostream>

#include <json.hpp>

#include "mmcavity/version.hpp"

namespace mmcavity {

using ordered_json = nlohmann::ordered_json;

double round_sig(double v, int digits) {
    if (v == 0.0 || !std::isfinite(v)) return v;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return std::strtod(buf, nullptr);
}

std::string format_double(double v, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

namespace {

std::string units_mode(const GeometryConfig& g) {
    return (g.half_length == 1.0 && g.light_speed == 1.0) ? "dimensionless" : "physical";
}

ordered_json geometry_block(const GeometryConfig& g, int precision) {
    return {{"n_membranes", g.n_membranes},
            {"reflectivity", round_sig(g.reflectivity, precision)},
            {"half_length", round_sig(g.half_length, precision)},
            {"light_speed", round_sig(g.light_speed, precision)}};
}

ordered_json header_block(const RunConfig& cfg) {
    return {{"tool", "mmcavity"},
            {"version", std::string(kVersion)},
            {"geometry", geometry_block(cfg.geometry, cfg.output.precision)},
            {"units_mode", units_mode(cfg.geometry)}};
}

}  // namespace

void write_spectrum_csv(const SpectrumSurface& surface, const RunConfig& cfg,
                        std::ostream& os) {
    const int prec = cfg.output.precision;
    const auto& g = cfg.geometry;
    os << "# mmcavity spectrum v" << kVersion << "\n";
    os << "# geometry: N=" << g.n_membranes << " R=" << format_double(g.reflectivity, prec)
       << " L=" << format_double(g.half_length, prec)
       << " c=" << format_double(g.light_speed, prec) << "\n";
    os << "# units: " << units_mode(g) << " (omega = c k)\n";
    os << "# k-window: [" << format_double(surface.window.k_min, prec) << ", "
       << format_double(surface.window.k_max, prec) << "]\n";
    const std::string primary_name = to_string(surface.primary.coordinate);
    if (surface.secondary) {
        const std::string secondary_name = to_string(surface.secondary->coordinate);
        os << "# sweep: " << secondary_name << " (outer), " << primary_name
           << " (inner)\n";
        os << secondary_name << "," << primary_name;
    } else {
        os << "# fixed: " << (surface.primary.coordinate == SweepCoordinate::Relative
                                  ? "Q"
                                  : "q")
           << " = " << format_double(surface.rows.front().secondary_value, prec) << "\n";
        os << primary_name;
    }
    os << ",multiplet_n,branch_i,omega,continuity_flag\n";

    for (const auto& row : surface.rows) {
        for (const auto& branch : row.branches) {
            for (std::size_t t = 0; t < surface.primary.values.size(); ++t) {
                if (surface.secondary)
                    os << format_double(row.secondary_value, prec) << ",";
                os << format_double(surface.primary.values[t], prec) << ","
                   << branch.label.multiplet_n << "," << branch.label.branch_i << ","
                   << format_double(branch.omega[t], prec) << ","
                   << static_cast<int>(branch.flags[t]) << "\n";
            }
        }
    }
}

std::string couplings_json(const std::vector<CouplingCoefficients>& numeric,
                           const RunConfig& cfg) {
    const int prec = cfg.output.precision;
    const CavityGeometry geom = cfg.geometry.to_geometry();

    ordered_json j = header_block(cfg);
    j["units"] = {{"delta", "c/L"},
                  {"b_rel", "c/L^2"},
                  {"b_com", "c/L^2"},
                  {"m_rel", "c/L^3"},
                  {"m_com", "c/L^3"},
                  {"p_cross", "c/L^3"}};
    j["operating_point"] = {{"q0", round_sig(cfg.command.q0, prec)},
                            {"Q0", round_sig(cfg.command.Q0, prec)}};
    j["coefficients"] = ordered_json::array();

    const bool at_reference_point =
        cfg.command.q0 == 2.0 * geom.half_subcavity_length && cfg.command.Q0 == 0.0;

    for (const auto& c : numeric) {
        ordered_json e = {{"multiplet_n", c.label.multiplet_n},
                          {"branch_i", c.label.branch_i},
                          {"delta", round_sig(c.delta, prec)},
                          {"b_rel", round_sig(c.b_rel, prec)},
                          {"b_com", round_sig(c.b_com, prec)},
                          {"m_rel", round_sig(c.m_rel, prec)},
                          {"m_com", round_sig(c.m_com, prec)},
                          {"p_cross", round_sig(c.p_cross, prec)},
                          {"theta_ni", round_sig(c.theta_ni, prec)},
                          {"xi_ni", round_sig(c.xi_ni, prec)},
                          {"round_trip_time", round_sig(c.round_trip_time, prec)}};
        if (at_reference_point && c.label.branch_i >= 1 && c.label.branch_i <= 3) {
            ordered_json closed = {
                {"delta", round_sig(delta_closed_form(c.label.multiplet_n,
                                                      c.label.branch_i, geom), prec)},
                {"b_rel", round_sig(b_closed_form(c.label.multiplet_n,
                                                  c.label.branch_i, geom), prec)}};
            if (c.label.branch_i == 1)
                closed["m_rel"] = round_sig(m1_closed_form(c.label.multiplet_n, geom), prec);
            e["closed_form"] = closed;
            ordered_json dev = {
                {"delta", round_sig(std::fabs(c.delta - closed["delta"].get<double>()), prec)},
                {"b_rel", round_sig(std::fabs(c.b_rel - closed["b_rel"].get<double>()), prec)}};
            if (c.label.branch_i == 1)
                dev["m_rel"] =
                    round_sig(std::fabs(c.m_rel - closed["m_rel"].get<double>()), prec);
            e["deviation"] = dev;
        }
        if (cfg.mechanics) {
            const auto rel = single_photon_scales(c, *cfg.mechanics, CollectiveMode::Relative);
            const auto com = single_photon_scales(c, *cfg.mechanics, CollectiveMode::Com);
            e["single_photon"] = {
                {"relative",
                 {{"x_zpf", round_sig(rel.x_zpf, prec)},
                  {"linear", round_sig(rel.linear, prec)},
                  {"quadratic", round_sig(rel.quadratic, prec)}}},
                {"com",
                 {{"x_zpf", round_sig(com.x_zpf, prec)},
                  {"linear", round_sig(com.linear, prec)},
                  {"quadratic", round_sig(com.quadratic, prec)}}}};
        }
        j["coefficients"].push_back(e);
    }
    return j.dump(2) + "\n";
}

std::string modes_json(const NormalModeBasis& basis_, const std::vector<double>& residuals,
                       const RunConfig& cfg) {
    const int prec = cfg.output.precision;
    ordered_json j = header_block(cfg);
    const int N = basis_.n_membranes;

    ordered_json rows = ordered_json::array();
    for (const auto& row : basis_.to_collective) {
        ordered_json r = ordered_json::array();
        for (double v : row) r.push_back(round_sig(v, prec));
        rows.push_back(r);
    }
    j["n_membranes"] = N;
    j["basis"] = {{"mode_names", basis_.mode_names},
                  {"to_collective", rows},
                  {"symmetric", basis_.symmetric}};
    j["symmetric_count"] = symmetric_count(N);
    if (N >= 2) {
        const auto counts = coupling_term_counts(N);
        j["coupling_terms"] = {{"remaining", counts.remaining
                                                 ? ordered_json(*counts.remaining)
                                                 : ordered_json(nullptr)},
                               {"total", counts.total}};
    }
    j["amplitude"] = round_sig(cfg.command.amplitude, prec);
    ordered_json res = ordered_json::array();
    for (std::size_t m = 0; m < residuals.size(); ++m) {
        const bool expected = basis_.symmetric[m];
        res.push_back({{"mode_index", m},
                       {"name", basis_.mode_names[m]},
                       {"residual", round_sig(residuals[m], prec)},
                       {"symmetric", expected},
                       {"consistent", expected ? residuals[m] < 1e-10
                                               : residuals[m] > 1e-4}});
    }
    j["symmetry_residuals"] = res;
    return j.dump(2) + "\n";
}

std::string validation_json(const SuiteReport& report, const RunConfig& cfg) {
    ordered_json j = header_block(cfg);
    j["criteria"] = ordered_json::array();
    for (const auto& c : report.criteria) {
        ordered_json e = {{"index", c.index},   {"name", c.name},
                          {"pass", c.pass},     {"skipped", c.skipped},
                          {"detail", c.detail}, {"seconds", round_sig(c.seconds, 4)}};
        if (!c.checks.empty()) {
            ordered_json checks = ordered_json::array();
            for (const auto& ch : c.checks)
                checks.push_back({{"name", ch.name},
                                  {"numeric", ch.numeric},
                                  {"reference", ch.reference},
                                  {"abs_dev", ch.abs_dev},
                                  {"rel_dev", ch.rel_dev},
                                  {"tolerance", ch.tolerance},
                                  {"relative", ch.relative},
                                  {"pass", ch.pass},
                                  {"note", ch.note}});
            e["checks"] = checks;
        }
        j["criteria"].push_back(e);
    }
    j["all_pass"] = report.all_pass();
    j["total_seconds"] = round_sig(report.total_seconds, 4);
    return j.dump(2) + "\n";
}

}  // namespace mmcavity
