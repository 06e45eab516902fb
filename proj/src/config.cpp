#include "mmcavity/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mmcavity {

using ordered_json = nlohmann::ordered_json;

namespace {

void reject_unknown(const ordered_json& j, const std::set<std::string>& known,
                    const std::string& where) {
    for (const auto& [key, _] : j.items())
        if (!known.contains(key))
            throw ConfigError("unknown key \"" + key + "\" in " + where);
}

template <typename T>
void read(const ordered_json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad value for \"") + key + "\": " + e.what());
    }
}

}  // namespace

CavityGeometry GeometryConfig::to_geometry() const {
    return CavityGeometry::make(n_membranes, reflectivity, half_length, light_speed);
}

void RunConfig::validate() const {
    geometry.to_geometry();  // throws on bad geometry
    if (mechanics) mechanics->validate();

    static const std::set<std::string> commands{"spectrum", "couplings", "modes",
                                                "validate"};
    if (!commands.contains(command.name))
        throw ConfigError("unknown command \"" + command.name + "\"");
    if (command.sweep != "q" && command.sweep != "Q")
        throw ConfigError("sweep coordinate must be \"q\" or \"Q\"");
    if (command.range.points < 2)
        throw ConfigError("sweep range needs at least 2 points");
    if (!(command.range.lo < command.range.hi))
        throw ConfigError("sweep range must be increasing");
    if (!(command.k_window.k_min > 0.0) || !(command.k_window.k_max > command.k_window.k_min))
        throw ConfigError("k-window must be positive and increasing");
    if (!(command.step > 0.0)) throw ConfigError("step must be positive");
    if (command.multiplet_n < 1) throw ConfigError("multiplet_n must be >= 1");
    if (command.branches.empty()) throw ConfigError("branches must be non-empty");
    for (int i : command.branches)
        if (i < 1 || i > geometry.n_membranes + 1)
            throw ConfigError("branch index " + std::to_string(i) +
                              " outside 1..N+1");
    if (command.mode_index < -1 || command.mode_index >= geometry.n_membranes)
        throw ConfigError("mode_index outside -1..N-1");
    if (!(command.amplitude > 0.0)) throw ConfigError("amplitude must be positive");
    if (command.oversample < 1) throw ConfigError("oversample must be >= 1");
    if (command.workers < 1) throw ConfigError("workers must be >= 1");

    if (output.format != "csv" && output.format != "json")
        throw ConfigError("format must be \"csv\" or \"json\"");
    if (output.precision < 1 || output.precision > 17)
        throw ConfigError("precision must lie in 1..17");
}

RunConfig default_config(const std::string& command_name) {
    RunConfig cfg;
    cfg.command.name = command_name;
    if (command_name == "spectrum")
        cfg.output.path = "spectrum.csv";
    else {
        cfg.output.format = "json";
        cfg.output.path = command_name + ".json";
    }
    return cfg;
}

RunConfig parse_config(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    reject_unknown(j, {"geometry", "mechanics", "command", "output"}, "config");

    RunConfig cfg;
    if (j.contains("geometry")) {
        const auto& g = j.at("geometry");
        reject_unknown(g, {"n_membranes", "reflectivity", "half_length", "light_speed"},
                       "geometry");
        read(g, "n_membranes", cfg.geometry.n_membranes);
        read(g, "reflectivity", cfg.geometry.reflectivity);
        read(g, "half_length", cfg.geometry.half_length);
        read(g, "light_speed", cfg.geometry.light_speed);
    }
    if (j.contains("mechanics")) {
        const auto& m = j.at("mechanics");
        reject_unknown(m, {"mass", "mech_frequency", "hbar"}, "mechanics");
        MechanicalParams mech;
        read(m, "mass", mech.mass);
        read(m, "mech_frequency", mech.mech_frequency);
        read(m, "hbar", mech.hbar);
        cfg.mechanics = mech;
    }
    if (j.contains("command")) {
        const auto& c = j.at("command");
        reject_unknown(c,
                       {"name", "sweep", "range", "k_window", "q0", "Q0", "step",
                        "multiplet_n", "branches", "mode_index", "amplitude",
                        "oversample", "workers"},
                       "command");
        read(c, "name", cfg.command.name);
        read(c, "sweep", cfg.command.sweep);
        if (c.contains("range")) {
            const auto& r = c.at("range");
            reject_unknown(r, {"lo", "hi", "points"}, "command.range");
            read(r, "lo", cfg.command.range.lo);
            read(r, "hi", cfg.command.range.hi);
            read(r, "points", cfg.command.range.points);
        }
        if (c.contains("k_window")) {
            const auto& w = c.at("k_window");
            reject_unknown(w, {"lo", "hi"}, "command.k_window");
            read(w, "lo", cfg.command.k_window.k_min);
            read(w, "hi", cfg.command.k_window.k_max);
        }
        read(c, "q0", cfg.command.q0);
        read(c, "Q0", cfg.command.Q0);
        read(c, "step", cfg.command.step);
        read(c, "multiplet_n", cfg.command.multiplet_n);
        read(c, "branches", cfg.command.branches);
        read(c, "mode_index", cfg.command.mode_index);
        read(c, "amplitude", cfg.command.amplitude);
        read(c, "oversample", cfg.command.oversample);
        read(c, "workers", cfg.command.workers);
    }
    if (j.contains("output")) {
        const auto& o = j.at("output");
        reject_unknown(o, {"path", "format", "precision"}, "output");
        read(o, "path", cfg.output.path);
        read(o, "format", cfg.output.format);
        read(o, "precision", cfg.output.precision);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    ordered_json j;
    j["geometry"] = {{"n_membranes", cfg.geometry.n_membranes},
                     {"reflectivity", cfg.geometry.reflectivity},
                     {"half_length", cfg.geometry.half_length},
                     {"light_speed", cfg.geometry.light_speed}};
    if (cfg.mechanics)
        j["mechanics"] = {{"mass", cfg.mechanics->mass},
                          {"mech_frequency", cfg.mechanics->mech_frequency},
                          {"hbar", cfg.mechanics->hbar}};
    j["command"] = {{"name", cfg.command.name},
                    {"sweep", cfg.command.sweep},
                    {"range",
                     {{"lo", cfg.command.range.lo},
                      {"hi", cfg.command.range.hi},
                      {"points", cfg.command.range.points}}},
                    {"k_window",
                     {{"lo", cfg.command.k_window.k_min},
                      {"hi", cfg.command.k_window.k_max}}},
                    {"q0", cfg.command.q0},
                    {"Q0", cfg.command.Q0},
                    {"step", cfg.command.step},
                    {"multiplet_n", cfg.command.multiplet_n},
                    {"branches", cfg.command.branches},
                    {"mode_index", cfg.command.mode_index},
                    {"amplitude", cfg.command.amplitude},
                    {"oversample", cfg.command.oversample},
                    {"workers", cfg.command.workers}};
    j["output"] = {{"path", cfg.output.path},
                   {"format", cfg.output.format},
                   {"precision", cfg.output.precision}};
    return j.dump(2) + "\n";
}

}  // namespace mmcavity
