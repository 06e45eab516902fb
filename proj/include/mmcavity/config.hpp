#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mmcavity/geometry.hpp"
#include "mmcavity/spectrum.hpp"

namespace mmcavity {

struct GeometryConfig {
    int n_membranes = 2;
    double reflectivity = 0.5;
    double half_length = 1.0;
    double light_speed = 1.0;

    CavityGeometry to_geometry() const;
};

struct RangeSpec {
    double lo = 1.9;
    double hi = 2.1;
    int points = 401;
};

struct CommandConfig {
    std::string name = "spectrum";  ///< spectrum | couplings | modes | validate
    std::string sweep = "q";        ///< q | Q
    RangeSpec range{};
    Window k_window{1.4, 2.3};
    double q0 = 2.0;
    double Q0 = 0.0;
    double step = 1e-4;
    int multiplet_n = 1;
    std::vector<int> branches = {1, 2, 3};
    int mode_index = -1;            ///< -1 = all modes
    double amplitude = 0.05;
    int oversample = 200;
    int workers = 1;
};

struct OutputConfig {
    std::string path;               ///< empty = stdout
    std::string format = "csv";     ///< csv | json
    int precision = 12;             ///< significant digits
};

/// Full run configuration.  Parsing is strict: unknown keys anywhere are a
/// ConfigError, and every numeric field is validated against the module
/// preconditions before any computation starts.
struct RunConfig {
    GeometryConfig geometry{};
    std::optional<MechanicalParams> mechanics;
    CommandConfig command{};
    OutputConfig output{};

    void validate() const;
};

/// The shipped default: the two-membrane spectrum sweep at R = 0.5, L = 1
/// (q in [1.9, 2.1], 401 points, Q = 0, k-window [1.4, 2.3]).
RunConfig default_config(const std::string& command_name = "spectrum");

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

}  // namespace mmcavity
