#include "mmcavity/geometry.hpp"

#include <cmath>
#include <string>

namespace mmcavity {

CavityGeometry CavityGeometry::make(int n_membranes, double reflectivity,
                                    double half_length, double light_speed) {
    CavityGeometry g{n_membranes, reflectivity, half_length, light_speed};
    g.validate();
    return g;
}

void CavityGeometry::validate() const {
    if (membrane_count < 1)
        throw GeometryError("membrane_count must be >= 1, got " +
                            std::to_string(membrane_count));
    if (!(reflectivity >= 0.0 && reflectivity <= 1.0))
        throw DomainError("reflectivity must lie in [0, 1], got " +
                          std::to_string(reflectivity));
    if (!(half_subcavity_length > 0.0) || !std::isfinite(half_subcavity_length))
        throw DomainError("half_subcavity_length must be positive");
    if (!(light_speed > 0.0) || !std::isfinite(light_speed))
        throw DomainError("light_speed must be positive");
}

std::vector<double> CavityGeometry::rest_positions() const {
    std::vector<double> pos(membrane_count);
    for (int j = 1; j <= membrane_count; ++j)
        pos[j - 1] = (2 * j - membrane_count - 1) * half_subcavity_length;
    return pos;
}

void MechanicalParams::validate() const {
    if (!(mass > 0.0)) throw DomainError("mass must be positive");
    if (!(mech_frequency > 0.0)) throw DomainError("mech_frequency must be positive");
    if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
}

std::array<double, 2> CollectiveCoordinates::positions(const CavityGeometry& geom) const {
    if (geom.membrane_count != 2)
        throw GeometryError("CollectiveCoordinates describe a two-membrane cavity");
    std::array<double, 2> pos{com - relative / 2.0, com + relative / 2.0};
    check_positions(geom, pos);
    return pos;
}

void check_positions(const CavityGeometry& geom, std::span<const double> positions) {
    if (static_cast<int>(positions.size()) != geom.membrane_count)
        throw GeometryError("expected " + std::to_string(geom.membrane_count) +
                            " membrane positions, got " + std::to_string(positions.size()));
    const double mirror = geom.mirror_position();
    double prev = -mirror;
    for (double x : positions) {
        if (!std::isfinite(x))
            throw GeometryError("membrane position is not finite");
        if (!(x > prev))
            throw GeometryError("membrane positions must be strictly increasing and "
                                "strictly inside the mirrors");
        prev = x;
    }
    if (!(prev < mirror))
        throw GeometryError("membrane position reaches the right mirror");
}

}  // namespace mmcavity
