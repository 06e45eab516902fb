#pragma once

#include <array>
#include <span>
#include <vector>

#include "mmcavity/errors.hpp"

namespace mmcavity {

/// A linear cavity with perfectly reflecting end mirrors at +/-(N+1)L and N
/// identical partially reflective membranes inside.  At rest the membranes sit
/// at (2j - N - 1) L for j = 1..N, splitting the resonator into N+1
/// sub-cavities of length 2L each.
struct CavityGeometry {
    int membrane_count = 2;            ///< N >= 1
    double reflectivity = 0.5;         ///< R in [0, 1]
    double half_subcavity_length = 1.0;  ///< L > 0
    double light_speed = 1.0;          ///< c > 0

    static CavityGeometry make(int n_membranes, double reflectivity,
                               double half_length = 1.0, double light_speed = 1.0);

    /// Throws GeometryError / DomainError when any invariant is violated.
    void validate() const;

    /// Mirror coordinate (N+1)L; mirrors at +/- this value.
    double mirror_position() const {
        return (membrane_count + 1) * half_subcavity_length;
    }

    /// Equilibrium membrane positions (2j - N - 1) L, strictly increasing.
    std::vector<double> rest_positions() const;
};

/// Mechanical oscillator parameters of each membrane.
struct MechanicalParams {
    double mass = 1.0;
    double mech_frequency = 1.0;
    double hbar = 1.0;

    void validate() const;
};

/// Collective coordinates of a two-membrane array.  `relative` is the membrane
/// separation (rest value +2L) and `com` the center of mass; membrane
/// positions are {com - relative/2, com + relative/2}.
///
/// The associated coordinate orientation: increasing `relative` moves the
/// membranes apart symmetrically.  All linear coefficients reported by this
/// library are derivatives with respect to this coordinate.
struct CollectiveCoordinates {
    double relative = 2.0;  ///< q, > 0
    double com = 0.0;       ///< Q

    /// Membrane positions, validated against the geometry (strict ordering,
    /// strictly inside the mirrors).  Throws GeometryError otherwise.
    std::array<double, 2> positions(const CavityGeometry& geom) const;
};

/// Validates that positions are strictly increasing and strictly inside the
/// mirrors; throws GeometryError otherwise.
void check_positions(const CavityGeometry& geom, std::span<const double> positions);

}  // namespace mmcavity
