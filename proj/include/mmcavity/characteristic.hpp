#pragma once

#include <span>

#include "mmcavity/geometry.hpp"

namespace mmcavity {

/// Membrane scattering angle theta = asin(sqrt(R)), in [0, pi/2].
/// Throws DomainError for R outside [0, 1].
double membrane_angle(double reflectivity);

/// Delta-membrane coupling strength zeta = tan(theta), equivalent to
/// R = zeta^2 / (1 + zeta^2).  Valid for R < 1; throws DomainError at R = 1.
double membrane_coupling(double reflectivity);

/// Two-membrane characteristic function
///
///   f(k; q, Q) = sin 2(theta + 3kL) + sin^2(theta) sin 2k(3L - q)
///              - 2 sin(theta) cos(theta + kq) cos(2kQ)
///
/// whose zeros are the allowed wavenumbers of the N = 2 resonator.  Exactly
/// even in Q (computed through |Q|, so f(k,q,Q) == f(k,q,-Q) bit for bit).
/// Requires N = 2 and k > 0.
double char_two_membrane(double k, const CollectiveCoordinates& coords,
                         const CavityGeometry& geom);

/// Result of propagating the field from the left mirror to the right one:
/// `residual` is the renormalized field value at the right mirror (zero at an
/// allowed wavenumber) and `phase` the accumulated oscillation phase, which
/// counts field nodes: floor(phase/pi) eigenvalues lie strictly below k.
struct TransferResult {
    double residual;
    double phase;
};

/// General-N characteristic function via transfer propagation.  The field
/// starts as a node at the left mirror, advances through free regions and
/// across each delta membrane (field continuous, slope jump -2 k zeta E), and
/// is renormalized to unit amplitude at every step; the returned residual is
/// the field at the right mirror.
///
/// Positions must be strictly increasing and strictly inside the mirrors
/// (GeometryError otherwise); k > 0.
TransferResult transfer_characteristic(double k, std::span<const double> positions,
                                       const CavityGeometry& geom);

/// Residual only; see transfer_characteristic.
double char_transfer_matrix(double k, std::span<const double> positions,
                            const CavityGeometry& geom);

/// Number of resonator eigenvalues strictly below k (node-counting).
int mode_count_below(double k, std::span<const double> positions,
                     const CavityGeometry& geom);

/// Multiplet label: modes cluster in groups of N+1 around the perfect-mirror
/// frequencies n pi c / 2L; i = 1..N+1 orders a multiplet by frequency.
struct ModeLabel {
    int multiplet_n;
    int branch_i;

    bool operator==(const ModeLabel&) const = default;
};

/// Global mode index m = (N+1) n + i - 1 (m >= 1 for physical modes; the
/// formal m = 0 member of multiplet 0 is the trivial k = 0 solution).
int global_mode_index(ModeLabel label, int n_membranes);
ModeLabel label_from_global_index(int m, int n_membranes);

/// Wavenumber of the m-th eigenvalue (m >= 1), located by bisection on the
/// transfer phase.  Robust across avoided crossings: the eigenvalue identity
/// is fixed by the node count, not by continuation.  Requires R < 1.
double solve_mode_k(int m, std::span<const double> positions,
                    const CavityGeometry& geom);

/// Frequency omega = c k of branch (n, i) at the given membrane layout.
double branch_frequency(const CavityGeometry& geom, ModeLabel label,
                        std::span<const double> positions);

}  // namespace mmcavity
