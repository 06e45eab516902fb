#include "mmcavity/characteristic.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mmcavity {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive_wavenumber(double k) {
    if (!(k > 0.0) || !std::isfinite(k))
        throw DomainError("wavenumber must be positive and finite");
}

}  // namespace

double membrane_angle(double reflectivity) {
    if (!(reflectivity >= 0.0 && reflectivity <= 1.0))
        throw DomainError("reflectivity must lie in [0, 1], got " +
                          std::to_string(reflectivity));
    return std::asin(std::sqrt(reflectivity));
}

double membrane_coupling(double reflectivity) {
    if (reflectivity >= 1.0) {
        if (reflectivity == 1.0)
            throw DomainError("delta-membrane coupling diverges at R = 1; "
                              "perfect mirrors are handled analytically");
        throw DomainError("reflectivity must lie in [0, 1]");
    }
    return std::tan(membrane_angle(reflectivity));
}

double char_two_membrane(double k, const CollectiveCoordinates& coords,
                         const CavityGeometry& geom) {
    if (geom.membrane_count != 2)
        throw GeometryError("char_two_membrane requires a two-membrane cavity");
    require_positive_wavenumber(k);
    coords.positions(geom);  // ordering / interior invariants

    const double L = geom.half_subcavity_length;
    const double kappa = k * L;
    const double uq = coords.relative / L;
    // |Q| keeps the function even in Q bit for bit.
    const double uQ = std::fabs(coords.com) / L;
    const double theta = membrane_angle(geom.reflectivity);
    const double st = std::sin(theta);

    return std::sin(2.0 * (theta + 3.0 * kappa)) +
           st * st * std::sin(2.0 * kappa * (3.0 - uq)) -
           2.0 * st * std::cos(theta + kappa * uq) * std::cos(2.0 * kappa * uQ);
}

TransferResult transfer_characteristic(double k, std::span<const double> positions,
                                       const CavityGeometry& geom) {
    check_positions(geom, positions);
    require_positive_wavenumber(k);

    const double L = geom.half_subcavity_length;
    const double kappa = k * L;
    const double zeta = membrane_coupling(geom.reflectivity);
    const double mirror = geom.membrane_count + 1;  // units of L

    // State (E, D = E'/k) on the unit circle; free regions rotate it by
    // kappa * du and membranes shift D by -2 zeta E (field continuous,
    // slope jump -2 k zeta E).  The accumulated rotation counts field nodes.
    double E = 0.0, D = 1.0;
    double phase = 0.0;
    double u_prev = -mirror;

    for (std::size_t j = 0; j <= positions.size(); ++j) {
        const double u = (j < positions.size()) ? positions[j] / L : mirror;
        const double rot = kappa * (u - u_prev);
        const double c = std::cos(rot), s = std::sin(rot);
        const double En = E * c + D * s;
        const double Dn = -E * s + D * c;
        E = En;
        D = Dn;
        phase += rot;
        u_prev = u;
        if (j < positions.size()) {
            const double Dj = D - 2.0 * zeta * E;
            // E is unchanged, so the phase step stays within (-pi, pi) and
            // needs no unwrapping.
            phase += std::atan2(E, Dj) - std::atan2(E, D);
            D = Dj;
            const double r = std::hypot(E, D);
            E /= r;
            D /= r;
        }
    }
    return {E, phase};
}

double char_transfer_matrix(double k, std::span<const double> positions,
                            const CavityGeometry& geom) {
    return transfer_characteristic(k, positions, geom).residual;
}

int mode_count_below(double k, std::span<const double> positions,
                     const CavityGeometry& geom) {
    const double phase = transfer_characteristic(k, positions, geom).phase;
    return static_cast<int>(std::floor(phase / kPi));
}

int global_mode_index(ModeLabel label, int n_membranes) {
    return (n_membranes + 1) * label.multiplet_n + label.branch_i - 1;
}

ModeLabel label_from_global_index(int m, int n_membranes) {
    const int width = n_membranes + 1;
    const int n = m / width;
    return ModeLabel{n, m - width * n + 1};
}

double solve_mode_k(int m, std::span<const double> positions,
                    const CavityGeometry& geom) {
    if (m < 1) throw DomainError("global mode index must be >= 1");
    check_positions(geom, positions);

    const int n_mem = geom.membrane_count;
    const double L = geom.half_subcavity_length;
    const double span_u = 2.0 * (n_mem + 1);  // total length in units of L

    auto phase_minus_target = [&](double kappa) {
        return transfer_characteristic(kappa / L, positions, geom).phase - m * kPi;
    };

    // Each membrane advances the phase by [0, pi), so
    // kappa in [(m - N) pi / span, m pi / span] brackets the crossing.
    double lo = std::max(1e-12, (m - n_mem) * kPi / span_u * 0.999);
    double hi = m * kPi / span_u * 1.001;
    int guard = 0;
    while (phase_minus_target(lo) > 0.0) {
        lo *= 0.5;
        if (++guard > 60) throw NumericalError("failed to bracket mode from below");
    }
    guard = 0;
    while (phase_minus_target(hi) < 0.0) {
        hi *= 1.25;
        if (++guard > 60) throw NumericalError("failed to bracket mode from above");
    }

    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (phase_minus_target(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi) / L;
}

double branch_frequency(const CavityGeometry& geom, ModeLabel label,
                        std::span<const double> positions) {
    if (label.multiplet_n < 0 || label.branch_i < 1 ||
        label.branch_i > geom.membrane_count + 1)
        throw DomainError("branch label outside multiplet structure");
    const int m = global_mode_index(label, geom.membrane_count);
    if (m < 1) throw DomainError("multiplet 0 has no branch i = 1 (trivial k = 0)");
    return geom.light_speed * solve_mode_k(m, positions, geom);
}

}  // namespace mmcavity
