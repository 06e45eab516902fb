#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mmcavity/characteristic.hpp"
#include "mmcavity/geometry.hpp"

namespace mmcavity {

struct Window {
    double k_min;
    double k_max;
};

/// All characteristic-equation roots found in a wavenumber window.
struct RootSet {
    Window window{0.0, 0.0};
    std::vector<double> roots;      ///< strictly increasing wavenumbers
    std::vector<double> residuals;  ///< |f| at each refined root
    double bracket_width_used = 0.0;  ///< base scan step
    bool degenerate = false;        ///< R = 1 analytic fallback was used
    std::vector<double> positions;  ///< membrane layout the scan was run at
};

using CharacteristicFn = std::function<double(double)>;

struct ScanOptions {
    int oversample = 200;          ///< grid step = 1 / ((N+1) L oversample)
    double refine_rel_tol = 1e-12; ///< contractual bisection tolerance on k
    int max_subdivisions = 8;      ///< adaptive halvings for suspected root pairs
    double dip_fraction = 1e-2;    ///< |f| dip threshold, relative to window max
};

/// Scans f over the window on a uniform grid, refines every sign change by
/// bisection (to machine precision; the contractual tolerance is
/// refine_rel_tol) and adaptively subdivides cells where |f| dips near zero
/// without changing sign.  With R = 1 the scan is skipped and the analytic
/// perfect-mirror roots n pi c / 2L inside the window are reported with the
/// degenerate flag set.
RootSet scan_roots(const CharacteristicFn& f, Window window,
                   const CavityGeometry& geom, const ScanOptions& opts = {});

/// scan_roots over the transfer characteristic at a given membrane layout.
RootSet solve_window(const CavityGeometry& geom, std::span<const double> positions,
                     Window window, const ScanOptions& opts = {});

/// scan_roots over the two-membrane closed-form characteristic.
RootSet solve_two_membrane(const CavityGeometry& geom, const CollectiveCoordinates& coords,
                           Window window, const ScanOptions& opts = {});

struct LabeledRoot {
    double k;
    double omega;
    ModeLabel label;
    bool degenerate = false;
};

struct MultipletGrouping {
    std::vector<LabeledRoot> roots;       ///< same order as the RootSet
    std::vector<int> partial_multiplets;  ///< multiplets truncated by the window
};

/// Labels each root with its multiplet index n (anchored at the perfect-mirror
/// frequency n pi c / 2L) and intra-multiplet index i in ascending frequency.
/// The label is derived from the node count of the mode, so it is stable at
/// any membrane layout, including points where a branch dips below its
/// anchor.  Degenerate root sets expand each analytic root into its N+1
/// coincident branches.
MultipletGrouping group_multiplets(const RootSet& rs, const CavityGeometry& geom);

enum class SweepCoordinate { Relative, Com };

struct AxisSpec {
    SweepCoordinate coordinate;
    std::vector<double> values;  ///< strictly increasing grid
};

/// Sample flags: bit 0 = ambiguous continuation near an avoided crossing,
/// bit 1 = jump above the declared continuity bound.
inline constexpr std::uint8_t kFlagAmbiguous = 1;
inline constexpr std::uint8_t kFlagDiscontinuous = 2;

struct BranchSamples {
    ModeLabel label;
    std::vector<double> omega;
    std::vector<std::uint8_t> flags;
};

/// One row of a spectrum surface: the secondary coordinate is held fixed and
/// the primary axis swept.
struct SurfaceRow {
    double secondary_value;
    std::vector<BranchSamples> branches;
};

struct SpectrumSurface {
    AxisSpec primary;
    std::optional<AxisSpec> secondary;  ///< absent for a 1-D sweep
    Window window{0.0, 0.0};
    CollectiveCoordinates base;  ///< values of the coordinates not swept
    std::vector<SurfaceRow> rows;
    bool any_flagged = false;
};

struct SweepOptions {
    ScanOptions scan{};
    int workers = 1;                  ///< grid points are independent work items
    double ambiguity_factor = 10.0;   ///< required prediction margin
    double continuity_coefficient = 2.0;  ///< jump bound = coeff * k * grid step
};

/// Builds a spectrum surface over a 1-D sweep (or a stack of 1-D sweeps when a
/// secondary axis is given).  Each grid point is solved independently via the
/// transfer characteristic; branch identities come from node counts and are
/// verified against nearest-frequency continuation with slope extrapolation,
/// flagging samples whose continuation margin falls below the ambiguity
/// factor or whose jump exceeds the declared continuity bound.  Results are
/// bit-identical for any worker count.
SpectrumSurface sweep_surface(const CavityGeometry& geom, const AxisSpec& primary,
                              const std::optional<AxisSpec>& secondary,
                              CollectiveCoordinates base, Window window,
                              const SweepOptions& opts = {});

std::string to_string(SweepCoordinate c);

}  // namespace mmcavity
