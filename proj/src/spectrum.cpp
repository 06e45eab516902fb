#include "mmcavity/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

namespace mmcavity {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kReflectivityClamp = 1.0 - 1e-9;

CavityGeometry clamped(const CavityGeometry& geom) {
    CavityGeometry g = geom;
    g.reflectivity = std::min(g.reflectivity, kReflectivityClamp);
    return g;
}

/// Bisect a bracketed sign change down to machine resolution.
double refine_root(const CharacteristicFn& f, double lo, double hi, double f_lo) {
    const bool neg_lo = f_lo < 0.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == neg_lo)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct CellScanner {
    const CharacteristicFn& f;
    const ScanOptions& opts;
    double dip_threshold;
    std::vector<double>& roots;

    /// Looks for sign changes inside [a, b]; recursively halves the cell when
    /// |f| dips below the threshold without changing sign (suspected pair).
    void scan_cell(double a, double b, double fa, double fb, int depth) {
        if (fa == 0.0) roots.push_back(a);
        if ((fa < 0.0) != (fb < 0.0)) {
            roots.push_back(refine_root(f, a, b, fa));
            return;
        }
        if (depth >= opts.max_subdivisions) return;
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        const double dip = std::min({std::fabs(fa), std::fabs(fm), std::fabs(fb)});
        if (dip > dip_threshold) return;
        scan_cell(a, mid, fa, fm, depth + 1);
        scan_cell(mid, b, fm, fb, depth + 1);
    }
};

RootSet analytic_degenerate_roots(const CavityGeometry& geom, Window window) {
    RootSet rs;
    rs.window = window;
    rs.degenerate = true;
    const double anchor = kPi / (2.0 * geom.half_subcavity_length);
    int n = std::max(1, static_cast<int>(std::ceil(window.k_min / anchor)));
    for (; n * anchor <= window.k_max; ++n) {
        rs.roots.push_back(n * anchor);
        rs.residuals.push_back(0.0);
    }
    return rs;
}

}  // namespace

RootSet scan_roots(const CharacteristicFn& f, Window window,
                   const CavityGeometry& geom, const ScanOptions& opts) {
    geom.validate();
    if (!(window.k_min > 0.0) || !(window.k_max > window.k_min) ||
        !std::isfinite(window.k_max))
        throw DomainError("scan window must be positive and finite");
    if (opts.oversample < 1) throw DomainError("oversample must be >= 1");

    if (geom.reflectivity >= 1.0) return analytic_degenerate_roots(geom, window);

    const double step = 1.0 / ((geom.membrane_count + 1) *
                               geom.half_subcavity_length * opts.oversample);
    const int cells = std::max(1, static_cast<int>(std::ceil((window.k_max - window.k_min) / step)));

    std::vector<double> ks(cells + 1), fs(cells + 1);
    double max_abs = 0.0;
    for (int j = 0; j <= cells; ++j) {
        ks[j] = window.k_min + (window.k_max - window.k_min) * j / cells;
        fs[j] = f(ks[j]);
        max_abs = std::max(max_abs, std::fabs(fs[j]));
    }

    RootSet rs;
    rs.window = window;
    rs.bracket_width_used = (window.k_max - window.k_min) / cells;

    CellScanner scanner{f, opts, opts.dip_fraction * max_abs, rs.roots};
    for (int j = 0; j < cells; ++j)
        scanner.scan_cell(ks[j], ks[j + 1], fs[j], fs[j + 1], 0);

    std::sort(rs.roots.begin(), rs.roots.end());
    // Adjacent subdivision cells can both refine onto the same zero.
    const auto last = std::unique(rs.roots.begin(), rs.roots.end(),
                                  [&](double a, double b) {
                                      return b - a < 8.0 * opts.refine_rel_tol * b;
                                  });
    rs.roots.erase(last, rs.roots.end());
    rs.residuals.reserve(rs.roots.size());
    for (double r : rs.roots) rs.residuals.push_back(std::fabs(f(r)));
    return rs;
}

RootSet solve_window(const CavityGeometry& geom, std::span<const double> positions,
                     Window window, const ScanOptions& opts) {
    check_positions(geom, positions);
    if (geom.reflectivity >= 1.0) {
        RootSet rs = analytic_degenerate_roots(geom, window);
        rs.positions.assign(positions.begin(), positions.end());
        return rs;
    }
    const CavityGeometry g = clamped(geom);
    std::vector<double> pos(positions.begin(), positions.end());
    RootSet rs = scan_roots([&](double k) { return char_transfer_matrix(k, pos, g); },
                            window, g, opts);
    rs.positions = std::move(pos);
    return rs;
}

RootSet solve_two_membrane(const CavityGeometry& geom, const CollectiveCoordinates& coords,
                           Window window, const ScanOptions& opts) {
    const auto positions = coords.positions(geom);
    if (geom.reflectivity >= 1.0) {
        RootSet rs = analytic_degenerate_roots(geom, window);
        rs.positions.assign(positions.begin(), positions.end());
        return rs;
    }
    const CavityGeometry g = clamped(geom);
    RootSet rs = scan_roots([&](double k) { return char_two_membrane(k, coords, g); },
                            window, g, opts);
    rs.positions.assign(positions.begin(), positions.end());
    return rs;
}

MultipletGrouping group_multiplets(const RootSet& rs, const CavityGeometry& geom) {
    geom.validate();
    MultipletGrouping out;
    const int n_mem = geom.membrane_count;
    const int width = n_mem + 1;

    if (rs.degenerate) {
        const double anchor = kPi / (2.0 * geom.half_subcavity_length);
        for (double k : rs.roots) {
            const int n = static_cast<int>(std::lround(k / anchor));
            for (int i = 1; i <= width; ++i)
                out.roots.push_back({k, geom.light_speed * k, ModeLabel{n, i}, true});
        }
        return out;
    }

    std::vector<double> pos = rs.positions.empty() ? geom.rest_positions() : rs.positions;
    const CavityGeometry g = clamped(geom);

    for (double k : rs.roots) {
        const double phase = transfer_characteristic(k, pos, g).phase;
        const int m = static_cast<int>(std::lround(phase / kPi));
        if (m < 1)
            throw NumericalError("root labeling produced a non-physical mode index");
        out.roots.push_back({k, geom.light_speed * k, label_from_global_index(m, n_mem), false});
    }

    // A multiplet truncated by the window is flagged, not an error.
    for (std::size_t a = 0; a < out.roots.size();) {
        std::size_t b = a;
        while (b < out.roots.size() &&
               out.roots[b].label.multiplet_n == out.roots[a].label.multiplet_n)
            ++b;
        const int n = out.roots[a].label.multiplet_n;
        const int expected = (n == 0) ? n_mem : width;
        if (static_cast<int>(b - a) < expected) out.partial_multiplets.push_back(n);
        a = b;
    }
    return out;
}

std::string to_string(SweepCoordinate c) {
    return c == SweepCoordinate::Relative ? "q" : "Q";
}

namespace {

void run_partitioned(std::size_t count, int workers,
                     const std::function<void(std::size_t)>& work) {
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) work(i);
        return;
    }
    const int nthreads = std::min<std::size_t>(workers, count);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nthreads);
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < count; i += nthreads) work(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

CollectiveCoordinates at_point(CollectiveCoordinates base, SweepCoordinate coord,
                               double value) {
    if (coord == SweepCoordinate::Relative)
        base.relative = value;
    else
        base.com = value;
    return base;
}

SurfaceRow sweep_row(const CavityGeometry& geom, const AxisSpec& primary,
                     CollectiveCoordinates base, Window window,
                     const SweepOptions& opts) {
    const std::size_t npts = primary.values.size();
    std::vector<MultipletGrouping> grouped(npts);

    run_partitioned(npts, opts.workers, [&](std::size_t t) {
        const auto coords = at_point(base, primary.coordinate, primary.values[t]);
        const auto positions = coords.positions(geom);
        const RootSet rs = solve_window(geom, positions, window, opts.scan);
        grouped[t] = group_multiplets(rs, geom);
    });

    // Branches present at every grid point.
    std::vector<ModeLabel> labels;
    for (const auto& lr : grouped[0].roots) labels.push_back(lr.label);
    for (std::size_t t = 1; t < npts; ++t) {
        std::erase_if(labels, [&](ModeLabel lbl) {
            return std::none_of(grouped[t].roots.begin(), grouped[t].roots.end(),
                                [&](const LabeledRoot& lr) { return lr.label == lbl; });
        });
    }

    SurfaceRow row;
    row.secondary_value = 0.0;
    for (ModeLabel lbl : labels) {
        BranchSamples bs;
        bs.label = lbl;
        bs.omega.resize(npts);
        bs.flags.assign(npts, 0);
        for (std::size_t t = 0; t < npts; ++t) {
            const auto& roots = grouped[t].roots;
            const auto it = std::find_if(roots.begin(), roots.end(),
                                         [&](const LabeledRoot& lr) { return lr.label == lbl; });
            bs.omega[t] = it->omega;
        }
        // Continuation diagnostics: the node-count identity above is exact;
        // the nearest-frequency continuation the samples would have used is
        // replayed to flag ambiguous or discontinuous steps.
        for (std::size_t t = 1; t < npts; ++t) {
            const double predicted =
                (t == 1) ? bs.omega[0] : 2.0 * bs.omega[t - 1] - bs.omega[t - 2];
            double d1 = std::numeric_limits<double>::infinity();
            double d2 = d1;
            double nearest = bs.omega[t];
            for (const auto& lr : grouped[t].roots) {
                const double d = std::fabs(lr.omega - predicted);
                if (d < d1) {
                    d2 = d1;
                    d1 = d;
                    nearest = lr.omega;
                } else if (d < d2) {
                    d2 = d;
                }
            }
            if (nearest != bs.omega[t] || d2 < opts.ambiguity_factor * d1)
                bs.flags[t] |= kFlagAmbiguous;
            const double grid_step = primary.values[t] - primary.values[t - 1];
            const double bound = opts.continuity_coefficient * bs.omega[t - 1] *
                                 grid_step / geom.half_subcavity_length;
            if (std::fabs(bs.omega[t] - bs.omega[t - 1]) > bound)
                bs.flags[t] |= kFlagDiscontinuous;
        }
        row.branches.push_back(std::move(bs));
    }
    return row;
}

}  // namespace

SpectrumSurface sweep_surface(const CavityGeometry& geom, const AxisSpec& primary,
                              const std::optional<AxisSpec>& secondary,
                              CollectiveCoordinates base, Window window,
                              const SweepOptions& opts) {
    geom.validate();
    if (geom.membrane_count != 2)
        throw GeometryError("collective-coordinate sweeps are defined for N = 2");
    if (primary.values.size() < 2)
        throw DomainError("sweep grid needs at least two points");
    if (!std::is_sorted(primary.values.begin(), primary.values.end(),
                        std::less_equal<>()))
        throw DomainError("sweep grid must be strictly increasing");
    if (secondary && secondary->coordinate == primary.coordinate)
        throw DomainError("primary and secondary sweep coordinates must differ");

    SpectrumSurface surf;
    surf.primary = primary;
    surf.secondary = secondary;
    surf.window = window;
    surf.base = base;

    if (!secondary) {
        SurfaceRow row = sweep_row(geom, primary, base, window, opts);
        row.secondary_value =
            (primary.coordinate == SweepCoordinate::Relative) ? base.com : base.relative;
        surf.rows.push_back(std::move(row));
    } else {
        for (double sv : secondary->values) {
            SurfaceRow row = sweep_row(geom, primary,
                                       at_point(base, secondary->coordinate, sv),
                                       window, opts);
            row.secondary_value = sv;
            surf.rows.push_back(std::move(row));
        }
    }

    for (const auto& row : surf.rows)
        for (const auto& b : row.branches)
            for (auto fl : b.flags)
                if (fl) surf.any_flagged = true;
    return surf;
}

}  // namespace mmcavity
