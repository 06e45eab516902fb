#include "mmcavity/normal_modes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace mmcavity {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::vector<double>> invert(std::vector<std::vector<double>> a) {
    const int n = static_cast<int>(a.size());
    std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
    for (int r = 0; r < n; ++r) inv[r][r] = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        std::swap(inv[col], inv[pivot]);
        if (std::fabs(a[col][col]) < 1e-14)
            throw NumericalError("normal-mode basis is singular");
        const double d = a[col][col];
        for (int c = 0; c < n; ++c) {
            a[col][c] /= d;
            inv[col][c] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = a[r][col];
            if (factor == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                a[r][c] -= factor * a[col][c];
                inv[r][c] -= factor * inv[col][c];
            }
        }
    }
    return inv;
}

}  // namespace

NormalModeBasis basis(int n_membranes) {
    if (n_membranes < 1 || n_membranes > 10)
        throw DomainError("normal-mode basis defined for 1 <= N <= 10");

    NormalModeBasis b;
    b.n_membranes = n_membranes;

    if (n_membranes == 1) {
        b.to_collective = {{1.0}};
        b.symmetric = {true};
        b.mode_names = {"com"};
    } else if (n_membranes == 2) {
        b.to_collective = {{1.0, -1.0}, {0.5, 0.5}};
        b.symmetric = {false, true};
        b.mode_names = {"relative", "com"};
    } else if (n_membranes == 3) {
        b.to_collective = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
                           {1.0 / 6.0, -2.0 / 6.0, 1.0 / 6.0},
                           {-0.5, 0.0, 0.5}};
        b.symmetric = {true, true, false};
        b.mode_names = {"com", "scissors", "stretch"};
    } else {
        // Standing-wave patterns of a uniform free chain,
        // v_j = cos((j - 1/2) p pi / N); reflection parity (-1)^p, and the
        // spectrum is even exactly in the even-p modes.
        const int N = n_membranes;
        b.to_collective.assign(N, std::vector<double>(N, 0.0));
        for (int p = 0; p < N; ++p) {
            double norm = 0.0;
            std::vector<double> v(N);
            for (int j = 1; j <= N; ++j) {
                v[j - 1] = std::cos((j - 0.5) * p * kPi / N);
                norm += v[j - 1] * v[j - 1];
            }
            for (int j = 0; j < N; ++j) b.to_collective[p][j] = v[j] / norm;
            b.symmetric.push_back(p % 2 == 0);
            b.mode_names.push_back(p == 0 ? "com" : "chain-" + std::to_string(p));
        }
    }

    b.to_individual = invert(b.to_collective);
    return b;
}

int symmetric_count(int n_membranes) {
    if (n_membranes < 1) throw DomainError("membrane count must be >= 1");
    return n_membranes % 2 == 0 ? n_membranes / 2 : n_membranes / 2 + 1;
}

CouplingTermCounts coupling_term_counts(int n_membranes) {
    if (n_membranes < 2) throw DomainError("coupling-term counts need N >= 2");
    CouplingTermCounts counts;
    counts.total = n_membranes * (n_membranes - 1) / 2;
    if (n_membranes % 2 == 0)
        counts.remaining = n_membranes * (n_membranes - 2) / 8;
    return counts;  // remaining unspecified for N odd
}

std::vector<double> mode_displacement(const NormalModeBasis& b, int mode_index,
                                      double amplitude) {
    if (mode_index < 0 || mode_index >= b.n_membranes)
        throw DomainError("mode index outside basis");
    std::vector<double> d(b.n_membranes);
    for (int j = 0; j < b.n_membranes; ++j)
        d[j] = amplitude * b.to_individual[j][mode_index];
    return d;
}

double check_spectrum_symmetry(const CavityGeometry& geom, const NormalModeBasis& b,
                               int mode_index, double amplitude, Window window,
                               const ScanOptions& opts) {
    geom.validate();
    if (b.n_membranes != geom.membrane_count)
        throw DomainError("basis and geometry disagree on membrane count");

    const auto rest = geom.rest_positions();
    const auto shift = mode_displacement(b, mode_index, amplitude);
    std::vector<double> plus(rest), minus(rest);
    for (int j = 0; j < geom.membrane_count; ++j) {
        plus[j] += shift[j];
        minus[j] -= shift[j];
    }
    check_positions(geom, plus);
    check_positions(geom, minus);

    // The two scans are independent; evaluate and compare aligned roots.
    const RootSet rp = solve_window(geom, plus, window, opts);
    const RootSet rm = solve_window(geom, minus, window, opts);
    if (rp.roots.size() != rm.roots.size())
        return std::numeric_limits<double>::infinity();

    double residual = 0.0;
    for (std::size_t j = 0; j < rp.roots.size(); ++j)
        residual = std::max(residual, std::fabs(rp.roots[j] - rm.roots[j]));
    return residual;
}

Window multiplet_window(const CavityGeometry& geom, int n) {
    if (n < 1) throw DomainError("multiplet index must be >= 1");
    const double u = kPi / (2.0 * geom.half_subcavity_length);
    return Window{(n - 0.07) * u, (n + 1 - 0.02) * u};
}

}  // namespace mmcavity
