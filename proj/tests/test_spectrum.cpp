#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mmcavity/spectrum.hpp"
#include "oracle_values.hpp"

using namespace mmcavity;

namespace {
constexpr double kPi = std::numbers::pi;
const CavityGeometry kDefault = CavityGeometry::make(2, 0.5);
const CollectiveCoordinates kRest{2.0, 0.0};
}  // namespace

TEST_CASE("scan finds the evenly spaced transparent-cavity spectrum") {
    const auto g0 = CavityGeometry::make(2, 0.0);
    const RootSet rs = solve_two_membrane(g0, kRest, Window{0.4, 3.3});
    REQUIRE(rs.roots.size() == 6);
    for (int n = 1; n <= 6; ++n)
        CHECK(rs.roots[n - 1] == doctest::Approx(n * kPi / 6).epsilon(1e-12));
}

TEST_CASE("scan resolves the split triplet at R = 0.5") {
    const RootSet rs = solve_two_membrane(kDefault, kRest, Window{1.4, 2.3});
    REQUIRE(rs.roots.size() == 3);
    const auto& ref = oracle::kTriplets[2];
    for (int i = 0; i < 3; ++i)
        CHECK(rs.roots[i] == doctest::Approx(ref.delta[i]).epsilon(1e-12));
    CHECK(rs.bracket_width_used == doctest::Approx(1.0 / 600.0).epsilon(1e-2));
}

TEST_CASE("scan refines each root below the residual bound") {
    const RootSet rs = solve_two_membrane(kDefault, kRest, Window{1.4, 2.3});
    for (std::size_t j = 0; j < rs.roots.size(); ++j) {
        // local scale: max |f| over the bracketing cell
        double cell_max = 0.0;
        for (int s = -8; s <= 8; ++s) {
            const double k = rs.roots[j] + s * rs.bracket_width_used / 8.0;
            cell_max = std::max(cell_max,
                                std::fabs(char_two_membrane(k, kRest, kDefault)));
        }
        CHECK(rs.residuals[j] <= 1e-10 * cell_max);
    }
}

TEST_CASE("doubling the oversampling does not change the root set") {
    for (double R : {0.5, 0.9, 0.9999}) {
        CavityGeometry g = kDefault;
        g.reflectivity = R;
        ScanOptions coarse;
        coarse.oversample = 400;
        ScanOptions fine;
        fine.oversample = 800;
        const RootSet a = solve_two_membrane(g, kRest, Window{1.4, 2.3}, coarse);
        const RootSet b = solve_two_membrane(g, kRest, Window{1.4, 2.3}, fine);
        REQUIRE(a.roots.size() == b.roots.size());
        for (std::size_t j = 0; j < a.roots.size(); ++j)
            CHECK(std::fabs(a.roots[j] - b.roots[j]) < 1e-10);
    }
}

TEST_CASE("near-degenerate triplets narrow monotonically toward R = 1") {
    ScanOptions opts;
    opts.oversample = 400;
    double prev_spread = 1e9;
    for (double R : {0.9, 0.99, 0.9999}) {
        CavityGeometry g = kDefault;
        g.reflectivity = R;
        const RootSet rs = solve_two_membrane(g, kRest, Window{1.4, 2.3}, opts);
        REQUIRE(rs.roots.size() == 3);
        const double spread = rs.roots.back() - rs.roots.front();
        CHECK(spread < prev_spread);
        prev_spread = spread;
    }
    CHECK(prev_spread < 2e-2);
}

TEST_CASE("scan rejects bad windows") {
    CHECK_THROWS_AS(solve_two_membrane(kDefault, kRest, Window{-1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(solve_two_membrane(kDefault, kRest, Window{2.0, 1.0}), DomainError);
    ScanOptions opts;
    opts.oversample = 0;
    CHECK_THROWS_AS(solve_two_membrane(kDefault, kRest, Window{1.4, 2.3}, opts),
                    DomainError);
}

TEST_CASE("multiplet grouping labels the triplet and the multiplet-0 pair") {
    const RootSet rs = solve_two_membrane(kDefault, kRest, Window{1.4, 2.3});
    const auto grouping = group_multiplets(rs, kDefault);
    REQUIRE(grouping.roots.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(grouping.roots[i].label.multiplet_n == 1);
        CHECK(grouping.roots[i].label.branch_i == i + 1);
        CHECK(grouping.roots[i].omega == doctest::Approx(grouping.roots[i].k));
    }
    CHECK(grouping.partial_multiplets.empty());

    const RootSet lo = solve_two_membrane(kDefault, kRest, Window{0.1, 0.7});
    const auto glo = group_multiplets(lo, kDefault);
    REQUIRE(glo.roots.size() == 2);
    CHECK(glo.roots[0].label.multiplet_n == 0);
    CHECK(glo.roots[0].label.branch_i == 2);
    CHECK(glo.roots[1].label.branch_i == 3);
    CHECK(glo.partial_multiplets.empty());  // multiplet 0 has N members
}

TEST_CASE("a window truncating a multiplet is flagged, not an error") {
    const RootSet rs = solve_two_membrane(kDefault, kRest, Window{1.4, 1.9});
    const auto grouping = group_multiplets(rs, kDefault);
    REQUIRE(grouping.roots.size() == 2);
    REQUIRE(grouping.partial_multiplets.size() == 1);
    CHECK(grouping.partial_multiplets[0] == 1);

    const RootSet empty = solve_two_membrane(kDefault, kRest, Window{2.2, 2.3});
    CHECK(empty.roots.empty());
    CHECK(group_multiplets(empty, kDefault).roots.empty());
}

TEST_CASE("R = 1 falls back to analytic degenerate roots") {
    const auto g1 = CavityGeometry::make(2, 1.0);
    const RootSet rs = solve_window(g1, g1.rest_positions(), Window{1.4, 2.3});
    CHECK(rs.degenerate);
    REQUIRE(rs.roots.size() == 1);
    CHECK(rs.roots[0] == doctest::Approx(kPi / 2).epsilon(1e-15));

    const auto grouping = group_multiplets(rs, g1);
    REQUIRE(grouping.roots.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(grouping.roots[i].degenerate);
        CHECK(grouping.roots[i].label.multiplet_n == 1);
        CHECK(grouping.roots[i].label.branch_i == i + 1);
    }
}

TEST_CASE("sweep: three continuous branches with the expected slopes") {
    AxisSpec axis{SweepCoordinate::Relative, {}};
    const int npts = 201;
    for (int t = 0; t < npts; ++t)
        axis.values.push_back(1.9 + 0.2 * t / (npts - 1));

    const SpectrumSurface surf =
        sweep_surface(kDefault, axis, std::nullopt, kRest, Window{1.4, 2.3});
    REQUIRE(surf.rows.size() == 1);
    const auto& branches = surf.rows.front().branches;
    REQUIRE(branches.size() == 3);
    CHECK_FALSE(surf.any_flagged);

    // ordering invariant at every grid point
    for (int t = 0; t < npts; ++t)
        for (std::size_t b = 1; b < branches.size(); ++b)
            CHECK(branches[b].omega[t] > branches[b - 1].omega[t]);

    // lowest branch has zero slope at q = 2, the others do not
    const int mid = (npts - 1) / 2;
    const double dq = axis.values[1] - axis.values[0];
    const double slope1 =
        (branches[0].omega[mid + 1] - branches[0].omega[mid - 1]) / (2 * dq);
    const double slope2 =
        (branches[1].omega[mid + 1] - branches[1].omega[mid - 1]) / (2 * dq);
    const double slope3 =
        (branches[2].omega[mid + 1] - branches[2].omega[mid - 1]) / (2 * dq);
    CHECK(std::fabs(slope1) < 1e-6);
    CHECK(slope2 == doctest::Approx(oracle::kTriplets[2].b[1]).epsilon(1e-4));
    CHECK(slope3 == doctest::Approx(oracle::kTriplets[2].b[2]).epsilon(1e-4));
    CHECK(branches[0].omega[mid] == doctest::Approx(kPi / 2).epsilon(1e-13));
}

TEST_CASE("sweep along Q is even about Q = 0") {
    AxisSpec axis{SweepCoordinate::Com, {}};
    const int npts = 41;
    for (int t = 0; t < npts; ++t)
        axis.values.push_back(-0.1 + 0.2 * t / (npts - 1));
    const SpectrumSurface surf =
        sweep_surface(kDefault, axis, std::nullopt, kRest, Window{1.4, 2.3});
    for (const auto& b : surf.rows.front().branches)
        for (int t = 0; t < npts; ++t)
            CHECK(b.omega[t] == doctest::Approx(b.omega[npts - 1 - t]).epsilon(1e-12));
}

TEST_CASE("transparent membranes give flat branches") {
    auto g0 = CavityGeometry::make(2, 0.0);
    AxisSpec axis{SweepCoordinate::Relative, {1.9, 1.95, 2.0, 2.05, 2.1}};
    const SpectrumSurface surf =
        sweep_surface(g0, axis, std::nullopt, kRest, Window{1.4, 2.3});
    for (const auto& b : surf.rows.front().branches)
        for (double w : b.omega)
            CHECK(w == doctest::Approx(b.omega[0]).epsilon(1e-12));
}

TEST_CASE("sweep results are bit-identical for any worker count") {
    AxisSpec axis{SweepCoordinate::Relative, {}};
    for (int t = 0; t < 51; ++t) axis.values.push_back(1.9 + 0.2 * t / 50.0);

    SweepOptions serial;
    serial.workers = 1;
    SweepOptions parallel;
    parallel.workers = 4;
    const auto a = sweep_surface(kDefault, axis, std::nullopt, kRest, Window{1.4, 2.3},
                                 serial);
    const auto b = sweep_surface(kDefault, axis, std::nullopt, kRest, Window{1.4, 2.3},
                                 parallel);
    REQUIRE(a.rows.front().branches.size() == b.rows.front().branches.size());
    for (std::size_t br = 0; br < a.rows.front().branches.size(); ++br)
        for (std::size_t t = 0; t < axis.values.size(); ++t)
            CHECK(a.rows.front().branches[br].omega[t] ==
                  b.rows.front().branches[br].omega[t]);  // bitwise
}

TEST_CASE("two-axis sweeps stack rows over the secondary grid") {
    AxisSpec primary{SweepCoordinate::Relative, {1.95, 2.0, 2.05}};
    AxisSpec secondary{SweepCoordinate::Com, {-0.05, 0.0, 0.05}};
    const SpectrumSurface surf = sweep_surface(kDefault, primary, secondary, kRest,
                                               Window{1.4, 2.3});
    REQUIRE(surf.rows.size() == 3);
    CHECK(surf.rows[0].secondary_value == doctest::Approx(-0.05));
    // Q-parity: first and last rows coincide
    for (std::size_t br = 0; br < surf.rows[0].branches.size(); ++br)
        for (int t = 0; t < 3; ++t)
            CHECK(surf.rows[0].branches[br].omega[t] ==
                  doctest::Approx(surf.rows[2].branches[br].omega[t]).epsilon(1e-12));
}

TEST_CASE("sweep validation errors") {
    AxisSpec axis{SweepCoordinate::Relative, {2.0}};
    CHECK_THROWS_AS(sweep_surface(kDefault, axis, std::nullopt, kRest, Window{1.4, 2.3}),
                    DomainError);
    AxisSpec unsorted{SweepCoordinate::Relative, {2.0, 1.9}};
    CHECK_THROWS_AS(
        sweep_surface(kDefault, unsorted, std::nullopt, kRest, Window{1.4, 2.3}),
        DomainError);
    AxisSpec escaping{SweepCoordinate::Relative, {5.8, 6.5}};
    CHECK_THROWS_AS(
        sweep_surface(kDefault, escaping, std::nullopt, kRest, Window{1.4, 2.3}),
        GeometryError);
    CHECK_THROWS_AS(sweep_surface(CavityGeometry::make(3, 0.5), axis, std::nullopt,
                                  kRest, Window{1.4, 2.3}),
                    GeometryError);
}
