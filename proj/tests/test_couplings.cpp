#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mmcavity/couplings.hpp"
#include "oracle_values.hpp"

using namespace mmcavity;

namespace {
constexpr double kPi = std::numbers::pi;
const CavityGeometry kDefault = CavityGeometry::make(2, 0.5);

CavityGeometry with_R(double R) {
    CavityGeometry g = kDefault;
    g.reflectivity = R;
    return g;
}
}  // namespace

TEST_CASE("closed forms reproduce the frozen reference table") {
    for (const auto& ref : oracle::kTriplets) {
        const auto g = with_R(ref.reflectivity);
        for (int i = 1; i <= 3; ++i) {
            CHECK(delta_closed_form(ref.n, i, g) ==
                  doctest::Approx(ref.delta[i - 1]).epsilon(1e-14));
            if (i == 1)
                CHECK(b_closed_form(ref.n, i, g) == 0.0);
            else
                CHECK(b_closed_form(ref.n, i, g) ==
                      doctest::Approx(ref.b[i - 1]).epsilon(1e-14));
        }
        CHECK(m1_closed_form(ref.n, g) == doctest::Approx(ref.m1).epsilon(1e-14));
    }
}

TEST_CASE("closed forms at the transparent and perfect-mirror ends") {
    const auto g0 = with_R(0.0);
    for (int i = 1; i <= 3; ++i) {
        CHECK(delta_closed_form(1, i, g0) ==
              doctest::Approx(oracle::kTransparent[i - 1]).epsilon(1e-14));
        CHECK(b_closed_form(1, i, g0) == 0.0);
    }
    CHECK(m1_closed_form(1, g0) == 0.0);

    // degeneracy: branches 2 and 3 collapse onto n pi c / 2L as R -> 1
    const auto g1 = with_R(1.0);
    CHECK(delta_closed_form(1, 2, g1) == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(delta_closed_form(1, 3, g1) == doctest::Approx(kPi / 2).epsilon(1e-12));
}

TEST_CASE("closed-form domain errors") {
    CHECK_THROWS_AS(delta_closed_form(1, 0, kDefault), DomainError);
    CHECK_THROWS_AS(delta_closed_form(1, 4, kDefault), DomainError);
    CHECK_THROWS_AS(delta_closed_form(0, 1, kDefault), DomainError);
    CHECK_THROWS_AS(delta_closed_form(1, 1, CavityGeometry::make(3, 0.5)), DomainError);
    CHECK_THROWS_AS(m1_closed_form(1, with_R(1.0 - 1e-10)), DomainError);
}

TEST_CASE("quadratic coefficient scales as n^2 and as c/L^3") {
    const double m1 = m1_closed_form(1, kDefault);
    CHECK(m1 == doctest::Approx(-kPi * kPi / 24.0).epsilon(1e-14));
    CHECK(m1_closed_form(2, kDefault) == doctest::Approx(4.0 * m1).epsilon(1e-14));

    const auto scaled = CavityGeometry::make(2, 0.5, 2.0, 3.0);
    CHECK(m1_closed_form(1, scaled) == doctest::Approx(m1 * 3.0 / 8.0).epsilon(1e-13));
    CHECK(b_closed_form(1, 2, scaled) ==
          doctest::Approx(b_closed_form(1, 2, kDefault) * 3.0 / 4.0).epsilon(1e-13));
    CHECK(delta_closed_form(1, 1, scaled) == doctest::Approx(kPi / 2 * 3.0 / 2.0));
}

TEST_CASE("numeric extraction matches the closed forms") {
    const auto coeffs = extract_couplings_numeric(kDefault, 1, 1, 2.0, 0.0);
    CHECK(coeffs.delta == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(std::fabs(coeffs.b_rel) < 1e-8);
    CHECK(coeffs.m_rel == doctest::Approx(-kPi * kPi / 24.0).epsilon(1e-4));
    CHECK(coeffs.theta_ni == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(coeffs.xi_ni == doctest::Approx(kPi / 4).epsilon(1e-12));
    CHECK(coeffs.round_trip_time == doctest::Approx(4.0));

    const auto c2 = extract_couplings_numeric(kDefault, 1, 2, 2.0, 0.0);
    CHECK(c2.b_rel == doctest::Approx(oracle::kTriplets[2].b[1]).epsilon(1e-8));
}

TEST_CASE("oracle agreement across R and n") {
    for (const auto& ref : oracle::kTriplets) {
        const auto g = with_R(ref.reflectivity);
        for (int i = 1; i <= 3; ++i) {
            const auto num = extract_couplings_numeric(g, ref.n, i, 2.0, 0.0);
            CHECK(num.delta == doctest::Approx(ref.delta[i - 1]).epsilon(1e-9));
            if (i == 1) {
                CHECK(std::fabs(num.b_rel) < 1e-8);
                CHECK(num.m_rel == doctest::Approx(ref.m1).epsilon(1e-4));
            } else {
                CHECK(num.b_rel == doctest::Approx(ref.b[i - 1]).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("parity forces b_com and p_cross to vanish at Q0 = 0") {
    for (int i = 1; i <= 3; ++i) {
        const auto num = extract_couplings_numeric(kDefault, 1, i, 2.0, 0.0);
        CHECK(std::fabs(num.b_com) < 1e-8);
        CHECK(std::fabs(num.p_cross) < 1e-6);
    }
}

TEST_CASE("displaced center of mass activates the linear Q coupling") {
    double best = 0.0;
    for (int i = 1; i <= 3; ++i) {
        const auto num = extract_couplings_numeric(kDefault, 1, i, 2.0, 0.1);
        best = std::max(best, std::fabs(num.b_com));
    }
    CHECK(best > 1e-4);
}

TEST_CASE("least-squares refit reproduces the finite-difference coefficients") {
    for (int i = 1; i <= 3; ++i) {
        const auto fd = extract_couplings_numeric(kDefault, 1, i, 2.0, 0.0);
        const auto ls = refit_quadratic_lsq(kDefault, 1, i, 2.0, 0.0);
        auto close = [](double a, double b) {
            return std::fabs(a - b) <= 1e-5 * std::max({std::fabs(a), std::fabs(b), 1e-3});
        };
        CHECK(close(fd.delta, ls.delta));
        CHECK(close(fd.b_rel, ls.b_rel));
        CHECK(close(fd.b_com, ls.b_com));
        CHECK(close(fd.m_rel, ls.m_rel));
        CHECK(close(fd.m_com, ls.m_com));
        CHECK(close(fd.p_cross, ls.p_cross));
    }
}

TEST_CASE("extraction preconditions") {
    CHECK_THROWS_AS(extract_couplings_numeric(kDefault, 0, 1, 2.0, 0.0), DomainError);
    CHECK_THROWS_AS(extract_couplings_numeric(kDefault, 1, 4, 2.0, 0.0), DomainError);
    CHECK_THROWS_AS(extract_couplings_numeric(with_R(1.0), 1, 1, 2.0, 0.0), DomainError);
    ExtractOptions coarse;
    coarse.step = 0.5;  // not small against the modulation period
    CHECK_THROWS_AS(extract_couplings_numeric(kDefault, 1, 1, 2.0, 0.0, coarse),
                    DomainError);
    CHECK_THROWS_AS(extract_couplings_numeric(kDefault, 1, 1, 5.9, 0.2), GeometryError);
}

TEST_CASE("extraction works away from unit scales") {
    const auto scaled = CavityGeometry::make(2, 0.5, 2.0, 3.0);
    const auto num = extract_couplings_numeric(scaled, 1, 1, 4.0, 0.0);
    CHECK(num.delta == doctest::Approx(delta_closed_form(1, 1, scaled)).epsilon(1e-10));
    CHECK(num.m_rel == doctest::Approx(m1_closed_form(1, scaled)).epsilon(1e-4));
    const auto num2 = extract_couplings_numeric(scaled, 1, 2, 4.0, 0.0);
    CHECK(num2.b_rel == doctest::Approx(b_closed_form(1, 2, scaled)).epsilon(1e-6));
}

TEST_CASE("crosscheck passes at the validated reflectivities") {
    for (double R : {0.5, 0.9}) {
        const auto report = crosscheck(with_R(R), 1);
        CHECK(report.all_pass());
        CHECK(report.checks.size() == 13);  // 3 delta + 3 b + 1 m + 3 b_com + 3 p
    }
}

TEST_CASE("crosscheck at R = 0: only delta survives, grouping noted") {
    const auto report = crosscheck(with_R(0.0), 1);
    CHECK(report.all_pass());
    bool found_note = false;
    for (const auto& c : report.checks) {
        if (c.name.starts_with("delta") && !c.note.empty()) found_note = true;
        if (c.name.starts_with("b_rel") || c.name.starts_with("m_rel"))
            CHECK(c.reference == 0.0);
    }
    CHECK(found_note);
}

TEST_CASE("a corrupted tolerance makes the crosscheck fail") {
    CrosscheckTolerances corrupted;
    corrupted.delta_rel = 1e-18;
    CHECK_FALSE(crosscheck(kDefault, 1, corrupted).all_pass());
    CHECK_THROWS_AS(crosscheck(with_R(1.0), 1), DomainError);
}

TEST_CASE("single-photon scales are pure unit bookkeeping") {
    CouplingCoefficients coeffs;
    coeffs.b_rel = 0.0;
    coeffs.m_rel = -0.4;
    MechanicalParams mech;  // mass 1, omega 1, hbar 1 -> m_eff(rel) = 1/2, x_zpf = 1
    const auto rel = single_photon_scales(coeffs, mech, CollectiveMode::Relative);
    CHECK(rel.effective_mass == doctest::Approx(0.5));
    CHECK(rel.x_zpf == doctest::Approx(1.0));
    CHECK(rel.linear == 0.0);
    CHECK(rel.quadratic == doctest::Approx(-0.4));

    coeffs.b_rel = 0.3;
    const auto base = single_photon_scales(coeffs, mech, CollectiveMode::Relative);
    mech.mass *= 4.0;
    const auto heavy = single_photon_scales(coeffs, mech, CollectiveMode::Relative);
    CHECK(heavy.x_zpf == doctest::Approx(base.x_zpf / 2.0));
    CHECK(heavy.linear == doctest::Approx(base.linear / 2.0));
    CHECK(heavy.quadratic == doctest::Approx(base.quadratic / 4.0));

    coeffs.b_com = 0.1;
    coeffs.m_com = -1.6;
    const auto com = single_photon_scales(coeffs, MechanicalParams{}, CollectiveMode::Com);
    CHECK(com.effective_mass == doctest::Approx(2.0));
    CHECK(com.linear == doctest::Approx(0.1 * com.x_zpf));

    MechanicalParams bad;
    bad.mass = -1.0;
    CHECK_THROWS_AS(single_photon_scales(coeffs, bad, CollectiveMode::Com), DomainError);
}
