#include <doctest.h>

#include "mmcavity/geometry.hpp"

using namespace mmcavity;

TEST_CASE("geometry invariants") {
    CHECK_NOTHROW(CavityGeometry::make(2, 0.5));
    CHECK_NOTHROW(CavityGeometry::make(1, 0.0));
    CHECK_NOTHROW(CavityGeometry::make(10, 1.0));
    CHECK_THROWS_AS(CavityGeometry::make(0, 0.5), GeometryError);
    CHECK_THROWS_AS(CavityGeometry::make(2, -0.1), DomainError);
    CHECK_THROWS_AS(CavityGeometry::make(2, 1.1), DomainError);
    CHECK_THROWS_AS(CavityGeometry::make(2, 0.5, 0.0), DomainError);
    CHECK_THROWS_AS(CavityGeometry::make(2, 0.5, 1.0, -1.0), DomainError);
}

TEST_CASE("rest layout: mirrors at (N+1)L, membranes every 2L") {
    const auto g2 = CavityGeometry::make(2, 0.5);
    CHECK(g2.mirror_position() == doctest::Approx(3.0));
    const auto r2 = g2.rest_positions();
    REQUIRE(r2.size() == 2);
    CHECK(r2[0] == doctest::Approx(-1.0));
    CHECK(r2[1] == doctest::Approx(1.0));

    const auto g3 = CavityGeometry::make(3, 0.5, 2.0);
    const auto r3 = g3.rest_positions();
    CHECK(r3[0] == doctest::Approx(-4.0));
    CHECK(r3[1] == doctest::Approx(0.0));
    CHECK(r3[2] == doctest::Approx(4.0));
    CHECK(g3.mirror_position() == doctest::Approx(8.0));
}

TEST_CASE("collective coordinates invert to ordered interior positions") {
    const auto geom = CavityGeometry::make(2, 0.5);
    const CollectiveCoordinates rest{2.0, 0.0};
    const auto pos = rest.positions(geom);
    CHECK(pos[0] == doctest::Approx(-1.0));
    CHECK(pos[1] == doctest::Approx(1.0));

    const auto shifted = CollectiveCoordinates{1.6, 0.3}.positions(geom);
    CHECK(shifted[0] == doctest::Approx(-0.5));
    CHECK(shifted[1] == doctest::Approx(1.1));

    CHECK_THROWS_AS((CollectiveCoordinates{-0.5, 0.0}.positions(geom)), GeometryError);
    CHECK_THROWS_AS((CollectiveCoordinates{2.0, 2.5}.positions(geom)), GeometryError);
    CHECK_THROWS_AS((CollectiveCoordinates{6.5, 0.0}.positions(geom)), GeometryError);
}

TEST_CASE("position validation rejects degenerate layouts") {
    const auto geom = CavityGeometry::make(2, 0.5);
    const double bad1[] = {-1.0, -1.0};
    CHECK_THROWS_AS(check_positions(geom, bad1), GeometryError);
    const double bad2[] = {1.0, -1.0};
    CHECK_THROWS_AS(check_positions(geom, bad2), GeometryError);
    const double bad3[] = {-1.0, 3.0};
    CHECK_THROWS_AS(check_positions(geom, bad3), GeometryError);
    const double bad4[] = {-1.0};
    CHECK_THROWS_AS(check_positions(geom, bad4), GeometryError);
}

TEST_CASE("mechanical parameters") {
    CHECK_NOTHROW(MechanicalParams{}.validate());
    MechanicalParams m;
    m.mass = 0.0;
    CHECK_THROWS_AS(m.validate(), DomainError);
    m = MechanicalParams{};
    m.mech_frequency = -1.0;
    CHECK_THROWS_AS(m.validate(), DomainError);
}
