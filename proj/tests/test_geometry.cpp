#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pdop/errors.hpp"
#include "pdop/geometry.hpp"
#include "support/random_fixtures.hpp"

using namespace pdop;

namespace {

// Frozen against an independent high-precision evaluation of the WGS-84
// forward formulas.
struct EcefCase {
    GeodeticPosition geo;
    EcefPosition ecef;
};

const EcefCase kEcefCases[] = {
    {{0.0, 0.0, 0.0}, {6378137.0, 0.0, 0.0}},
    {{45.0, 45.0, 100.0}, {3194469.145060574, 3194469.145060574, 4487419.1195440385}},
    {{90.0, 0.0, 0.0}, {0.0, 0.0, 6356752.3142451795}},
    {{61.5, 23.8, 150.0}, {2791865.4846672318, 1231359.3964569887, 5582273.4151407886}},
};

}  // namespace

TEST_CASE("geodetic_to_ecef matches frozen reference values") {
    for (const EcefCase& c : kEcefCases) {
        const EcefPosition got = geodetic_to_ecef(c.geo);
        CHECK(std::abs(got.x - c.ecef.x) < 1e-6);
        CHECK(std::abs(got.y - c.ecef.y) < 1e-6);
        CHECK(std::abs(got.z - c.ecef.z) < 1e-6);
    }
}

TEST_CASE("ecef_to_geodetic inverts the forward conversion") {
    for (double lat : {-89.0, -45.0, -10.0, 0.0, 10.0, 33.3, 61.5, 89.0}) {
        for (double lon : {-179.0, -90.0, 0.0, 23.8, 90.0, 180.0}) {
            for (double h : {-100.0, 0.0, 150.0, 20000.0}) {
                const GeodeticPosition in{lat, lon, h};
                const GeodeticPosition out = ecef_to_geodetic(geodetic_to_ecef(in));
                CHECK(std::abs(out.latitude_deg - lat) < 1e-9);
                CHECK(std::abs(out.longitude_deg - lon) < 1e-9);
                CHECK(std::abs(out.height_m - h) < 1e-6);
            }
        }
    }
}

TEST_CASE("ecef_to_geodetic handles the polar axis") {
    const GeodeticPosition north = ecef_to_geodetic({0.0, 0.0, wgs84::kSemiMinorAxis + 1000.0});
    CHECK(north.latitude_deg == doctest::Approx(90.0));
    CHECK(north.height_m == doctest::Approx(1000.0).epsilon(1e-9));
    const GeodeticPosition south = ecef_to_geodetic({0.0, 0.0, -wgs84::kSemiMinorAxis});
    CHECK(south.latitude_deg == doctest::Approx(-90.0));
    CHECK(std::abs(south.height_m) < 1e-6);
}

TEST_CASE("geodetic range validation") {
    CHECK_THROWS_AS(geodetic_to_ecef({91.0, 0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(geodetic_to_ecef({0.0, 181.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(geodetic_to_ecef({0.0, -180.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(geodetic_to_ecef({0.0, 0.0, std::nan("")}), ValidationError);
}

TEST_CASE("enu_rotation rows are the east/north/up directions") {
    const Eigen::Matrix3d r = enu_rotation({0.0, 0.0, 0.0});
    CHECK((r.row(0) - Eigen::RowVector3d(0, 1, 0)).norm() < 1e-15);
    CHECK((r.row(1) - Eigen::RowVector3d(0, 0, 1)).norm() < 1e-15);
    CHECK((r.row(2) - Eigen::RowVector3d(1, 0, 0)).norm() < 1e-15);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lat(-89.0, 89.0), lon(-179.0, 179.0);
    for (int i = 0; i < 20; ++i) {
        const Eigen::Matrix3d m = enu_rotation({lat(rng), lon(rng), 0.0});
        CHECK((m * m.transpose() - Eigen::Matrix3d::Identity()).norm() < 1e-14);
        CHECK(m.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("ecef_to_enu recovers displacements applied in the tangent frame") {
    const GeodeticPosition origin_geo{47.3, 8.5, 400.0};
    const EcefPosition origin = geodetic_to_ecef(origin_geo);
    const Eigen::Matrix3d r = enu_rotation(origin_geo);
    const Eigen::Vector3d enu_in(120.0, -45.0, 900.0);
    const EcefPosition target = EcefPosition::from(origin.vec() + r.transpose() * enu_in);
    const Eigen::Vector3d enu_out = ecef_to_enu(origin, target);
    CHECK((enu_out - enu_in).norm() < 1e-6);
    CHECK_THROWS_AS(ecef_to_enu(origin, origin), DegenerateGeometry);
}

TEST_CASE("line_of_sight elevation and azimuth") {
    const GeodeticPosition geo{35.0, -100.0, 0.0};
    const EcefPosition origin = geodetic_to_ecef(geo);
    const Eigen::Matrix3d r = enu_rotation(geo);

    const EcefPosition zenith = EcefPosition::from(origin.vec() + r.transpose() * Eigen::Vector3d(0, 0, 2e7));
    const LosVector up = line_of_sight(origin, zenith);
    CHECK(up.elevation_deg == doctest::Approx(90.0).epsilon(1e-9));
    CHECK(up.n.norm() == doctest::Approx(1.0).epsilon(1e-14));

    const EcefPosition north_target =
        EcefPosition::from(origin.vec() + r.transpose() * Eigen::Vector3d(0, 2e7, 1e5));
    const LosVector north = line_of_sight(origin, north_target);
    CHECK(std::abs(north.azimuth_deg - 0.0) < 1e-9);

    const EcefPosition east_target =
        EcefPosition::from(origin.vec() + r.transpose() * Eigen::Vector3d(2e7, 0, 1e5));
    const LosVector east = line_of_sight(origin, east_target);
    CHECK(east.azimuth_deg == doctest::Approx(90.0).epsilon(1e-9));

    CHECK_THROWS_AS(line_of_sight(origin, EcefPosition::from(origin.vec() + Eigen::Vector3d(0.1, 0, 0))),
                    DegenerateGeometry);
}

TEST_CASE("DesignMatrix construction rules") {
    Eigen::Matrix<double, Eigen::Dynamic, 3> two(2, 3);
    two << 1, 0, 0, 0, 1, 0;
    CHECK_THROWS_AS(DesignMatrix::from_rows(two), InsufficientSatellites);

    Eigen::Matrix<double, Eigen::Dynamic, 3> three(3, 3);
    three << 2, 0, 0, 0, 3, 0, 0, 0, 4;  // from_rows normalizes
    const DesignMatrix a = DesignMatrix::from_rows(three);
    CHECK((a.matrix() - Eigen::Matrix3d::Identity()).norm() < 1e-15);
    CHECK(a.satellite_ids() == std::vector<std::string>{"S1", "S2", "S3"});

    CHECK_THROWS_AS(DesignMatrix::from_rows(three, {"A", "B"}), DimensionMismatch);

    std::vector<LosVector> rows{{{1, 0, 0}, 0, 90}, {{0, 1, 0}, 0, 0}, {{0, 0, 0.5}, 90, 0}};
    CHECK_THROWS_AS(DesignMatrix(rows, {"A", "B", "C"}), ValidationError);
}

TEST_CASE("build_design_matrix masks by elevation and keeps input order") {
    const GeodeticPosition geo{52.0, 13.4, 80.0};
    const EcefPosition origin = geodetic_to_ecef(geo);
    const Eigen::Matrix3d r = enu_rotation(geo);
    const auto sat = [&](double az_deg, double el_deg) {
        const double az = deg2rad(az_deg), el = deg2rad(el_deg);
        const Eigen::Vector3d enu(std::cos(el) * std::sin(az), std::cos(el) * std::cos(az),
                                  std::sin(el));
        return EcefPosition::from(origin.vec() + 2.2e7 * (r.transpose() * enu));
    };

    const std::vector<std::pair<std::string, EcefPosition>> sats{
        {"A", sat(10, 60)}, {"B", sat(100, 3)}, {"C", sat(200, 30)},
        {"D", sat(290, 45)}, {"E", sat(340, 4.9)},
    };

    const DesignMatrix masked = build_design_matrix(origin, sats, 5.0);
    CHECK(masked.size() == 3);
    CHECK(masked.satellite_ids() == std::vector<std::string>{"A", "C", "D"});

    const auto [indexed, kept] = build_design_matrix_indexed(origin, sats, 5.0);
    CHECK(kept == std::vector<int>{0, 2, 3});
    CHECK(indexed.matrix() == masked.matrix());

    CHECK_THROWS_AS(build_design_matrix(origin, sats, 50.0), InsufficientSatellites);
}

TEST_CASE("build_design_matrix is permutation-equivariant") {
    std::mt19937_64 rng(11);
    const GeodeticPosition geo{-20.0, 57.0, 10.0};
    const EcefPosition origin = geodetic_to_ecef(geo);
    const Eigen::Matrix3d r = enu_rotation(geo);
    std::uniform_real_distribution<double> az(0.0, 360.0), el(10.0, 80.0);

    std::vector<std::pair<std::string, EcefPosition>> sats;
    for (int i = 0; i < 6; ++i) {
        const double a = deg2rad(az(rng)), e = deg2rad(el(rng));
        const Eigen::Vector3d enu(std::cos(e) * std::sin(a), std::cos(e) * std::cos(a),
                                  std::sin(e));
        sats.emplace_back("S" + std::to_string(i),
                          EcefPosition::from(origin.vec() + 2.2e7 * (r.transpose() * enu)));
    }

    const DesignMatrix base = build_design_matrix(origin, sats, 5.0);
    std::vector<std::pair<std::string, EcefPosition>> shuffled = sats;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const DesignMatrix permuted = build_design_matrix(origin, shuffled, 5.0);

    for (int i = 0; i < permuted.size(); ++i) {
        const auto& id = permuted.satellite_ids()[static_cast<std::size_t>(i)];
        const auto it = std::find(base.satellite_ids().begin(), base.satellite_ids().end(), id);
        REQUIRE(it != base.satellite_ids().end());
        const int j = static_cast<int>(it - base.satellite_ids().begin());
        CHECK(permuted.matrix().row(i) == base.matrix().row(j));
    }
}
