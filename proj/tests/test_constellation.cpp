#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "pdop/constellation.hpp"
#include "pdop/errors.hpp"
#include "pdop/geometry.hpp"

using namespace pdop;
namespace fs = std::filesystem;

namespace {

const GeodeticPosition kReceiver{61.5, 23.8, 150.0};

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "pdop_constellation_test";
    fs::create_directories(dir);
    return dir;
}

fs::path write_temp(const std::string& name, const std::string& content) {
    const fs::path p = temp_dir() / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
}

std::string minimal_scenario(const std::string& extra = "") {
    return R"({
      "receiver": { "lat_deg": 61.5, "lon_deg": 23.8, "height_m": 150.0 },
      "satellites": { "azel": [
        { "id": "G01", "az_deg": 20.0, "el_deg": 60.0 },
        { "id": "G02", "az_deg": 140.0, "el_deg": 30.0 },
        { "id": "G03", "az_deg": 260.0, "el_deg": 45.0 },
        { "id": "G04", "az_deg": 330.0, "el_deg": 3.0 }
      ] },
      "error_model": { "type": "scaled_identity", "gamma_m2": 1.0 })" +
           extra + "\n}";
}

}  // namespace

TEST_CASE("from_azel places satellites so azimuth/elevation round-trip") {
    const std::vector<AzElEntry> entries{
        {"A", 0.0, 90.0, kDefaultAzelRangeM},
        {"B", 45.0, 30.0, 2.5e7},
        {"C", 200.0, 10.0, kDefaultAzelRangeM},
        {"D", 359.0, 85.0, 1.9e7},
    };
    const EcefPosition origin = geodetic_to_ecef(kReceiver);
    const auto sats = from_azel(kReceiver, entries);
    REQUIRE(sats.size() == entries.size());
    for (std::size_t i = 0; i < sats.size(); ++i) {
        const LosVector los = line_of_sight(origin, sats[i].position);
        CHECK(std::abs(los.elevation_deg - entries[i].elevation_deg) < 1e-6);
        if (entries[i].elevation_deg < 89.0) {
            CHECK(std::abs(los.azimuth_deg - entries[i].azimuth_deg) < 1e-6);
        }
        const double range = (sats[i].position.vec() - origin.vec()).norm();
        CHECK(range == doctest::Approx(entries[i].range_m).epsilon(1e-12));
    }
}

TEST_CASE("from_azel validates entries") {
    CHECK_THROWS_AS(from_azel(kReceiver, {{"A", -1.0, 45.0, 2e7}}), ValidationError);
    CHECK_THROWS_AS(from_azel(kReceiver, {{"A", 360.0, 45.0, 2e7}}), ValidationError);
    CHECK_THROWS_AS(from_azel(kReceiver, {{"A", 10.0, 95.0, 2e7}}), ValidationError);
    CHECK_THROWS_AS(from_azel(kReceiver, {{"A", 10.0, 45.0, 0.0}}), ValidationError);
    CHECK_THROWS_AS(from_azel(kReceiver, {{"", 10.0, 45.0, 2e7}}), ValidationError);
}

TEST_CASE("walker_constellation geometry") {
    const WalkerSpec spec{24, 3, 1, 55.0, 20200000.0, 0.0};
    const auto sats = walker_constellation(spec);
    REQUIRE(sats.size() == 24);
    CHECK(sats.front().id == "W01");
    CHECK(sats.back().id == "W24");

    const double radius = wgs84::kSemiMajorAxis + spec.altitude_m;
    for (const auto& s : sats) {
        CHECK(s.position.vec().norm() == doctest::Approx(radius).epsilon(1e-12));
    }

    // Satellites of one plane share an orbit normal at inclination 55 deg.
    for (int plane = 0; plane < 3; ++plane) {
        const Eigen::Vector3d a = sats[plane * 8].position.vec();
        const Eigen::Vector3d b = sats[plane * 8 + 3].position.vec();
        const Eigen::Vector3d normal = a.cross(b).normalized();
        CHECK(std::abs(normal.z()) ==
              doctest::Approx(std::cos(deg2rad(spec.inclination_deg))).epsilon(1e-9));
        for (int j = 0; j < 8; ++j) {
            CHECK(std::abs(normal.dot(sats[plane * 8 + j].position.vec())) < 1e-3);
        }
    }

    // Deterministic: same spec, same bits.
    const auto again = walker_constellation(spec);
    for (std::size_t i = 0; i < sats.size(); ++i) {
        CHECK(sats[i].position.vec() == again[i].position.vec());
    }

    // Phasing changes in-plane placement for the non-first planes.
    const auto unphased = walker_constellation({24, 3, 0, 55.0, 20200000.0, 0.0});
    CHECK((sats[8].position.vec() - unphased[8].position.vec()).norm() > 1.0);
}

TEST_CASE("walker_constellation validation") {
    CHECK_THROWS_AS(walker_constellation({25, 3, 1, 55.0, 2e7, 0.0}), ValidationError);
    CHECK_THROWS_AS(walker_constellation({24, 0, 0, 55.0, 2e7, 0.0}), ValidationError);
    CHECK_THROWS_AS(walker_constellation({24, 3, 3, 55.0, 2e7, 0.0}), ValidationError);
    CHECK_THROWS_AS(walker_constellation({24, 3, 1, 55.0, -1.0, 0.0}), ValidationError);
}

TEST_CASE("load_scenario_text parses a minimal scenario") {
    const Scenario s = load_scenario_text(minimal_scenario(), ".");
    CHECK(s.satellites.size() == 4);
    CHECK(s.mask_elevation_deg == kDefaultMaskElevationDeg);
    CHECK(s.error_model.kind() == CovarianceSpec::Kind::ScaledIdentity);
    CHECK(s.error_model.gamma_m2() == 1.0);
    CHECK_FALSE(s.true_error_model.has_value());
    CHECK_FALSE(s.mc.has_value());
}

TEST_CASE("overrides rewrite scalars, array elements and create blocks") {
    const std::vector<std::string> overrides{
        "error_model.gamma_m2=2.5",
        "satellites.azel.3.el_deg=50.0",
        "mc.n_samples=1000",
        "mc.seed=9",
    };
    const Scenario s = load_scenario_text(minimal_scenario(), ".", overrides);
    CHECK(s.error_model.gamma_m2() == 2.5);
    REQUIRE(s.mc.has_value());
    CHECK(s.mc->n_samples == 1000);
    CHECK(s.mc->seed == 9);

    const AssembledScenario assembled = assemble(s);
    CHECK(assembled.design.size() == 4);  // el 3 -> 50 now passes the mask
}

TEST_CASE("override failure modes") {
    CHECK_THROWS_AS(load_scenario_text(minimal_scenario(), ".", {"no_equals"}), ValidationError);
    CHECK_THROWS_AS(load_scenario_text(minimal_scenario(), ".", {"satellites.azel.9.el_deg=1"}),
                    ValidationError);
    CHECK_THROWS_AS(load_scenario_text(minimal_scenario(), ".", {"receiver.lat_deg.x=1"}),
                    ValidationError);
    // Overridden documents are re-validated.
    CHECK_THROWS_AS(load_scenario_text(minimal_scenario(), ".", {"error_model.gamma_m2=-1"}),
                    ValidationError);
    CHECK_THROWS_AS(load_scenario_text(minimal_scenario(), ".", {"mask_elevation_deg=\"low\""}),
                    ValidationError);
}

TEST_CASE("strict schema rejection") {
    CHECK_THROWS_AS(load_scenario_text("{ not json", "."), ParseError);
    CHECK_THROWS_AS(load_scenario_text("[]", "."), ValidationError);
    CHECK_THROWS_AS(load_scenario_text(minimal_scenario(", \"extra\": 1"), "."),
                    ValidationError);
    CHECK_THROWS_AS(load_scenario_text(minimal_scenario(", \"schema_version\": 99"), "."),
                    ValidationError);
    const std::string both = R"({
      "receiver": { "lat_deg": 0, "lon_deg": 0, "height_m": 0 },
      "satellites": {
        "azel": [ { "id": "A", "az_deg": 0, "el_deg": 45 } ],
        "walker": { "total": 24, "planes": 3, "phasing": 1,
                    "inclination_deg": 55, "altitude_m": 2e7 }
      },
      "error_model": { "type": "scaled_identity", "gamma_m2": 1 }
    })";
    CHECK_THROWS_AS(load_scenario_text(both, "."), ValidationError);
}

TEST_CASE("per-satellite models must match the satellite count at load time") {
    const std::string wrong = minimal_scenario(
        R"(, "true_error_model": { "type": "composite", "gamma_m2": 1.0,
            "known": { "diagonal_m2": [1.0, 2.0] } })");
    CHECK_THROWS_AS(load_scenario_text(wrong, "."), ValidationError);
}

TEST_CASE("assemble subsets per-satellite models and bias by the mask") {
    const std::string text = minimal_scenario(
        R"(, "true_error_model": { "type": "composite", "gamma_m2": 1.0,
            "known": { "diagonal_m2": [0.5, 1.5, 2.5, 3.5] } },
           "bias_m": [0.1, 0.2, 0.3, 0.4])");
    const Scenario s = load_scenario_text(text, ".");
    const AssembledScenario assembled = assemble(s);

    // G04 sits at elevation 3 deg, below the default 5 deg mask.
    CHECK(assembled.design.size() == 3);
    CHECK(assembled.retained_input_indices == std::vector<int>{0, 1, 2});
    REQUIRE(assembled.truth.has_value());
    CHECK(assembled.truth->size() == 3);
    CHECK(assembled.truth->sigma_eps(0, 0) == doctest::Approx(1.5));  // gamma + 0.5
    CHECK(assembled.truth->sigma_eps(2, 2) == doctest::Approx(3.5));  // gamma + 2.5
    REQUIRE(assembled.bias.has_value());
    CHECK(assembled.bias->size() == 3);
    CHECK((*assembled.bias)[2] == 0.3);
}

TEST_CASE("load_scenario resolves csv paths relative to the file") {
    write_temp("kn.csv", "2.0,0.5,0.0\n0.5,1.0,0.2\n0.0,0.2,1.5\n");
    const std::string text = R"({
      "receiver": { "lat_deg": 10.0, "lon_deg": 10.0, "height_m": 0.0 },
      "satellites": { "azel": [
        { "id": "A", "az_deg": 10.0, "el_deg": 50.0 },
        { "id": "B", "az_deg": 130.0, "el_deg": 40.0 },
        { "id": "C", "az_deg": 250.0, "el_deg": 60.0 }
      ] },
      "error_model": { "type": "composite", "gamma_m2": 1.0,
                       "known": { "csv_path": "kn.csv" } }
    })";
    const fs::path file = write_temp("csv_scenario.json", text);
    const Scenario s = load_scenario(file);
    const AssembledScenario assembled = assemble(s);
    CHECK(assembled.assumed.sigma_eps(0, 0) == doctest::Approx(3.0));
    CHECK(assembled.assumed.sigma_eps(1, 2) == doctest::Approx(0.2));
}

TEST_CASE("load_matrix_csv failure modes") {
    CHECK_THROWS_AS(load_matrix_csv(temp_dir() / "does_not_exist.csv"), ParseError);
    CHECK_THROWS_AS(load_matrix_csv(write_temp("ragged.csv", "1,2\n3\n")), ParseError);
    CHECK_THROWS_AS(load_matrix_csv(write_temp("alpha.csv", "1,x\n")), ParseError);
    CHECK_THROWS_AS(load_matrix_csv(write_temp("empty.csv", "\n \n")), ParseError);

    const Eigen::MatrixXd m = load_matrix_csv(write_temp("ok.csv", " 1 , 2\r\n3,4\n\n"));
    CHECK(m.rows() == 2);
    CHECK(m(0, 1) == 2.0);
    CHECK(m(1, 0) == 3.0);
}

TEST_CASE("load_scenario reports unreadable files as ParseError") {
    CHECK_THROWS_AS(load_scenario(temp_dir() / "missing.json"), ParseError);
}
