#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pdop/covmodel.hpp"
#include "pdop/geometry.hpp"

namespace pdop {

/// Nominal GPS-like orbit altitude, used when an az/el entry gives no range.
inline constexpr double kDefaultAzelRangeM = 20'200'000.0;

struct AzElEntry {
    std::string id;
    double azimuth_deg = 0.0;
    double elevation_deg = 0.0;
    double range_m = kDefaultAzelRangeM;
};

/// Walker delta pattern T/P/F: `total` satellites on `planes` equally
/// spaced circular orbit planes, `phasing` setting the inter-plane slot
/// offset. A static snapshot; no Earth rotation is applied.
struct WalkerSpec {
    int total = 0;
    int planes = 0;
    int phasing = 0;
    double inclination_deg = 0.0;
    double altitude_m = 0.0;
    double epoch_deg = 0.0;
};

struct SatelliteEntry {
    std::string id;
    EcefPosition position;
};

std::vector<SatelliteEntry> from_azel(const GeodeticPosition& receiver,
                                      const std::vector<AzElEntry>& entries);

std::vector<SatelliteEntry> walker_constellation(const WalkerSpec& spec);

struct McSettings {
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    Eigen::Vector3d delta_r_true = Eigen::Vector3d::Zero();
    std::optional<double> analytic_override_m2;
};

/// A fully validated scenario file. Satellites are resolved to ECEF
/// positions; covariance models stay symbolic until the elevation mask
/// decides which satellites survive.
struct Scenario {
    GeodeticPosition receiver;
    std::vector<SatelliteEntry> satellites;
    double mask_elevation_deg = kDefaultMaskElevationDeg;
    CovarianceSpec error_model;
    std::optional<CovarianceSpec> true_error_model;
    std::optional<McSettings> mc;
    /// Observation-noise mean per listed satellite, before masking.
    std::optional<Eigen::VectorXd> bias_m;
};

/// Scenario with the mask applied: design matrix over retained satellites
/// and covariance models cut down to match.
struct AssembledScenario {
    DesignMatrix design;
    CovarianceModel assumed;
    std::optional<CovarianceModel> truth;
    std::optional<Eigen::VectorXd> bias;
    EcefPosition receiver_ecef;
    std::vector<int> retained_input_indices;
};

AssembledScenario assemble(const Scenario& scenario);

/// Loads and validates a scenario. `overrides` are dotted-path assignments
/// ("mc.seed=7", "error_model.gamma_m2=2.5") applied to the document before
/// validation; values parse as JSON, falling back to strings. Unknown keys
/// anywhere in the document are rejected.
Scenario load_scenario(const std::filesystem::path& file,
                       const std::vector<std::string>& overrides = {});

/// Same, from in-memory text. Relative CSV paths resolve against `base_dir`.
Scenario load_scenario_text(const std::string& text,
                            const std::filesystem::path& base_dir,
                            const std::vector<std::string>& overrides = {});

/// Reads a numeric CSV file into a dense matrix. Rows must have equal
/// field counts; fields must parse fully as doubles.
Eigen::MatrixXd load_matrix_csv(const std::filesystem::path& file);

}  // namespace pdop
