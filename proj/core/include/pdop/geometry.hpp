#pragma once

#include <Eigen/Dense>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "pdop/errors.hpp"

namespace pdop {

namespace wgs84 {
inline constexpr double kSemiMajorAxis = 6378137.0;            // [m]
inline constexpr double kFlattening = 1.0 / 298.257223563;
inline constexpr double kSemiMinorAxis = kSemiMajorAxis * (1.0 - kFlattening);
inline constexpr double kEccentricitySq = kFlattening * (2.0 - kFlattening);
}  // namespace wgs84

inline constexpr double kDefaultMaskElevationDeg = 5.0;

inline double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Earth-Centered-Earth-Fixed coordinates in meters.
struct EcefPosition {
    double x{};
    double y{};
    double z{};

    Eigen::Vector3d vec() const { return {x, y, z}; }
    static EcefPosition from(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }
};

/// Geodetic coordinates on the WGS-84 ellipsoid. Angles in degrees,
/// latitude in [-90, 90], longitude in (-180, 180], height in meters.
struct GeodeticPosition {
    double latitude_deg{};
    double longitude_deg{};
    double height_m{};
};

/// Unit line-of-sight vector from the receiver to a satellite, expressed in
/// the frame the design matrix is assembled in, with the elevation/azimuth
/// seen from the receiver. Azimuth is in [0, 360), measured from north
/// through east.
struct LosVector {
    Eigen::Vector3d n;
    double elevation_deg{};
    double azimuth_deg{};
};

/// The S x 3 matrix whose rows are unit line-of-sight vectors, one per
/// satellite retained after elevation masking. Row order matches
/// `satellite_ids()`. S >= 3 is enforced at construction since nothing
/// downstream can use a smaller system.
class DesignMatrix {
public:
    DesignMatrix(std::vector<LosVector> rows, std::vector<std::string> satellite_ids);

    /// Build directly from raw unit rows (synthetic/algebraic geometries).
    /// Rows are normalized; elevation/azimuth metadata is derived by reading
    /// the row components as (east, north, up). Ids default to "S1", "S2", ...
    static DesignMatrix from_rows(const Eigen::Matrix<double, Eigen::Dynamic, 3>& rows,
                                  std::vector<std::string> satellite_ids = {});

    int size() const { return static_cast<int>(rows_.size()); }
    const Eigen::Matrix<double, Eigen::Dynamic, 3>& matrix() const { return a_; }
    const std::vector<LosVector>& rows() const { return rows_; }
    const std::vector<std::string>& satellite_ids() const { return ids_; }

private:
    std::vector<LosVector> rows_;
    std::vector<std::string> ids_;
    Eigen::Matrix<double, Eigen::Dynamic, 3> a_;
};

/// WGS-84 forward conversion.
EcefPosition geodetic_to_ecef(const GeodeticPosition& p);

/// Inverse conversion, iterative (at most 10 iterations, 1e-12 rad tolerance).
GeodeticPosition ecef_to_geodetic(const EcefPosition& p);

/// Rows of the returned matrix are the local east/north/up unit vectors at
/// `origin`, so `R * d` maps an ECEF delta into the local tangent frame.
Eigen::Matrix3d enu_rotation(const GeodeticPosition& origin);

/// (east, north, up) components of target - origin in the tangent frame at
/// origin. Throws DegenerateGeometry if origin == target.
Eigen::Vector3d ecef_to_enu(const EcefPosition& origin, const EcefPosition& target);

/// Unit vector from receiver to satellite plus its elevation/azimuth at the
/// receiver. Throws DegenerateGeometry when the separation is below 1 m.
LosVector line_of_sight(const EcefPosition& receiver, const EcefPosition& satellite);

/// Retains the satellites with elevation >= mask_elevation_deg, in input
/// order. Throws InsufficientSatellites when fewer than 3 pass the mask.
DesignMatrix build_design_matrix(const EcefPosition& receiver,
                                 const std::vector<std::pair<std::string, EcefPosition>>& satellites,
                                 double mask_elevation_deg = kDefaultMaskElevationDeg);

/// Same masking rule as build_design_matrix, but also reports which input
/// indices were retained (needed to subset per-satellite error models).
std::pair<DesignMatrix, std::vector<int>> build_design_matrix_indexed(
    const EcefPosition& receiver,
    const std::vector<std::pair<std::string, EcefPosition>>& satellites,
    double mask_elevation_deg = kDefaultMaskElevationDeg);

}  // namespace pdop
