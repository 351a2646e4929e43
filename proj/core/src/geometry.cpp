#include "pdop/geometry.hpp"

#include <cmath>
#include <sstream>

namespace pdop {

namespace {

void check_finite(const EcefPosition& p, const char* what) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
        throw ValidationError(std::string(what) + " has a non-finite component");
    }
}

void check_geodetic(const GeodeticPosition& p) {
    if (!(p.latitude_deg >= -90.0 && p.latitude_deg <= 90.0)) {
        std::ostringstream os;
        os << "latitude_deg must be within [-90, 90], got " << p.latitude_deg;
        throw ValidationError(os.str());
    }
    if (!(p.longitude_deg > -180.0 && p.longitude_deg <= 180.0)) {
        std::ostringstream os;
        os << "longitude_deg must be within (-180, 180], got " << p.longitude_deg;
        throw ValidationError(os.str());
    }
    if (!std::isfinite(p.height_m)) {
        throw ValidationError("height_m must be finite");
    }
}

double azimuth_deg_from_enu(const Eigen::Vector3d& enu) {
    double az = rad2deg(std::atan2(enu.x(), enu.y()));
    if (az < 0.0) az += 360.0;
    if (az >= 360.0) az = 0.0;
    return az;
}

// atan2 keeps full precision at the zenith, where asin(z) loses half the
// significant digits to the flat top of the sine.
double elevation_deg_from_enu(const Eigen::Vector3d& enu) {
    return rad2deg(std::atan2(enu.z(), std::hypot(enu.x(), enu.y())));
}

}  // namespace

DesignMatrix::DesignMatrix(std::vector<LosVector> rows, std::vector<std::string> satellite_ids)
    : rows_(std::move(rows)), ids_(std::move(satellite_ids)) {
    if (rows_.size() != ids_.size()) {
        throw DimensionMismatch("design matrix has " + std::to_string(rows_.size()) + " rows but " +
                                std::to_string(ids_.size()) + " satellite ids");
    }
    if (rows_.size() < 3) {
        throw InsufficientSatellites("design matrix needs at least 3 rows, got " +
                                     std::to_string(rows_.size()));
    }
    a_.resize(static_cast<Eigen::Index>(rows_.size()), 3);
    for (size_t i = 0; i < rows_.size(); ++i) {
        const double norm = rows_[i].n.norm();
        if (std::abs(norm - 1.0) > 1e-9 || !std::isfinite(norm)) {
            throw ValidationError("row " + std::to_string(i) + " of the design matrix is not unit-norm");
        }
        rows_[i].n /= norm;
        a_.row(static_cast<Eigen::Index>(i)) = rows_[i].n.transpose();
    }
}

DesignMatrix DesignMatrix::from_rows(const Eigen::Matrix<double, Eigen::Dynamic, 3>& rows,
                                     std::vector<std::string> satellite_ids) {
    std::vector<LosVector> los;
    los.reserve(static_cast<size_t>(rows.rows()));
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        Eigen::Vector3d n = rows.row(i).transpose();
        const double norm = n.norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) {
            throw ValidationError("row " + std::to_string(i) + " has zero or non-finite norm");
        }
        n /= norm;
        LosVector v;
        v.n = n;
        v.elevation_deg = elevation_deg_from_enu(n);
        v.azimuth_deg = azimuth_deg_from_enu(n);
        los.push_back(std::move(v));
    }
    if (satellite_ids.empty()) {
        for (Eigen::Index i = 0; i < rows.rows(); ++i) {
            satellite_ids.push_back("S" + std::to_string(i + 1));
        }
    }
    return DesignMatrix(std::move(los), std::move(satellite_ids));
}

EcefPosition geodetic_to_ecef(const GeodeticPosition& p) {
    check_geodetic(p);
    const double lat = deg2rad(p.latitude_deg);
    const double lon = deg2rad(p.longitude_deg);
    const double sin_lat = std::sin(lat);
    const double cos_lat = std::cos(lat);
    const double n = wgs84::kSemiMajorAxis / std::sqrt(1.0 - wgs84::kEccentricitySq * sin_lat * sin_lat);
    return {(n + p.height_m) * cos_lat * std::cos(lon),
            (n + p.height_m) * cos_lat * std::sin(lon),
            (n * (1.0 - wgs84::kEccentricitySq) + p.height_m) * sin_lat};
}

GeodeticPosition ecef_to_geodetic(const EcefPosition& p) {
    check_finite(p, "ecef position");
    const double a = wgs84::kSemiMajorAxis;
    const double e2 = wgs84::kEccentricitySq;
    const double rho = std::hypot(p.x, p.y);

    if (rho < 1e-9) {
        // On the polar axis; longitude is arbitrary, pick 0.
        const double lat = p.z >= 0.0 ? 90.0 : -90.0;
        return {lat, 0.0, std::abs(p.z) - wgs84::kSemiMinorAxis};
    }

    const double lon = std::atan2(p.y, p.x);
    double lat = std::atan2(p.z, rho * (1.0 - e2));
    for (int iter = 0; iter < 25; ++iter) {
        const double sin_lat = std::sin(lat);
        const double n = a / std::sqrt(1.0 - e2 * sin_lat * sin_lat);
        const double height = rho / std::cos(lat) - n;
        const double next = std::atan2(p.z, rho * (1.0 - e2 * n / (n + height)));
        const bool converged = std::abs(next - lat) < 1e-14;
        lat = next;
        if (converged) break;
    }

    // h = rho cos(lat) + z sin(lat) - a W is exact on the ellipsoid normal
    // and, unlike rho / cos(lat) - N, stays conditioned near the poles.
    const double sin_lat = std::sin(lat);
    const double w = std::sqrt(1.0 - e2 * sin_lat * sin_lat);
    const double height = rho * std::cos(lat) + p.z * sin_lat - a * w;

    double lon_deg = rad2deg(lon);
    if (lon_deg <= -180.0) lon_deg += 360.0;
    return {rad2deg(lat), lon_deg, height};
}

Eigen::Matrix3d enu_rotation(const GeodeticPosition& origin) {
    check_geodetic(origin);
    const double lat = deg2rad(origin.latitude_deg);
    const double lon = deg2rad(origin.longitude_deg);
    const double sl = std::sin(lat), cl = std::cos(lat);
    const double so = std::sin(lon), co = std::cos(lon);
    Eigen::Matrix3d r;
    r << -so, co, 0.0,
        -sl * co, -sl * so, cl,
        cl * co, cl * so, sl;
    return r;
}

Eigen::Vector3d ecef_to_enu(const EcefPosition& origin, const EcefPosition& target) {
    check_finite(origin, "origin");
    check_finite(target, "target");
    const Eigen::Vector3d d = target.vec() - origin.vec();
    if (d.isZero(0.0)) {
        throw DegenerateGeometry("origin and target coincide");
    }
    return enu_rotation(ecef_to_geodetic(origin)) * d;
}

LosVector line_of_sight(const EcefPosition& receiver, const EcefPosition& satellite) {
    check_finite(receiver, "receiver");
    check_finite(satellite, "satellite");
    const Eigen::Vector3d d = satellite.vec() - receiver.vec();
    const double range = d.norm();
    if (range < 1.0) {
        throw DegenerateGeometry("receiver-satellite separation below 1 m");
    }
    LosVector v;
    v.n = d / range;
    const Eigen::Vector3d enu = enu_rotation(ecef_to_geodetic(receiver)) * v.n;
    v.elevation_deg = elevation_deg_from_enu(enu);
    v.azimuth_deg = azimuth_deg_from_enu(enu);
    return v;
}

std::pair<DesignMatrix, std::vector<int>> build_design_matrix_indexed(
    const EcefPosition& receiver,
    const std::vector<std::pair<std::string, EcefPosition>>& satellites,
    double mask_elevation_deg) {
    if (satellites.empty()) {
        throw ValidationError("satellite list is empty");
    }
    std::vector<LosVector> rows;
    std::vector<std::string> ids;
    std::vector<int> retained;
    for (size_t i = 0; i < satellites.size(); ++i) {
        LosVector v = line_of_sight(receiver, satellites[i].second);
        if (v.elevation_deg >= mask_elevation_deg) {
            rows.push_back(std::move(v));
            ids.push_back(satellites[i].first);
            retained.push_back(static_cast<int>(i));
        }
    }
    if (rows.size() < 3) {
        throw InsufficientSatellites(std::to_string(rows.size()) + " of " +
                                     std::to_string(satellites.size()) +
                                     " satellites above the " + std::to_string(mask_elevation_deg) +
                                     " deg elevation mask; need 3");
    }
    return {DesignMatrix(std::move(rows), std::move(ids)), std::move(retained)};
}

DesignMatrix build_design_matrix(const EcefPosition& receiver,
                                 const std::vector<std::pair<std::string, EcefPosition>>& satellites,
                                 double mask_elevation_deg) {
    return build_design_matrix_indexed(receiver, satellites, mask_elevation_deg).first;
}

}  // namespace pdop
