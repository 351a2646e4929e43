#pragma once

// Seeded random inputs for property tests. std::mt19937_64 keeps the
// fixtures reproducible; the code under test never sees this generator.

#include <random>

#include <Eigen/Dense>

#include "pdop/geometry.hpp"

namespace fixtures {

inline Eigen::MatrixXd random_gaussian(std::mt19937_64& rng, int rows, int cols) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
    return m;
}

inline Eigen::MatrixXd random_orthogonal(std::mt19937_64& rng, int n) {
    const Eigen::MatrixXd g = random_gaussian(rng, n, n);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i)
        if (r(i, i) < 0.0) q.col(i) = -q.col(i);
    return q;
}

inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
    Eigen::Matrix3d q = random_orthogonal(rng, 3);
    if (q.determinant() < 0.0) q.col(0) = -q.col(0);
    return q;
}

/// SPD matrix with eigenvalues uniform in [lo, hi].
inline Eigen::MatrixXd random_spd(std::mt19937_64& rng, int n, double lo = 0.1,
                                  double hi = 10.0) {
    const Eigen::MatrixXd q = random_orthogonal(rng, n);
    std::uniform_real_distribution<double> uniform(lo, hi);
    Eigen::VectorXd eigenvalues(n);
    for (int i = 0; i < n; ++i) eigenvalues[i] = uniform(rng);
    const Eigen::MatrixXd m = q * eigenvalues.asDiagonal() * q.transpose();
    return 0.5 * (m + m.transpose());
}

/// PSD matrix of the given rank (remaining eigenvalues exactly zero).
inline Eigen::MatrixXd random_psd(std::mt19937_64& rng, int n, int rank) {
    const Eigen::MatrixXd q = random_orthogonal(rng, n);
    std::uniform_real_distribution<double> uniform(0.1, 10.0);
    Eigen::VectorXd eigenvalues = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < rank; ++i) eigenvalues[i] = uniform(rng);
    const Eigen::MatrixXd m = q * eigenvalues.asDiagonal() * q.transpose();
    return 0.5 * (m + m.transpose());
}

/// Well-conditioned random satellite geometry: azimuths uniform on the
/// circle, elevations uniform in [10, 80] degrees, rows read as ENU.
inline pdop::DesignMatrix random_geometry(std::mt19937_64& rng, int s) {
    std::uniform_real_distribution<double> azimuth(0.0, 360.0);
    std::uniform_real_distribution<double> elevation(10.0, 80.0);
    while (true) {
        Eigen::Matrix<double, Eigen::Dynamic, 3> rows(s, 3);
        for (int i = 0; i < s; ++i) {
            const double az = pdop::deg2rad(azimuth(rng));
            const double el = pdop::deg2rad(elevation(rng));
            rows.row(i) << std::cos(el) * std::sin(az), std::cos(el) * std::cos(az),
                std::sin(el);
        }
        const Eigen::Matrix3d normal = rows.transpose() * rows;
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(normal);
        if (eig.eigenvalues().minCoeff() > 1e-6 * eig.eigenvalues().maxCoeff()) {
            return pdop::DesignMatrix::from_rows(rows);
        }
    }
}

}  // namespace fixtures
