#pragma once

#include <Eigen/Dense>
#include <optional>

#include "pdop/covmodel.hpp"
#include "pdop/geometry.hpp"

namespace pdop {

/// Measured-minus-modelled pseudo-range differences, one per design-matrix row.
struct Observation {
    Eigen::VectorXd b;  // [m]
};

struct SolveResult {
    Eigen::Vector3d delta_r_hat;            // [m]
    std::optional<EcefPosition> r_hat;      // set by estimate_position
    Eigen::Matrix3d posterior_cov;          // [m^2]
};

/// Posterior covariance (A^T Gamma_eps^-1 A)^-1. Throws DegenerateGeometry
/// when the normal matrix is rank-deficient or has condition number above 1e12.
Eigen::Matrix3d posterior_covariance(const DesignMatrix& a, const CovarianceModel& model);

/// Cofactor matrix (A^T W A)^-1 under the normalized weight W = kappa *
/// Gamma_eps^-1; the posterior covariance equals kappa times this. Computed
/// from W directly so it is exactly independent of the noise scale.
Eigen::Matrix3d cofactor_matrix(const DesignMatrix& a, const CovarianceModel& model);

/// The 3 x S gain (A^T Gamma_eps^-1 A)^-1 A^T Gamma_eps^-1 mapping
/// observations to the position update. Shared by the solver and the
/// Monte Carlo loop so both apply the identical linear estimator.
Eigen::Matrix<double, 3, Eigen::Dynamic> wls_gain(const DesignMatrix& a,
                                                  const CovarianceModel& model);

/// Weighted least-squares position-difference estimate with its posterior
/// covariance.
SolveResult wls_solve(const DesignMatrix& a, const Observation& obs, const CovarianceModel& model);

/// wls_solve plus the absolute position r0 + delta_r_hat.
SolveResult estimate_position(const EcefPosition& r0, const DesignMatrix& a,
                              const Observation& obs, const CovarianceModel& model);

}  // namespace pdop
