#pragma once

#include <Eigen/Dense>
#include <optional>

#include "pdop/estimator.hpp"

namespace pdop {

/// Position dilution of precision and the covariance scalars it is built
/// from. Satisfies pdop = rms / sqrt(kappa) and rms^2 = sum of the squared
/// per-axis sigmas.
struct DopReport {
    double pdop{};        // unitless
    double rms_m{};       // sqrt(tr(Gamma)) [m]
    double sigma_x_m{};
    double sigma_y_m{};
    double sigma_z_m{};
    double kappa_m2{};    // [m^2]
};

/// Horizontal/vertical DOP from the posterior covariance rotated into the
/// receiver's ENU frame. Auxiliary output; the core analysis works in XYZ.
struct EnuDop {
    double hdop{};
    double vdop{};
};

/// Exact second-order error statistics of the estimator when it is run with
/// `model` but the observations actually follow `true_model`.
struct MismatchReport {
    Eigen::Matrix3d cov_r_hat;            // sandwich covariance [m^2]
    double expected_sq_error_m2{};        // tr(cov) + bias_sq
    double pdop_predicted_sq_error_m2{};  // kappa * pdop^2
    double optimism_ratio{};              // expected / predicted
    double bias_sq_m2{};                  // 0 when unbiased
};

struct Proportionality {
    double pdop{};
    double sqrt_expected_sq_error_m{};
    double ratio_m{};  // sqrt(kappa) under matched models
};

/// PDOP = sqrt(tr((A^T W A)^-1)) = sqrt(tr(Gamma)) / sqrt(kappa), together
/// with the RMS and per-axis standard deviations.
DopReport pdop(const DesignMatrix& a, const CovarianceModel& model);

/// HDOP/VDOP at the given receiver location.
EnuDop dop_enu(const DesignMatrix& a, const CovarianceModel& model,
               const GeodeticPosition& receiver);

/// Estimator covariance under model mismatch:
/// Gamma A^T Gamma_eps^-1 Gamma_eps_true Gamma_eps^-1 A Gamma.
/// Reduces to the posterior covariance when both models agree.
Eigen::Matrix3d mismatch_covariance(const DesignMatrix& a, const CovarianceModel& model,
                                    const CovarianceModel& true_model);

/// Expected squared position error under mismatch, optionally with a
/// nonzero observation-error mean (bias). The bias contributes the squared
/// norm of its propagation through the estimator gain.
MismatchReport expected_sq_error(const DesignMatrix& a, const CovarianceModel& model,
                                 const CovarianceModel& true_model,
                                 const std::optional<Eigen::VectorXd>& bias_m = std::nullopt);

/// Under a matched model the ratio sqrt(E[||e||^2]) / PDOP equals
/// sqrt(kappa) independent of geometry.
Proportionality pdop_error_proportionality(const DesignMatrix& a, const CovarianceModel& model);

}  // namespace pdop
