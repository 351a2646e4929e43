#include "pdop/dop_analysis.hpp"

#include <cmath>
#include <string>

namespace pdop {

DopReport pdop(const DesignMatrix& a, const CovarianceModel& model) {
    const Eigen::Matrix3d q = cofactor_matrix(a, model);
    DopReport r;
    r.kappa_m2 = model.kappa;
    r.pdop = std::sqrt(q.trace());
    r.rms_m = r.pdop * std::sqrt(model.kappa);
    r.sigma_x_m = std::sqrt(model.kappa * q(0, 0));
    r.sigma_y_m = std::sqrt(model.kappa * q(1, 1));
    r.sigma_z_m = std::sqrt(model.kappa * q(2, 2));
    return r;
}

EnuDop dop_enu(const DesignMatrix& a, const CovarianceModel& model,
               const GeodeticPosition& receiver) {
    const Eigen::Matrix3d q = cofactor_matrix(a, model);
    const Eigen::Matrix3d r = enu_rotation(receiver);
    const Eigen::Matrix3d enu_q = r * q * r.transpose();
    EnuDop d;
    d.hdop = std::sqrt(enu_q(0, 0) + enu_q(1, 1));
    d.vdop = std::sqrt(enu_q(2, 2));
    return d;
}

Eigen::Matrix3d mismatch_covariance(const DesignMatrix& a, const CovarianceModel& model,
                                    const CovarianceModel& true_model) {
    if (true_model.size() != model.size()) {
        throw DimensionMismatch("modeled covariance is " + std::to_string(model.size()) +
                                "-dimensional, true covariance " +
                                std::to_string(true_model.size()));
    }
    const Eigen::Matrix<double, 3, Eigen::Dynamic> gain = wls_gain(a, model);
    const Eigen::Matrix3d cov = gain * true_model.sigma_eps * gain.transpose();
    return 0.5 * (cov + cov.transpose());
}

MismatchReport expected_sq_error(const DesignMatrix& a, const CovarianceModel& model,
                                 const CovarianceModel& true_model,
                                 const std::optional<Eigen::VectorXd>& bias_m) {
    MismatchReport r;
    r.cov_r_hat = mismatch_covariance(a, model, true_model);
    r.bias_sq_m2 = 0.0;
    if (bias_m) {
        if (bias_m->size() != a.size()) {
            throw DimensionMismatch("bias vector has " + std::to_string(bias_m->size()) +
                                    " entries, design matrix has " + std::to_string(a.size()) +
                                    " rows");
        }
        const Eigen::Vector3d mean_error = wls_gain(a, model) * (*bias_m);
        r.bias_sq_m2 = mean_error.squaredNorm();
    }
    r.expected_sq_error_m2 = r.cov_r_hat.trace() + r.bias_sq_m2;
    const DopReport d = pdop(a, model);
    r.pdop_predicted_sq_error_m2 = d.kappa_m2 * d.pdop * d.pdop;
    r.optimism_ratio = r.expected_sq_error_m2 / r.pdop_predicted_sq_error_m2;
    return r;
}

Proportionality pdop_error_proportionality(const DesignMatrix& a, const CovarianceModel& model) {
    const DopReport d = pdop(a, model);
    const MismatchReport m = expected_sq_error(a, model, model);
    Proportionality p;
    p.pdop = d.pdop;
    p.sqrt_expected_sq_error_m = std::sqrt(m.expected_sq_error_m2);
    p.ratio_m = p.sqrt_expected_sq_error_m / d.pdop;
    return p;
}

}  // namespace pdop
