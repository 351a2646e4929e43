#include "pdop/estimator.hpp"

#include <cmath>
#include <sstream>

namespace pdop {

namespace {

constexpr double kConditionLimit = 1e12;

struct NormalFactor {
    Eigen::Matrix3d normal;
    Eigen::LLT<Eigen::Matrix3d> llt;
};

// Forms A^T M A and its Cholesky factor for an SPD S x S matrix M,
// rejecting rank-deficient or ill-conditioned geometry.
NormalFactor factor_normal(const DesignMatrix& a, const Eigen::MatrixXd& m, int model_size) {
    if (model_size != a.size()) {
        throw DimensionMismatch("covariance model is " + std::to_string(model_size) +
                                "-dimensional but the design matrix has " +
                                std::to_string(a.size()) + " rows");
    }
    NormalFactor f;
    f.normal = a.matrix().transpose() * m * a.matrix();
    f.normal = 0.5 * (f.normal + f.normal.transpose());

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(f.normal, Eigen::EigenvaluesOnly);
    const double min_eig = eig.eigenvalues().minCoeff();
    const double max_eig = eig.eigenvalues().maxCoeff();
    if (!(min_eig > 0.0) || max_eig > kConditionLimit * min_eig) {
        std::ostringstream os;
        os << "normal matrix A^T Gamma^-1 A is rank-deficient or ill-conditioned"
           << " (eigenvalues " << min_eig << " .. " << max_eig << ")";
        throw DegenerateGeometry(os.str());
    }
    f.llt.compute(f.normal);
    if (f.llt.info() != Eigen::Success) {
        throw DegenerateGeometry("Cholesky factorization of the normal matrix failed");
    }
    return f;
}

void check_observation(const Observation& obs, int s) {
    if (obs.b.size() != s) {
        throw DimensionMismatch("observation vector has " + std::to_string(obs.b.size()) +
                                " entries, design matrix has " + std::to_string(s) + " rows");
    }
    if (!obs.b.allFinite()) {
        throw ValidationError("observation vector has a non-finite entry");
    }
}

}  // namespace

Eigen::Matrix3d posterior_covariance(const DesignMatrix& a, const CovarianceModel& model) {
    const NormalFactor f = factor_normal(a, model.precision, model.size());
    Eigen::Matrix3d cov = f.llt.solve(Eigen::Matrix3d::Identity());
    return 0.5 * (cov + cov.transpose());
}

Eigen::Matrix3d cofactor_matrix(const DesignMatrix& a, const CovarianceModel& model) {
    const NormalFactor f = factor_normal(a, model.weight, model.size());
    Eigen::Matrix3d q = f.llt.solve(Eigen::Matrix3d::Identity());
    return 0.5 * (q + q.transpose());
}

Eigen::Matrix<double, 3, Eigen::Dynamic> wls_gain(const DesignMatrix& a,
                                                  const CovarianceModel& model) {
    const NormalFactor f = factor_normal(a, model.precision, model.size());
    return f.llt.solve(a.matrix().transpose() * model.precision);
}

SolveResult wls_solve(const DesignMatrix& a, const Observation& obs, const CovarianceModel& model) {
    const NormalFactor f = factor_normal(a, model.precision, model.size());
    check_observation(obs, a.size());
    SolveResult r;
    r.delta_r_hat = f.llt.solve(a.matrix().transpose() * (model.precision * obs.b));
    Eigen::Matrix3d cov = f.llt.solve(Eigen::Matrix3d::Identity());
    r.posterior_cov = 0.5 * (cov + cov.transpose());
    return r;
}

SolveResult estimate_position(const EcefPosition& r0, const DesignMatrix& a,
                              const Observation& obs, const CovarianceModel& model) {
    SolveResult r = wls_solve(a, obs, model);
    r.r_hat = EcefPosition::from(r0.vec() + r.delta_r_hat);
    return r;
}

}  // namespace pdop
