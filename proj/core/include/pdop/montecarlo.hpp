#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "pdop/constellation.hpp"
#include "pdop/covmodel.hpp"
#include "pdop/geometry.hpp"

namespace pdop {

/// Draws observation-noise vectors with a fixed covariance and mean.
/// Every draw is addressed by (seed, stream, draw index) through the
/// counter-based generator, so draw k can be produced without generating
/// draws 0..k-1 and the sequence is independent of thread scheduling.
class NoiseSampler {
  public:
    explicit NoiseSampler(const Eigen::MatrixXd& sigma_eps);
    NoiseSampler(const Eigen::MatrixXd& sigma_eps, Eigen::VectorXd mean);

    int size() const { return static_cast<int>(chol_.rows()); }
    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::MatrixXd& cholesky_factor() const { return chol_; }

    Eigen::VectorXd draw(std::uint64_t seed, std::uint32_t stream,
                         std::uint64_t draw_index) const;

  private:
    Eigen::MatrixXd chol_;
    Eigen::VectorXd mean_;
};

struct McOptions {
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    /// Worker threads; 0 picks the hardware concurrency. The result is
    /// bitwise identical for every thread count.
    int threads = 1;
    /// Substream selector; sweeps give each sample count its own stream.
    std::uint32_t stream = 0;
    Eigen::Vector3d delta_r_true = Eigen::Vector3d::Zero();
    /// Noise mean per observation (unmodeled signal-in-space bias).
    std::optional<Eigen::VectorXd> bias;
    /// Replaces the analytic expected squared error used for the z-score.
    std::optional<double> analytic_override_m2;
};

struct McReport {
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    double empirical_mean_sq_error_m2 = 0.0;
    double analytic_sq_error_m2 = 0.0;
    /// Standard error of empirical_mean_sq_error_m2, from the sample
    /// variance of the per-draw squared errors.
    double standard_error_m2 = 0.0;
    double z_score = 0.0;
    Eigen::Vector3d empirical_mean_e;
    /// Sample covariance of the estimate about its empirical mean.
    Eigen::Matrix3d empirical_cov;
    Eigen::Matrix3d analytic_cov;
    double cov_frobenius_error = 0.0;
};

/// Simulates the weighted least-squares estimator with weights from
/// `assumed` while the noise is drawn from `truth`. Reports the empirical
/// mean squared position error next to the analytic value and a z-score
/// for the difference.
McReport run_mc(const DesignMatrix& design, const CovarianceModel& assumed,
                const CovarianceModel& truth, const McOptions& opts);

/// Matched case: the noise covariance equals the modeled one.
McReport run_mc(const DesignMatrix& design, const CovarianceModel& model,
                const McOptions& opts);

/// Runs the scenario's Monte Carlo settings; the true model defaults to the
/// assumed one when absent. Throws ValidationError if the scenario has no
/// mc block.
McReport run_mc(const Scenario& scenario, int threads = 1);

/// Runs one simulation per sample count (strictly increasing) on disjoint
/// substreams, for convergence studies.
std::vector<McReport> mc_convergence_sweep(const DesignMatrix& design,
                                           const CovarianceModel& assumed,
                                           const CovarianceModel& truth,
                                           const std::vector<std::uint64_t>& sample_counts,
                                           McOptions opts);

std::vector<McReport> mc_convergence_sweep(const Scenario& scenario,
                                           const std::vector<std::uint64_t>& sample_counts,
                                           int threads = 1);

}  // namespace pdop
