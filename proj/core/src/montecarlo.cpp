#include "pdop/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <utility>

#include "pdop/dop_analysis.hpp"
#include "pdop/errors.hpp"
#include "pdop/estimator.hpp"
#include "pdop/philox.hpp"

namespace pdop {

namespace {

// Draws per accumulation block. Partial sums are merged in ascending block
// order, which pins the floating-point result for every thread count.
constexpr std::uint64_t kBlockSize = 4096;

struct BlockSums {
    double q = 0.0;
    double q2 = 0.0;
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    Eigen::Matrix3d outer = Eigen::Matrix3d::Zero();
};

int resolve_threads(int requested, std::uint64_t n_blocks) {
    if (requested < 0) {
        throw ValidationError("threads must be non-negative, got " + std::to_string(requested));
    }
    unsigned n = requested == 0 ? std::thread::hardware_concurrency()
                                : static_cast<unsigned>(requested);
    if (n == 0) n = 1;
    if (n > n_blocks) n = static_cast<unsigned>(n_blocks);
    return static_cast<int>(n);
}

}  // namespace

NoiseSampler::NoiseSampler(const Eigen::MatrixXd& sigma_eps)
    : NoiseSampler(sigma_eps, Eigen::VectorXd::Zero(sigma_eps.rows())) {}

NoiseSampler::NoiseSampler(const Eigen::MatrixXd& sigma_eps, Eigen::VectorXd mean)
    : mean_(std::move(mean)) {
    if (sigma_eps.rows() != sigma_eps.cols()) {
        throw DimensionMismatch("noise covariance must be square, got " +
                                std::to_string(sigma_eps.rows()) + "x" +
                                std::to_string(sigma_eps.cols()));
    }
    if (mean_.size() != sigma_eps.rows()) {
        throw DimensionMismatch("noise mean has length " + std::to_string(mean_.size()) +
                                ", covariance is " + std::to_string(sigma_eps.rows()) + "x" +
                                std::to_string(sigma_eps.rows()));
    }
    Eigen::LLT<Eigen::MatrixXd> llt(sigma_eps);
    if (llt.info() != Eigen::Success) {
        throw NotPsd("noise covariance has no Cholesky factor; it must be positive definite");
    }
    chol_ = llt.matrixL();
}

Eigen::VectorXd NoiseSampler::draw(std::uint64_t seed, std::uint32_t stream,
                                   std::uint64_t draw_index) const {
    const int s = size();
    Eigen::VectorXd z(s);
    for (int lane = 0; 2 * lane < s; ++lane) {
        const auto pair = philox_normal2(
            {seed, stream, draw_index, static_cast<std::uint32_t>(lane)});
        z[2 * lane] = pair[0];
        if (2 * lane + 1 < s) z[2 * lane + 1] = pair[1];
    }
    return mean_ + chol_ * z;
}

McReport run_mc(const DesignMatrix& design, const CovarianceModel& assumed,
                const CovarianceModel& truth, const McOptions& opts) {
    const int s = design.size();
    if (assumed.size() != s || truth.size() != s) {
        throw DimensionMismatch("covariance models sized " + std::to_string(assumed.size()) +
                                " and " + std::to_string(truth.size()) +
                                " do not match the " + std::to_string(s) +
                                "-row design matrix");
    }
    if (opts.n_samples < 2) {
        throw InsufficientSamples("need at least 2 samples to estimate a standard error, got " +
                                  std::to_string(opts.n_samples));
    }

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(s);
    if (opts.bias) {
        if (opts.bias->size() != s) {
            throw DimensionMismatch("bias has length " + std::to_string(opts.bias->size()) +
                                    ", expected " + std::to_string(s));
        }
        mean = *opts.bias;
    }

    const Eigen::Matrix<double, 3, Eigen::Dynamic> gain = wls_gain(design, assumed);
    const Eigen::Matrix3d analytic_cov = mismatch_covariance(design, assumed, truth);
    const MismatchReport analytic =
        expected_sq_error(design, assumed, truth, opts.bias);
    const double analytic_mse =
        opts.analytic_override_m2.value_or(analytic.expected_sq_error_m2);

    const NoiseSampler sampler(truth.sigma_eps, mean);
    const Eigen::VectorXd signal = design.matrix() * opts.delta_r_true;

    const std::uint64_t n = opts.n_samples;
    const std::uint64_t n_blocks = (n + kBlockSize - 1) / kBlockSize;
    std::vector<BlockSums> sums(n_blocks);

    const auto process_block = [&](std::uint64_t block) {
        const std::uint64_t begin = block * kBlockSize;
        const std::uint64_t end = std::min(n, begin + kBlockSize);
        BlockSums acc;
        for (std::uint64_t d = begin; d < end; ++d) {
            const Eigen::VectorXd noise = sampler.draw(opts.seed, opts.stream, d);
            const Eigen::Vector3d estimate = gain * (signal + noise);
            const Eigen::Vector3d e = estimate - opts.delta_r_true;
            const double q = e.squaredNorm();
            acc.q += q;
            acc.q2 += q * q;
            acc.e += e;
            acc.outer += e * e.transpose();
        }
        sums[block] = acc;
    };

    const int threads = resolve_threads(opts.threads, n_blocks);
    if (threads <= 1) {
        for (std::uint64_t block = 0; block < n_blocks; ++block) process_block(block);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::uint64_t block = next.fetch_add(1); block < n_blocks;
                     block = next.fetch_add(1)) {
                    process_block(block);
                }
            });
        }
        for (auto& worker : pool) worker.join();
    }

    BlockSums total;
    for (const BlockSums& acc : sums) {
        total.q += acc.q;
        total.q2 += acc.q2;
        total.e += acc.e;
        total.outer += acc.outer;
    }

    const double dn = static_cast<double>(n);
    const double mean_q = total.q / dn;
    const double var_q = std::max(0.0, (total.q2 - dn * mean_q * mean_q) / (dn - 1.0));
    const double se = std::sqrt(var_q / dn);

    const Eigen::Vector3d e_bar = total.e / dn;
    Eigen::Matrix3d emp_cov =
        (total.outer - dn * (e_bar * e_bar.transpose())) / (dn - 1.0);
    emp_cov = ((emp_cov + emp_cov.transpose()) / 2.0).eval();

    McReport report;
    report.n_samples = n;
    report.seed = opts.seed;
    report.empirical_mean_sq_error_m2 = mean_q;
    report.analytic_sq_error_m2 = analytic_mse;
    report.standard_error_m2 = se;
    report.z_score = se > 0.0 ? (mean_q - analytic_mse) / se : 0.0;
    report.empirical_mean_e = e_bar;
    report.empirical_cov = emp_cov;
    report.analytic_cov = analytic_cov;
    report.cov_frobenius_error = (emp_cov - analytic_cov).norm();
    return report;
}

McReport run_mc(const DesignMatrix& design, const CovarianceModel& model,
                const McOptions& opts) {
    return run_mc(design, model, model, opts);
}

namespace {

std::pair<AssembledScenario, McOptions> scenario_mc_setup(const Scenario& scenario,
                                                          int threads) {
    if (!scenario.mc) {
        throw ValidationError("scenario has no mc settings (n_samples, seed, ...)");
    }
    AssembledScenario assembled = assemble(scenario);
    McOptions opts;
    opts.n_samples = scenario.mc->n_samples;
    opts.seed = scenario.mc->seed;
    opts.threads = threads;
    opts.delta_r_true = scenario.mc->delta_r_true;
    opts.bias = assembled.bias;
    opts.analytic_override_m2 = scenario.mc->analytic_override_m2;
    return {std::move(assembled), std::move(opts)};
}

}  // namespace

McReport run_mc(const Scenario& scenario, int threads) {
    const auto [assembled, opts] = scenario_mc_setup(scenario, threads);
    const CovarianceModel& truth =
        assembled.truth ? *assembled.truth : assembled.assumed;
    return run_mc(assembled.design, assembled.assumed, truth, opts);
}

std::vector<McReport> mc_convergence_sweep(const DesignMatrix& design,
                                           const CovarianceModel& assumed,
                                           const CovarianceModel& truth,
                                           const std::vector<std::uint64_t>& sample_counts,
                                           McOptions opts) {
    if (sample_counts.empty()) {
        throw ValidationError("convergence sweep needs at least one sample count");
    }
    for (std::size_t k = 1; k < sample_counts.size(); ++k) {
        if (sample_counts[k] <= sample_counts[k - 1]) {
            throw ValidationError("sample counts must be strictly increasing");
        }
    }
    const std::uint32_t base_stream = opts.stream;
    std::vector<McReport> reports;
    reports.reserve(sample_counts.size());
    for (std::size_t k = 0; k < sample_counts.size(); ++k) {
        opts.n_samples = sample_counts[k];
        opts.stream = base_stream + static_cast<std::uint32_t>(k);
        reports.push_back(run_mc(design, assumed, truth, opts));
    }
    return reports;
}

std::vector<McReport> mc_convergence_sweep(const Scenario& scenario,
                                           const std::vector<std::uint64_t>& sample_counts,
                                           int threads) {
    const auto [assembled, opts] = scenario_mc_setup(scenario, threads);
    const CovarianceModel& truth =
        assembled.truth ? *assembled.truth : assembled.assumed;
    return mc_convergence_sweep(assembled.design, assembled.assumed, truth, sample_counts,
                                opts);
}

}  // namespace pdop
