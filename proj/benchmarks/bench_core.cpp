#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "pdop/constellation.hpp"
#include "pdop/covmodel.hpp"
#include "pdop/dop_analysis.hpp"
#include "pdop/estimator.hpp"
#include "pdop/montecarlo.hpp"

namespace {

using namespace pdop;

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

/// Deterministic well-conditioned geometry: s satellites spiralling in
/// azimuth from 15 to 75 degrees elevation.
DesignMatrix spiral_geometry(int s) {
    Eigen::Matrix<double, Eigen::Dynamic, 3> rows(s, 3);
    for (int i = 0; i < s; ++i) {
        const double az = kDegToRad * (360.0 * i) / s;
        const double el = kDegToRad * (15.0 + 60.0 * i / std::max(1, s - 1));
        rows.row(i) << std::cos(el) * std::sin(az), std::cos(el) * std::cos(az), std::sin(el);
    }
    return DesignMatrix::from_rows(rows);
}

Eigen::MatrixXd random_spd(int s) {
    std::mt19937_64 rng(911);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd b(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) b(i, j) = normal(rng);
    return b * b.transpose() + 0.1 * Eigen::MatrixXd::Identity(s, s);
}

void BM_PdopScaledIdentity(benchmark::State& state) {
    const int s = static_cast<int>(state.range(0));
    const DesignMatrix a = spiral_geometry(s);
    const CovarianceModel m = scaled_identity(1.0, s);
    for (auto _ : state) benchmark::DoNotOptimize(pdop::pdop(a, m).pdop);
}
BENCHMARK(BM_PdopScaledIdentity)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_CompositeModelBuild(benchmark::State& state) {
    const int s = static_cast<int>(state.range(0));
    const Eigen::MatrixXd gamma_kn = random_spd(s);
    for (auto _ : state) benchmark::DoNotOptimize(composite(1.0, gamma_kn).precision.sum());
}
BENCHMARK(BM_CompositeModelBuild)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_WlsSolve(benchmark::State& state) {
    const int s = static_cast<int>(state.range(0));
    const DesignMatrix a = spiral_geometry(s);
    const CovarianceModel m = composite(1.0, random_spd(s));
    Observation obs;
    obs.b = Eigen::VectorXd::LinSpaced(s, -1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(wls_solve(a, obs, m).delta_r_hat.sum());
}
BENCHMARK(BM_WlsSolve)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_ExpectedSqError(benchmark::State& state) {
    const int s = static_cast<int>(state.range(0));
    const DesignMatrix a = spiral_geometry(s);
    const CovarianceModel model = scaled_identity(1.0, s);
    const CovarianceModel truth = composite(1.0, random_spd(s));
    for (auto _ : state) {
        benchmark::DoNotOptimize(expected_sq_error(a, model, truth).expected_sq_error_m2);
    }
}
BENCHMARK(BM_ExpectedSqError)->Arg(8)->Arg(32);

void BM_NoiseSamplerDraw(benchmark::State& state) {
    const int s = static_cast<int>(state.range(0));
    const NoiseSampler sampler(random_spd(s));
    std::uint64_t draw = 0;
    for (auto _ : state) benchmark::DoNotOptimize(sampler.draw(7, 0, draw++).sum());
}
BENCHMARK(BM_NoiseSamplerDraw)->Arg(8)->Arg(32);

void BM_RunMc(benchmark::State& state) {
    const DesignMatrix a = spiral_geometry(8);
    const CovarianceModel m = scaled_identity(1.0, 8);
    McOptions opts;
    opts.n_samples = static_cast<std::size_t>(state.range(0));
    opts.seed = 3;
    for (auto _ : state) benchmark::DoNotOptimize(run_mc(a, m, opts).empirical_mean_sq_error_m2);
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_RunMc)->Arg(4096)->Arg(65536)->Unit(benchmark::kMillisecond);

void BM_WalkerConstellation(benchmark::State& state) {
    WalkerSpec spec;
    spec.total = static_cast<int>(state.range(0));
    spec.planes = 6;
    spec.phasing = 2;
    spec.inclination_deg = 55.0;
    spec.altitude_m = 20200000.0;
    for (auto _ : state) benchmark::DoNotOptimize(walker_constellation(spec).size());
}
BENCHMARK(BM_WalkerConstellation)->Arg(24)->Arg(66);

}  // namespace

BENCHMARK_MAIN();
