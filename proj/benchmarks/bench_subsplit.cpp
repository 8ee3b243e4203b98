#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "subsplit/experiment.hpp"
#include "subsplit/iteration.hpp"
#include "subsplit/linalg.hpp"
#include "subsplit/spectral.hpp"
#include "subsplit/splitting.hpp"

namespace {

subsplit::Matrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    subsplit::Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = normal(gen);
    return m;
}

const std::vector<subsplit::Subspace>& instance() {
    static const std::vector<subsplit::Subspace> subspaces =
        subsplit::random_instance(20220525, 0, 6, {5, 5, 5}).subspaces;
    return subspaces;
}

subsplit::SchemeKind kind_of(const benchmark::State& state) {
    return static_cast<subsplit::SchemeKind>(state.range(0));
}

void scheme_args(benchmark::internal::Benchmark* b) {
    for (auto k : {subsplit::SchemeKind::kRyu, subsplit::SchemeKind::kMalitskyTam,
                   subsplit::SchemeKind::kCampoy, subsplit::SchemeKind::kPocs}) {
        b->Arg(static_cast<int>(k));
    }
}

}  // namespace

static void BM_Pseudoinverse(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const subsplit::Matrix a = gaussian(n, n, 1);
    for (auto _ : state) benchmark::DoNotOptimize(subsplit::pseudoinverse(a));
}
BENCHMARK(BM_Pseudoinverse)->Arg(6)->Arg(12)->Arg(24);

static void BM_GeneralEigenvalues(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const subsplit::Matrix a = gaussian(n, n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(subsplit::general_eigenvalues(a));
}
BENCHMARK(BM_GeneralEigenvalues)->Arg(6)->Arg(12)->Arg(24);

static void BM_BuildScheme(benchmark::State& state) {
    const auto kind = kind_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(subsplit::build_scheme(kind, instance()));
    state.SetLabel(std::string(subsplit::to_string(kind)));
}
BENCHMARK(BM_BuildScheme)->Apply(scheme_args);

static void BM_RateBounds(benchmark::State& state) {
    const auto scheme = subsplit::build_scheme(kind_of(state), instance());
    for (auto _ : state) benchmark::DoNotOptimize(subsplit::rate_bounds(scheme, 0.5));
    state.SetLabel(std::string(subsplit::to_string(scheme.kind)));
}
BENCHMARK(BM_RateBounds)->Apply(scheme_args);

static void BM_CountIterations(benchmark::State& state) {
    const auto scheme = subsplit::build_scheme(kind_of(state), instance());
    const double lambda = subsplit::exp3_default_lambda(scheme.kind);
    const subsplit::Matrix relaxed = subsplit::relax(scheme.T, lambda);
    const subsplit::Vector z0 =
        subsplit::lift_start(scheme, subsplit::random_start(20220525, 0, scheme.ambient_dim));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            subsplit::count_iterations(scheme, relaxed, z0, 1e-6, 10000));
    }
    state.SetLabel(std::string(subsplit::to_string(scheme.kind)));
}
BENCHMARK(BM_CountIterations)->Apply(scheme_args);

BENCHMARK_MAIN();
