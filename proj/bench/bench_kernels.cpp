#include <benchmark/benchmark.h>

#include "nlsgibbs/disc_spectrum.hpp"
#include "nlsgibbs/gff.hpp"
#include "nlsgibbs/kernels.hpp"

using namespace nlsgibbs;

namespace {

const DiscEigenbasis &basis() {
    static const DiscEigenbasis b = DiscEigenbasis::build(256);
    return b;
}

void BM_SampleBatchSerial(benchmark::State &state) {
    const GaussianSampler sampler(basis(), 1);
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::sample_batch_serial(sampler, 0, n, 0, 256, 4.0));
    }
}

void BM_SampleBatchParallel(benchmark::State &state) {
    const GaussianSampler sampler(basis(), 1);
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::sample_batch_parallel(sampler, 0, n, 0, 256, 4.0));
    }
}

void BM_GalerkinSerial(benchmark::State &state) {
    const Eigen::VectorXd v = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(basis().quad().size()), 1.0);
    const auto dim = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::galerkin_serial(basis(), v, dim));
    }
}

void BM_GalerkinParallel(benchmark::State &state) {
    const Eigen::VectorXd v = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(basis().quad().size()), 1.0);
    const auto dim = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::galerkin_parallel(basis(), v, dim));
    }
}

}  // namespace

BENCHMARK(BM_SampleBatchSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleBatchParallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GalerkinSerial)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GalerkinParallel)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
