// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>

#include "bdm/fisher.hpp"
#include "bdm/kernels.hpp"
#include "bdm/sampler.hpp"

using namespace bdm;

namespace {

ParamVector bench_theta(std::size_t n) {
  return design_params({WeightFamily::exponential(), n, l_value(LRule::Log, n)});
}

void BM_PairMoments(benchmark::State& state) {
  const ParamVector theta = bench_theta(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::pair_moments(theta, WeightFamily::exponential(), true));
}

void BM_PairMomentsSerial(benchmark::State& state) {
  const ParamVector theta = bench_theta(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::pair_moments_serial(theta, WeightFamily::exponential(), true));
}

void BM_FisherInfo(benchmark::State& state) {
  const ParamVector theta = bench_theta(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fisher_info(theta, WeightFamily::exponential()));
}

void BM_FisherInfoSerial(benchmark::State& state) {
  const ParamVector theta = bench_theta(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fisher_info_serial(theta, WeightFamily::exponential()));
}

Eigen::MatrixXd bench_weights(std::size_t n) {
  return sample_graph(bench_theta(n), WeightFamily::exponential(), 1).weights();
}

void BM_Margins(benchmark::State& state) {
  const Eigen::MatrixXd w = bench_weights(static_cast<std::size_t>(state.range(0)));
  Eigen::VectorXd rows, cols;
  for (auto _ : state) {
    kernels::margins(w, rows, cols);
    benchmark::DoNotOptimize(rows.data());
  }
}

void BM_MarginsSerial(benchmark::State& state) {
  const Eigen::MatrixXd w = bench_weights(static_cast<std::size_t>(state.range(0)));
  Eigen::VectorXd rows, cols;
  for (auto _ : state) {
    kernels::margins_serial(w, rows, cols);
    benchmark::DoNotOptimize(rows.data());
  }
}

}  // namespace

BENCHMARK(BM_PairMoments)->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(BM_PairMomentsSerial)->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(BM_FisherInfo)->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(BM_FisherInfoSerial)->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(BM_Margins)->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(BM_MarginsSerial)->RangeMultiplier(4)->Range(64, 1024);

BENCHMARK_MAIN();
