#include <benchmark/benchmark.h>

#include <cmath>

#include "dzo/algorithms.hpp"
#include "dzo/estimators.hpp"
#include "dzo/experiment.hpp"

using namespace dzo;

namespace {

ObjectiveSuite benchmark_suite(int d, int n) {
  RngStream rng(1, stream_tag::suite, 0);
  return make_logistic_suite(d, n, rng);
}

Eigen::MatrixXd init_rows(int n, int d) {
  RngStream rng(1, stream_tag::init, 0);
  Eigen::MatrixXd x(n, d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) x(i, k) = rng.normal();
  return x;
}

void BM_sample_sphere(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  RngStream rng(7, 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_sphere(d, rng));
}
BENCHMARK(BM_sample_sphere)->Arg(16)->Arg(64)->Arg(256);

void BM_estimate_2point(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const ObjectiveSuite suite = benchmark_suite(d, 2);
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(d, 0.3);
  RngStream rng(7, 0, 0);
  const Eigen::VectorXd z = sample_sphere(d, rng);
  QueryCounter q;
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_2point(suite.value[0], x, 0.1, z, q));
}
BENCHMARK(BM_estimate_2point)->Arg(16)->Arg(64)->Arg(256);

void BM_estimate_2d_point(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const ObjectiveSuite suite = benchmark_suite(d, 2);
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(d, 0.3);
  QueryCounter q;
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_2d_point(suite.value[0], x, 0.1, q));
}
BENCHMARK(BM_estimate_2d_point)->Arg(16)->Arg(64);

void BM_consensus_apply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int d = static_cast<int>(state.range(1));
  const MixingMatrix w =
      metropolis_weights(build_geometric_sphere(n, std::acos(-1.0) / 4, 1));
  const Eigen::MatrixXd x = init_rows(n, d);
  for (auto _ : state) benchmark::DoNotOptimize(consensus_apply(w, x));
}
BENCHMARK(BM_consensus_apply)->Args({50, 64})->Args({100, 64});

void BM_spectral_gap(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const MixingMatrix w =
      metropolis_weights(build_geometric_sphere(n, std::acos(-1.0) / 4, 1));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_gap(w.w));
}
BENCHMARK(BM_spectral_gap)->Arg(50)->Arg(100);

void BM_dgd_step(benchmark::State& state) {
  const int d = 64, n = 50;
  const ObjectiveSuite suite = benchmark_suite(d, n);
  const MixingMatrix w =
      metropolis_weights(build_geometric_sphere(n, std::acos(-1.0) / 4, 1));
  const ZeroOrderView view(suite);
  SwarmState st = SwarmState::initial(init_rows(n, d));
  for (auto _ : state) alg1_step(st, view, w, 1e-4, 0.1, 3);
}
BENCHMARK(BM_dgd_step);

void BM_tracking_step(benchmark::State& state) {
  const int d = 64, n = 50;
  const ObjectiveSuite suite = benchmark_suite(d, n);
  const MixingMatrix w =
      metropolis_weights(build_geometric_sphere(n, std::acos(-1.0) / 4, 1));
  const ZeroOrderView view(suite);
  SwarmState st = SwarmState::initial(init_rows(n, d));
  for (auto _ : state) alg2_step(st, view, w, 1e-4, 0.1);
}
BENCHMARK(BM_tracking_step);

}  // namespace

BENCHMARK_MAIN();
