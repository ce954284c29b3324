// Parallel kernels against their serial references. Thread count follows
// OMP_NUM_THREADS.

#include <random>

#include <benchmark/benchmark.h>

#include "paraunit/param.hpp"
#include "paraunit/serial.hpp"

using namespace paraunit;

namespace {

ComplexMatrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  ComplexMatrix a(r, c);
  for (auto& x : a.entries()) {
    const double re = n(rng);
    x = {re, n(rng)};
  }
  return a;
}

BlaschkePotapovForm form(std::size_t d) { return build_paraunitary(random_params(5, Side::Iso, 4, 3, d, false)); }

void BM_Multiply(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ComplexMatrix a = random_matrix(n, n, 1), b = random_matrix(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}

void BM_MultiplySerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ComplexMatrix a = random_matrix(n, n, 1), b = random_matrix(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(serial::multiply(a, b));
}

void BM_Lu(benchmark::State& state) {
  const ComplexMatrix a = random_matrix(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::lu_factor(a));
}

void BM_LuSerial(benchmark::State& state) {
  const ComplexMatrix a = random_matrix(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(serial::lu_factor(a));
}

void BM_CircleResidual(benchmark::State& state) {
  const auto f = form(8);
  for (auto _ : state) benchmark::DoNotOptimize(circle_residual(f, static_cast<std::size_t>(state.range(0))));
}

void BM_CircleResidualSerial(benchmark::State& state) {
  const auto f = form(8);
  for (auto _ : state) benchmark::DoNotOptimize(serial::circle_residual(f, static_cast<std::size_t>(state.range(0)), 1e-8));
}

void BM_Objective(benchmark::State& state) {
  const auto f = form(4);
  const SampleSet s = circle_samples(form(3), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(objective(f, s));
}

void BM_ObjectiveSerial(benchmark::State& state) {
  const auto f = form(4);
  const SampleSet s = circle_samples(form(3), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::objective(f, s));
}

void BM_Fit(benchmark::State& state) {
  const SampleSet s = circle_samples(build_paraunitary(random_params(9, Side::Iso, 2, 1, 1, true)), 64);
  NelderMeadOptions opts;
  opts.max_evaluations = 2000;
  for (auto _ : state) benchmark::DoNotOptimize(fit_lossless(s, 1, 2, 1, Side::Iso, 1, 4, opts));
}

void BM_FitSerial(benchmark::State& state) {
  const SampleSet s = circle_samples(build_paraunitary(random_params(9, Side::Iso, 2, 1, 1, true)), 64);
  NelderMeadOptions opts;
  opts.max_evaluations = 2000;
  for (auto _ : state) benchmark::DoNotOptimize(serial::fit_lossless(s, 1, 2, 1, Side::Iso, 1, 4, opts));
}

}  // namespace

BENCHMARK(BM_Multiply)->Arg(64)->Arg(256);
BENCHMARK(BM_MultiplySerial)->Arg(64)->Arg(256);
BENCHMARK(BM_Lu)->Arg(128)->Arg(384);
BENCHMARK(BM_LuSerial)->Arg(128)->Arg(384);
BENCHMARK(BM_CircleResidual)->Arg(256)->Arg(4096);
BENCHMARK(BM_CircleResidualSerial)->Arg(256)->Arg(4096);
BENCHMARK(BM_Objective)->Arg(256)->Arg(4096);
BENCHMARK(BM_ObjectiveSerial)->Arg(256)->Arg(4096);
BENCHMARK(BM_Fit)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FitSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
