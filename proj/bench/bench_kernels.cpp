// Serial reference kernels against their OpenMP counterparts.

#include <cmath>
#include <numbers>
#include <vector>

#include <benchmark/benchmark.h>

#include "dualpredict/kernels.hpp"
#include "dualpredict/process_models.hpp"
#include "dualpredict/verify.hpp"

namespace {

using namespace dualpredict;

Matrix ar1_covariance(Eigen::Index size) {
  const ComplexVector gamma = autocovariances(ProcessModel::ar1(Complex(0.6, 0.2)), static_cast<std::size_t>(size));
  Matrix out(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = 0; j < size; ++j) {
      out(i, j) = i >= j ? gamma[static_cast<std::size_t>(i - j)] : std::conj(gamma[static_cast<std::size_t>(j - i)]);
    }
  }
  return out;
}

Matrix lower_factor(Eigen::Index size) {
  Matrix lower;
  (void)kernels::serial::cholesky(ar1_covariance(size), 0.0, lower);
  return lower;
}

template <auto Kernel>
void BM_Cholesky(benchmark::State& state) {
  const Matrix cov = ar1_covariance(state.range(0));
  Matrix lower;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Kernel(cov, 0.0, lower));
  }
}

template <auto Kernel>
void BM_LowerInverse(benchmark::State& state) {
  const Matrix lower = lower_factor(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Kernel(lower));
  }
}

template <auto Kernel>
void BM_LowerGram(benchmark::State& state) {
  const Matrix a = kernels::serial::lower_inverse(lower_factor(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Kernel(a));
  }
}

template <auto Kernel>
void BM_Trapezoid(benchmark::State& state) {
  std::vector<double> f(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double lambda = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(i) / (f.size() - 1.0);
    f[i] = 1.0 / (1.25 - std::cos(lambda));
  }
  long lag = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Kernel(f, lag++ % 64));
  }
}

void BM_VerifyCorpus(benchmark::State& state) {
  VerifyOptions options;
  options.instances = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_verification(options));
  }
}

BENCHMARK(BM_Cholesky<kernels::serial::cholesky>)->Name("cholesky/serial")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_Cholesky<kernels::parallel::cholesky>)->Name("cholesky/parallel")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_LowerInverse<kernels::serial::lower_inverse>)->Name("lower_inverse/serial")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_LowerInverse<kernels::parallel::lower_inverse>)
    ->Name("lower_inverse/parallel")
    ->Arg(128)
    ->Arg(256)
    ->Arg(512);
BENCHMARK(BM_LowerGram<kernels::serial::lower_gram>)->Name("lower_gram/serial")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_LowerGram<kernels::parallel::lower_gram>)->Name("lower_gram/parallel")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_Trapezoid<kernels::serial::trapezoid_fourier>)->Name("trapezoid/serial")->Arg(1 << 14);
BENCHMARK(BM_Trapezoid<kernels::parallel::trapezoid_fourier>)->Name("trapezoid/parallel")->Arg(1 << 14);
BENCHMARK(BM_VerifyCorpus)->Name("verify_corpus")->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
