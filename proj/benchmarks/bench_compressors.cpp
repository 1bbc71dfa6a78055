#include <benchmark/benchmark.h>

#include <Eigen/Core>

#include "dopt/compressors.hpp"
#include "dopt/rng.hpp"

namespace {

Eigen::VectorXd random_vec(int d, std::uint64_t seed) {
  dopt::SplitMix64 rng(seed);
  Eigen::VectorXd v(d);
  for (int s = 0; s < d; ++s) v[s] = rng.normal();
  return v;
}

void BM_compress_unbiased_lbit(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto c = dopt::Compressor::unbiased_lbit(d, 2);
  const Eigen::VectorXd x = random_vec(d, 1);
  dopt::SplitMix64 rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(c.compress(x, &rng));
}
BENCHMARK(BM_compress_unbiased_lbit)->Arg(50)->Arg(1000);

void BM_compress_top_k(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto c = dopt::Compressor::top_k(d, d / 5);
  const Eigen::VectorXd x = random_vec(d, 3);
  for (auto _ : state) benchmark::DoNotOptimize(c.compress(x));
}
BENCHMARK(BM_compress_top_k)->Arg(50)->Arg(1000);

void BM_compress_norm_sign(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto c = dopt::Compressor::norm_sign(d);
  const Eigen::VectorXd x = random_vec(d, 4);
  for (auto _ : state) benchmark::DoNotOptimize(c.compress(x));
}
BENCHMARK(BM_compress_norm_sign)->Arg(50)->Arg(1000);

void BM_compress_uniform_quantizer(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto c = dopt::Compressor::uniform_quantizer(d, 1.0);
  const Eigen::VectorXd x = random_vec(d, 5);
  for (auto _ : state) benchmark::DoNotOptimize(c.compress(x));
}
BENCHMARK(BM_compress_uniform_quantizer)->Arg(50)->Arg(1000);

void BM_verify_top_k_relative(benchmark::State& state) {
  const auto c = dopt::Compressor::top_k(50, 10);
  const auto a = dopt::AssumptionClass::relative_error(0.2, 1.0);
  for (auto _ : state) {
    dopt::SplitMix64 rng(6);
    benchmark::DoNotOptimize(dopt::verify_assumption(c, a, 100, rng));
  }
}
BENCHMARK(BM_verify_top_k_relative);

}  // namespace
